#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "trice/device_map.hpp"
#include "trice/network.hpp"

namespace trice {

/// Flat experiment description; JSON config files use the same field names.
/// Defaults follow the reference hyperparameter setup (epochs=100, warm=5,
/// th=2, n_train=300, n_sample=10000, q=0.01, H=4, B=2, search range
/// [0, 2 sigma_d]).
struct ExperimentConfig {
    std::string model = "lenet";    // lenet | mlp
    std::string dataset = "mnist";  // mnist | synthetic
    std::string data_dir = "data/mnist";
    int train_limit = 0;  // 0 = use everything available
    int eval_limit = 0;
    int val_limit = 0;  // cap on the in-training evaluation split

    QuantConfig quant;            // H=4, B=2
    int act_bits = 4;             // activation quantization; 0 disables
    DeviceKind device = DeviceKind::UniformRram;
    std::vector<double> sigma_d_list = {0.1};
    std::vector<std::string> methods = {"none", "gaussian", "trice"};

    int epochs = 100;
    int warm = 5;
    double alpha = 0.1;
    int batch_size = 64;
    double th = 2.0;
    double start = 0.0;
    double end = -1.0;     // < 0: use 2 * sigma_d
    int n_train = 300;
    double sigma_t = -1.0;  // manual noise scale (rc_manual/lc/rt/lt); < 0: sigma_d

    double q = 0.01;
    int n_sample = 10000;
    std::uint64_t seed = 0;
    int repeat = 1;

    std::string out_dir;  // empty: keep results in memory only

    int synth_classes = 10;
    int synth_per_class = 200;
    double synth_separation = 10.0;

    void validate() const;
};

ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& json_text);

struct ResultRow {
    std::string method;
    std::string device;
    double sigma_d = 0.0;
    double q = 0.0;
    double kpp = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double clean_acc = 0.0;
    std::uint64_t seed = 0;
    double sigma_t_chosen = 0.0;
    bool failed = false;
};

/// Render rows into the versioned CSV schema (header mandatory).
std::string render_csv(const std::vector<ResultRow>& rows);

struct ExperimentData {
    Dataset train;  // training portion (validation split removed)
    Dataset val;    // held-out split for in-training KPP
    Dataset eval;   // evaluation set
};

/// Load + split the dataset named by the config.
ExperimentData prepare_data(const ExperimentConfig& cfg);

struct TrainedModel {
    NetworkWeights weights;
    double sigma_t = 0.0;  // chosen noise scale where applicable
};

/// Train one (method, sigma_d) cell. Exposed for the CLI `train` subcommand.
TrainedModel train_method(const Network& net, const ExperimentConfig& cfg,
                          const std::string& method, double sigma_d, std::uint64_t run_seed,
                          const ExperimentData& data, std::ostream* log_stream = nullptr);

/// Full sweep: for every run / method / sigma_d, train (or reuse), evaluate
/// the k-th percentile performance, and emit one CSV row. Training failures
/// mark the row failed and the sweep continues. All randomness derives from
/// cfg.seed, so identical configs produce byte-identical CSV.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg,
                                      std::ostream* progress = nullptr);

}  // namespace trice
