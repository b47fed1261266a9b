#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "trice/device_map.hpp"
#include "trice/network.hpp"

namespace trice {

/// Which per-sample performance number feeds the percentile. Accuracy is
/// higher-better (the k-th percentile sits in the lower tail); loss is
/// lower-better, so its k-th percentile of interest is the upper tail.
enum class Metric { Accuracy, Loss };

struct EvalConfig {
    int n_sample = 10000;
    double q = 0.01;  // k/100
    std::uint64_t seed = 0;
    QuantConfig quant;
    DeviceModel device;
    Metric metric = Metric::Accuracy;
    bool keep_samples = false;

    void validate() const;
};

struct KppEstimate {
    double value = 0.0;
    double q = 0.0;
    int n_sample = 0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    bool ci_wide = false;  // set when too few samples for the rank interval
    std::vector<double> samples;  // sorted ascending; kept on request
};

/// Index of the q-th percentile in a sorted ascending list of n samples:
/// floor(q * n), clamped to n - 1.
int percentile_index(std::int64_t n, double q);

/// Distribution-free 95% order-statistic interval around the q-quantile:
/// ranks round(n q -+ 1.96 sqrt(n q (1-q))), clamped. Fewer than 30 samples
/// fall back to the full (min, max) range with `too_few` set.
std::pair<double, double> ci_order_statistic(const std::vector<double>& sorted, double q,
                                             bool* too_few = nullptr);

/// Build the estimate from already-collected per-sample performance values.
KppEstimate kpp_from_samples(std::vector<double> samples, double q, Metric metric,
                             bool keep_samples = false);

/// Monte-Carlo k-th percentile performance: n_sample independent device-noise
/// instances of the quantized model, each evaluated on `data`. Sample i uses
/// the substream seed split_seed(seed, i), so any evaluation order produces
/// identical results.
KppEstimate quant_eval(const Network& net, const NetworkWeights& weights, const EvalConfig& cfg,
                       const Dataset& data, const ActQuantizer* aq = nullptr);

}  // namespace trice
