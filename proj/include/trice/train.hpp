#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trice/device_map.hpp"
#include "trice/kpp.hpp"
#include "trice/network.hpp"
#include "trice/noise.hpp"

namespace trice {

/// How a noise scale in `NoiseSpec::sigma` maps onto weight space.
///  - Direct: sigma is already the per-coordinate weight-space scale.
///  - DeviceLaw: sigma is in device-conductance units and is converted per
///    tensor to max|W| * sigma * weight_sigma_factor(quant), so training noise
///    statistically mirrors the device-induced weight deviation.
enum class NoiseScaling { Direct, DeviceLaw };

struct NoiseInjection {
    NoiseSpec spec;
    NoiseScaling scaling = NoiseScaling::Direct;
    QuantConfig quant;  // consulted by DeviceLaw only
};

/// One pass over the dataset (Alg-style noise-injection training): each
/// mini-batch samples a fresh per-coordinate weight perturbation, gradients
/// are taken at the perturbed weights, and the clean weights receive the SGD
/// update. The perturbation itself is never persisted.
NetworkWeights noise_train_epoch(const Network& net, const NetworkWeights& weights,
                                 const NoiseInjection& noise, const Dataset& data, double alpha,
                                 std::uint64_t epoch_key, int batch_size);

/// In-place variant used by the training drivers; returns the mean batch loss
/// of the epoch.
double noise_train_epoch_inplace(const Network& net, NetworkWeights& weights,
                                 const NoiseInjection& noise, const Dataset& data, double alpha,
                                 std::uint64_t epoch_key, int batch_size);

/// Single-coordinate noise-injected update on an arbitrary scalar loss:
/// draws dw, evaluates the gradient at w + dw, steps the clean w. Used to
/// study the expected-update law on toy losses.
template <typename GradFn>
double noise_injected_step(double w, GradFn&& grad_at, const NoiseSpec& noise, double alpha,
                           StreamRng& rng) {
    const double dw = sample(noise, rng);
    return w - alpha * grad_at(w + dw);
}

/// Deterministic Fisher-Yates shuffle of dataset rows.
Dataset shuffle_dataset(const Dataset& data, std::uint64_t key);

/// Step-decay learning rate: x0.1 after 50% of the epochs, x0.01 after 75%.
double scheduled_alpha(double base_alpha, int epoch, int total_epochs);

// ---------------------------------------------------------------------------
// Adaptive noise-scale search

struct SearchState {
    double start = 0.0;
    double end = 0.0;
    NetworkWeights w_left, w_mid, w_right;

    double left() const { return start + (end - start) * 0.25; }
    double mid() const { return start + (end - start) * 0.5; }
    double right() const { return start + (end - start) * 0.75; }
    bool converged(double tol = 1e-4) const { return end - start < tol; }
};

enum class Winner { Left, Mid, Right };

const char* winner_name(Winner w);

/// Pick the best candidate; ties prefer mid, then left.
Winner rank_candidates(double kpp_left, double kpp_mid, double kpp_right);

/// Contract the search range and reassign candidate weights:
///   mid wins:   [start,end] <- [left,right], outer candidates copy mid;
///   left wins:  end <- right, mid and right candidates copy left;
///   right wins: start <- left, left and mid candidates copy right.
void binary_search_update(SearchState& state, Winner winner);

struct TrainConfig {
    int epochs = 100;
    int warm = 5;
    double alpha = 0.1;
    int batch_size = 64;
    double th = 2.0;     // censoring threshold, in units of sigma_t
    double start = 0.0;  // sigma_t search range, device-conductance units
    double end = 0.0;
    int n_train = 300;  // MC samples per in-training KPP estimate
    double q = 0.01;
    std::uint64_t seed = 0;
    QuantConfig quant;
    DeviceModel device;

    void validate() const;
};

struct EpochRecord {
    int epoch = 0;
    double start = 0.0;
    double end = 0.0;
    double kpp_left = -1.0;
    double kpp_mid = -1.0;
    double kpp_right = -1.0;
    std::string chosen;  // left | mid | right | warmup | converged
};

struct TriceResult {
    NetworkWeights weights;
    double sigma_t = 0.0;
    bool converged = false;
    double final_start = 0.0;
    double final_end = 0.0;
    std::vector<EpochRecord> history;
};

/// Adaptive training: three candidates train with right-censored Gaussian
/// noise at the three quartiles of [start, end]; after the warm-up epochs the
/// in-training KPP of each candidate drives the range contraction, and once
/// the range collapses a single model continues at sigma_t = start. If the
/// epoch budget runs out first, the mid candidate is returned.
TriceResult trice_train(const Network& net, const TrainConfig& cfg, const Dataset& train,
                        const Dataset& val);

enum class BaselineMethod { None, Gaussian };

/// Vanilla SGD, or Gaussian noise injection whose weight-space scale matches
/// the device-induced deviation of the target device variation.
NetworkWeights train_baseline(const Network& net, const TrainConfig& cfg, BaselineMethod method,
                              const Dataset& train);

/// Fixed-noise training used by the manual / ablation methods (rc_manual, lc,
/// rt, lt): one model, DeviceLaw-scaled noise of the given kind.
NetworkWeights train_fixed_noise(const Network& net, const TrainConfig& cfg, const NoiseSpec& spec,
                                 const Dataset& train);

}  // namespace trice
