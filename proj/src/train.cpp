#include "trice/train.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "trice/errors.hpp"

namespace trice {

namespace {

// Key-derivation labels for the independent RNG stream families.
enum StreamLabel : std::uint64_t {
    kInitStream = 0x11,
    kShuffleStream = 0x22,
    kNoiseStream = 0x33,
    kEvalStream = 0x44,
};

double tensor_max_abs(const Tensor& t) {
    double m = 0.0;
    for (double v : t.data) m = std::max(m, std::fabs(v));
    return m;
}

}  // namespace

Dataset shuffle_dataset(const Dataset& data, std::uint64_t key) {
    const std::int64_t n = data.count();
    std::vector<std::int64_t> perm(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    StreamRng rng(key);
    for (std::int64_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<std::int64_t>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    const std::int64_t row = n > 0 ? data.inputs.size() / n : 0;
    Dataset out;
    out.num_classes = data.num_classes;
    out.inputs.shape = data.inputs.shape;
    out.inputs.data.resize(data.inputs.data.size());
    out.labels.resize(data.labels.size());
    for (std::int64_t i = 0; i < n; ++i) {
        const std::int64_t src = perm[static_cast<std::size_t>(i)];
        std::copy_n(data.inputs.data.begin() + src * row, row, out.inputs.data.begin() + i * row);
        out.labels[static_cast<std::size_t>(i)] = data.labels[static_cast<std::size_t>(src)];
    }
    return out;
}

double scheduled_alpha(double base_alpha, int epoch, int total_epochs) {
    const int half = total_epochs / 2;
    const int three_quarters = (3 * total_epochs) / 4;
    if (epoch >= three_quarters) return base_alpha * 0.01;
    if (epoch >= half) return base_alpha * 0.1;
    return base_alpha;
}

double noise_train_epoch_inplace(const Network& net, NetworkWeights& weights,
                                 const NoiseInjection& noise, const Dataset& data, double alpha,
                                 std::uint64_t epoch_key, int batch_size) {
    noise.spec.validate();
    data.validate();
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    const std::int64_t n = data.count();
    if (n == 0) throw ConfigError("noise_train_epoch: empty dataset");

    NetworkWeights perturbed = weights;
    double loss_sum = 0.0;
    std::int64_t batches = 0;
    for (std::int64_t begin = 0; begin < n; begin += batch_size, ++batches) {
        const std::int64_t end = std::min<std::int64_t>(begin + batch_size, n);
        const Dataset batch = data.slice(begin, end);
        const std::uint64_t batch_key = split_seed(epoch_key, static_cast<std::uint64_t>(batches));
        for (std::size_t t = 0; t < weights.layers.size(); ++t) {
            const auto& clean = weights.layers[t].weight.data;
            auto& noisy = perturbed.layers[t].weight.data;
            double sigma_w = noise.spec.sigma;
            if (noise.scaling == NoiseScaling::DeviceLaw) {
                sigma_w *= tensor_max_abs(weights.layers[t].weight) * weight_sigma_factor(noise.quant);
            }
            perturbed.layers[t].bias = weights.layers[t].bias;
            if (sigma_w == 0.0) {
                noisy = clean;
                continue;
            }
            NoiseSpec scaled = noise.spec;
            scaled.sigma = sigma_w;
            StreamRng rng(split_seed(batch_key, t));
            for (std::size_t j = 0; j < clean.size(); ++j) {
                noisy[j] = clean[j] + sample(scaled, rng);
            }
        }
        const LossGrad lg = loss_and_grad(net, perturbed, batch.inputs, batch.labels);
        loss_sum += lg.loss;
        sgd_step_inplace(weights, lg.grads, alpha);
    }
    return loss_sum / static_cast<double>(batches);
}

NetworkWeights noise_train_epoch(const Network& net, const NetworkWeights& weights,
                                 const NoiseInjection& noise, const Dataset& data, double alpha,
                                 std::uint64_t epoch_key, int batch_size) {
    NetworkWeights out = weights;
    noise_train_epoch_inplace(net, out, noise, data, alpha, epoch_key, batch_size);
    return out;
}

const char* winner_name(Winner w) {
    switch (w) {
        case Winner::Left: return "left";
        case Winner::Mid: return "mid";
        case Winner::Right: return "right";
    }
    return "?";
}

Winner rank_candidates(double kpp_left, double kpp_mid, double kpp_right) {
    if (kpp_mid >= kpp_left && kpp_mid >= kpp_right) return Winner::Mid;
    if (kpp_left >= kpp_right) return Winner::Left;
    return Winner::Right;
}

void binary_search_update(SearchState& state, Winner winner) {
    const double left = state.left();
    const double right = state.right();
    switch (winner) {
        case Winner::Mid:
            state.start = left;
            state.end = right;
            state.w_left = state.w_mid;
            state.w_right = state.w_mid;
            break;
        case Winner::Left:
            state.end = right;
            state.w_mid = state.w_left;
            state.w_right = state.w_left;
            break;
        case Winner::Right:
            state.start = left;
            state.w_left = state.w_right;
            state.w_mid = state.w_right;
            break;
    }
}

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (warm < 0 || warm >= epochs) throw ConfigError("warm-up epochs must satisfy 0 <= warm < epochs");
    if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(start >= 0.0) || !(end >= start)) throw ConfigError("need 0 <= start <= end");
    if (n_train < 1) throw ConfigError("n_train must be >= 1");
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("q must be in (0, 1)");
    quant.validate();
    device.validate(quant);
}

namespace {

double in_training_kpp(const Network& net, const NetworkWeights& w, const TrainConfig& cfg,
                       const Dataset& val, std::uint64_t eval_seed) {
    EvalConfig ec;
    ec.n_sample = cfg.n_train;
    ec.q = cfg.q;
    ec.seed = eval_seed;
    ec.quant = cfg.quant;
    ec.device = cfg.device;
    NetworkWeights mapped = w;
    refresh_max_abs(mapped);
    return quant_eval(net, mapped, ec, val).value;
}

}  // namespace

TriceResult trice_train(const Network& net, const TrainConfig& cfg, const Dataset& train,
                        const Dataset& val) {
    cfg.validate();
    if (val.count() == 0) throw ConfigError("trice_train: empty validation set");

    SearchState state;
    state.start = cfg.start;
    state.end = cfg.end;
    state.w_left = init_weights(net, split_seed(cfg.seed, kInitStream));
    state.w_mid = state.w_left;
    state.w_right = state.w_left;

    TriceResult result;
    NoiseInjection rc;
    rc.spec.kind = NoiseKind::RightCensored;
    rc.spec.threshold = cfg.th;
    rc.scaling = NoiseScaling::DeviceLaw;
    rc.quant = cfg.quant;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double alpha = scheduled_alpha(cfg.alpha, epoch, cfg.epochs);
        const Dataset shuffled =
            shuffle_dataset(train, split_seed(split_seed(cfg.seed, kShuffleStream),
                                              static_cast<std::uint64_t>(epoch)));
        EpochRecord rec;
        rec.epoch = epoch;
        rec.start = state.start;
        rec.end = state.end;
        auto train_candidate = [&](NetworkWeights& w, double sigma_t, std::uint64_t candidate) {
            rc.spec.sigma = sigma_t;
            const std::uint64_t key = split_seed(
                split_seed(split_seed(cfg.seed, kNoiseStream), candidate),
                static_cast<std::uint64_t>(epoch));
            try {
                noise_train_epoch_inplace(net, w, rc, shuffled, alpha, key, cfg.batch_size);
            } catch (const NumericError& e) {
                throw NumericError("epoch " + std::to_string(epoch) + ": " + e.what());
            }
        };

        if (state.converged()) {
            // Range has collapsed: a single model continues at sigma_t = start.
            train_candidate(state.w_left, state.start, 0);
            rec.chosen = "converged";
            result.history.push_back(rec);
            continue;
        }

        train_candidate(state.w_left, state.left(), 0);
        train_candidate(state.w_mid, state.mid(), 1);
        train_candidate(state.w_right, state.right(), 2);

        if (epoch < cfg.warm) {
            rec.chosen = "warmup";
            result.history.push_back(rec);
            continue;
        }

        const std::uint64_t ek =
            split_seed(split_seed(cfg.seed, kEvalStream), static_cast<std::uint64_t>(epoch));
        rec.kpp_left = in_training_kpp(net, state.w_left, cfg, val, split_seed(ek, 0));
        rec.kpp_mid = in_training_kpp(net, state.w_mid, cfg, val, split_seed(ek, 1));
        rec.kpp_right = in_training_kpp(net, state.w_right, cfg, val, split_seed(ek, 2));
        const Winner winner = rank_candidates(rec.kpp_left, rec.kpp_mid, rec.kpp_right);
        rec.chosen = winner_name(winner);
        binary_search_update(state, winner);
        result.history.push_back(rec);
    }

    result.converged = state.converged();
    result.final_start = state.start;
    result.final_end = state.end;
    if (result.converged) {
        result.weights = std::move(state.w_left);
        result.sigma_t = state.start;
    } else {
        // Epoch budget exhausted before the range collapsed.
        result.weights = std::move(state.w_mid);
        result.sigma_t = state.mid();
    }
    refresh_max_abs(result.weights);
    return result;
}

namespace {

NetworkWeights run_single_model(const Network& net, const TrainConfig& cfg,
                                const NoiseInjection& noise, const Dataset& train) {
    cfg.validate();
    NetworkWeights w = init_weights(net, split_seed(cfg.seed, kInitStream));
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double alpha = scheduled_alpha(cfg.alpha, epoch, cfg.epochs);
        const Dataset shuffled =
            shuffle_dataset(train, split_seed(split_seed(cfg.seed, kShuffleStream),
                                              static_cast<std::uint64_t>(epoch)));
        const std::uint64_t key = split_seed(
            split_seed(split_seed(cfg.seed, kNoiseStream), 0), static_cast<std::uint64_t>(epoch));
        try {
            noise_train_epoch_inplace(net, w, noise, shuffled, alpha, key, cfg.batch_size);
        } catch (const NumericError& e) {
            throw NumericError("epoch " + std::to_string(epoch) + ": " + e.what());
        }
    }
    refresh_max_abs(w);
    return w;
}

}  // namespace

NetworkWeights train_baseline(const Network& net, const TrainConfig& cfg, BaselineMethod method,
                              const Dataset& train) {
    NoiseInjection noise;
    noise.quant = cfg.quant;
    noise.scaling = NoiseScaling::DeviceLaw;
    noise.spec.kind = NoiseKind::Gaussian;
    noise.spec.sigma = (method == BaselineMethod::Gaussian) ? cfg.device.sigma_d : 0.0;
    return run_single_model(net, cfg, noise, train);
}

NetworkWeights train_fixed_noise(const Network& net, const TrainConfig& cfg, const NoiseSpec& spec,
                                 const Dataset& train) {
    NoiseInjection noise;
    noise.spec = spec;
    noise.quant = cfg.quant;
    noise.scaling = NoiseScaling::DeviceLaw;
    return run_single_model(net, cfg, noise, train);
}

}  // namespace trice
