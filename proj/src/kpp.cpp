#include "trice/kpp.hpp"

#include <algorithm>
#include <cmath>

#include "trice/errors.hpp"

namespace trice {

void EvalConfig::validate() const {
    if (n_sample < 1) throw ConfigError("n_sample must be >= 1");
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("q must be in (0, 1)");
    quant.validate();
    device.validate(quant);
}

int percentile_index(std::int64_t n, double q) {
    if (n < 1) throw ConfigError("percentile_index: need at least one sample");
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("percentile_index: q must be in (0, 1)");
    const auto idx = static_cast<std::int64_t>(std::floor(q * static_cast<double>(n)));
    return static_cast<int>(std::min(idx, n - 1));
}

std::pair<double, double> ci_order_statistic(const std::vector<double>& sorted, double q,
                                             bool* too_few) {
    if (sorted.empty()) throw ConfigError("ci_order_statistic: empty sample list");
    const auto n = static_cast<std::int64_t>(sorted.size());
    if (too_few != nullptr) *too_few = false;
    if (n < 30) {
        if (too_few != nullptr) *too_few = true;
        return {sorted.front(), sorted.back()};
    }
    const double nq = static_cast<double>(n) * q;
    const double half = 1.96 * std::sqrt(static_cast<double>(n) * q * (1.0 - q));
    auto rank = [n](double r) {
        return static_cast<std::size_t>(std::clamp<std::int64_t>(
            static_cast<std::int64_t>(std::llround(r)), 0, n - 1));
    };
    return {sorted[rank(nq - half)], sorted[rank(nq + half)]};
}

KppEstimate kpp_from_samples(std::vector<double> samples, double q, Metric metric,
                             bool keep_samples) {
    if (samples.empty()) throw ConfigError("kpp_from_samples: no samples");
    std::sort(samples.begin(), samples.end());
    // For lower-better metrics the k-th percentile of interest is the upper
    // tail of the ascending list.
    const double q_pos = (metric == Metric::Loss) ? 1.0 - q : q;
    KppEstimate est;
    est.q = q;
    est.n_sample = static_cast<int>(samples.size());
    est.value = samples[static_cast<std::size_t>(percentile_index(est.n_sample, q_pos))];
    std::tie(est.ci_lo, est.ci_hi) = ci_order_statistic(samples, q_pos, &est.ci_wide);
    if (est.ci_lo > est.ci_hi) std::swap(est.ci_lo, est.ci_hi);
    if (keep_samples) est.samples = std::move(samples);
    return est;
}

KppEstimate quant_eval(const Network& net, const NetworkWeights& weights, const EvalConfig& cfg,
                       const Dataset& data, const ActQuantizer* aq) {
    cfg.validate();
    if (data.count() == 0) throw ConfigError("quant_eval: empty dataset");
    const PerturbPlan plan(weights, cfg.quant, cfg.device);
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(cfg.n_sample));
    for (int i = 0; i < cfg.n_sample; ++i) {
        const NetworkWeights w = plan.apply(split_seed(cfg.seed, static_cast<std::uint64_t>(i)));
        double perf;
        if (cfg.metric == Metric::Accuracy) {
            perf = evaluate_accuracy(net, w, data, aq);
        } else {
            perf = mean_loss(net, w, data.inputs, data.labels, aq);
        }
        samples.push_back(perf);
    }
    return kpp_from_samples(std::move(samples), cfg.q, cfg.metric, cfg.keep_samples);
}

}  // namespace trice
