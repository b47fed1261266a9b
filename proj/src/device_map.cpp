#include "trice/device_map.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include "trice/errors.hpp"

namespace trice {

void QuantConfig::validate() const {
    if (device_bits < 1 || weight_bits < device_bits) {
        throw ConfigError("quantization requires H >= B >= 1, got H=" +
                          std::to_string(weight_bits) + " B=" + std::to_string(device_bits));
    }
    if (weight_bits % device_bits != 0) {
        throw ConfigError("H must be a multiple of B, got H=" + std::to_string(weight_bits) +
                          " B=" + std::to_string(device_bits));
    }
    if (weight_bits > 30) throw ConfigError("weight_bits too large");
}

const char* device_kind_name(DeviceKind kind) {
    switch (kind) {
        case DeviceKind::UniformRram: return "rram";
        case DeviceKind::Fefet1: return "fefet1";
        case DeviceKind::Fefet2: return "fefet2";
    }
    return "?";
}

DeviceKind device_kind_from_name(const std::string& name) {
    if (name == "rram") return DeviceKind::UniformRram;
    if (name == "fefet1") return DeviceKind::Fefet1;
    if (name == "fefet2") return DeviceKind::Fefet2;
    throw ConfigError("unknown device kind '" + name + "' (expected rram, fefet1 or fefet2)");
}

void DeviceModel::validate(const QuantConfig& quant) const {
    if (!(sigma_d >= 0.0) || !std::isfinite(sigma_d)) {
        throw ConfigError("sigma_d must be finite and >= 0");
    }
    if (kind != DeviceKind::UniformRram && quant.device_bits != 2) {
        throw ConfigError("FeFET device models are defined for four-level devices (B=2)");
    }
    if (sigma_d > 0.4) {
        std::cerr << "warning: sigma_d=" << sigma_d
                  << " exceeds the 0.4 range realizable by device-level optimization\n";
    }
}

double DeviceModel::level_sigma(int level) const {
    switch (kind) {
        case DeviceKind::UniformRram:
            return sigma_d;
        case DeviceKind::Fefet1:
            return (level == 1 || level == 2) ? 4.0 * sigma_d : sigma_d;
        case DeviceKind::Fefet2:
            return (level == 1 || level == 2) ? 2.0 * sigma_d : sigma_d;
    }
    return sigma_d;
}

QuantizedWeight quantize_weight(double w, int weight_bits, double max_abs) {
    if (!std::isfinite(w)) throw NumericError("cannot quantize non-finite weight");
    if (!(max_abs > 0.0)) throw ConfigError("max_abs must be positive");
    const double levels = std::ldexp(1.0, weight_bits) - 1.0;
    const double mag = std::min(std::fabs(w), max_abs);
    QuantizedWeight q;
    q.sign = (w < 0.0) ? -1 : 1;
    q.level = static_cast<std::uint32_t>(std::round(mag / max_abs * levels));
    return q;
}

double dequantize_level(int sign, std::uint32_t level, int weight_bits, double max_abs) {
    const double levels = std::ldexp(1.0, weight_bits) - 1.0;
    return sign * (max_abs / levels) * static_cast<double>(level);
}

std::vector<int> split_devices(std::uint32_t level, int weight_bits, int device_bits) {
    const int devices = weight_bits / device_bits;
    const std::uint32_t mask = (1u << device_bits) - 1u;
    std::vector<int> out(static_cast<std::size_t>(devices));
    for (int i = 0; i < devices; ++i) {
        out[static_cast<std::size_t>(i)] = static_cast<int>((level >> (i * device_bits)) & mask);
    }
    return out;
}

double sample_device_noise(const DeviceModel& model, int level, StreamRng& rng) {
    const double sigma = model.level_sigma(level);
    const double u = rng.next_uniform();
    if (sigma == 0.0) return 0.0;
    return sigma * normal_quantile(u);
}

double reconstruct(int sign, const std::vector<double>& perturbed_levels, int weight_bits,
                   int device_bits, double max_abs) {
    const int devices = weight_bits / device_bits;
    if (static_cast<int>(perturbed_levels.size()) != devices) {
        throw ConfigError("reconstruct expects " + std::to_string(devices) + " device levels");
    }
    const double levels = std::ldexp(1.0, weight_bits) - 1.0;
    double sum = 0.0;
    double radix = 1.0;  // 2^(i*B), exact
    for (int i = 0; i < devices; ++i) {
        sum += perturbed_levels[static_cast<std::size_t>(i)] * radix;
        radix *= std::ldexp(1.0, device_bits);
    }
    return sign * (max_abs / levels) * sum;
}

double weight_sigma_factor(const QuantConfig& quant) {
    double sum = 0.0;
    for (int i = 0; i < quant.devices_per_weight(); ++i) {
        sum += std::ldexp(1.0, 2 * i * quant.device_bits);
    }
    return std::sqrt(sum) / (std::ldexp(1.0, quant.weight_bits) - 1.0);
}

NetworkWeights quantize_network_weights(const NetworkWeights& weights, const QuantConfig& quant) {
    quant.validate();
    NetworkWeights out = weights;
    for (auto& lw : out.layers) {
        for (double& v : lw.weight.data) {
            const QuantizedWeight q = quantize_weight(v, quant.weight_bits, lw.max_abs);
            v = dequantize_level(q.sign, q.level, quant.weight_bits, lw.max_abs);
        }
    }
    return out;
}

PerturbPlan::PerturbPlan(const NetworkWeights& base, const QuantConfig& quant,
                         const DeviceModel& model)
    : quant_(quant), base_(base) {
    quant.validate();
    model.validate(quant);
    const double level_count = std::ldexp(1.0, quant.weight_bits) - 1.0;
    const int devices = quant.devices_per_weight();
    tensors_.reserve(base.layers.size());
    for (const auto& lw : base.layers) {
        TensorPlan plan;
        const std::size_t n = lw.weight.data.size();
        plan.scale = lw.max_abs / level_count;
        plan.signs.resize(n);
        plan.levels.resize(n * static_cast<std::size_t>(devices));
        plan.sigmas.resize(n * static_cast<std::size_t>(devices));
        for (std::size_t j = 0; j < n; ++j) {
            const QuantizedWeight q = quantize_weight(lw.weight.data[j], quant.weight_bits, lw.max_abs);
            plan.signs[j] = static_cast<signed char>(q.sign);
            for (int i = 0; i < devices; ++i) {
                const int g = static_cast<int>((q.level >> (i * quant.device_bits)) &
                                               ((1u << quant.device_bits) - 1u));
                plan.levels[j * devices + static_cast<std::size_t>(i)] = static_cast<unsigned char>(g);
                plan.sigmas[j * devices + static_cast<std::size_t>(i)] = model.level_sigma(g);
            }
        }
        tensors_.push_back(std::move(plan));
    }
}

NetworkWeights PerturbPlan::apply(std::uint64_t seed) const {
    NetworkWeights out = base_;
    const int devices = quant_.devices_per_weight();
    for (std::size_t t = 0; t < tensors_.size(); ++t) {
        const TensorPlan& plan = tensors_[t];
        StreamRng rng(split_seed(seed, t));
        auto& data = out.layers[t].weight.data;
        for (std::size_t j = 0; j < data.size(); ++j) {
            double sum = 0.0;
            double radix = 1.0;
            for (int i = 0; i < devices; ++i) {
                const std::size_t k = j * devices + static_cast<std::size_t>(i);
                const double sigma = plan.sigmas[k];
                const double u = rng.next_uniform();
                double g = static_cast<double>(plan.levels[k]);
                if (sigma != 0.0) g += sigma * normal_quantile(u);
                sum += g * radix;
                radix *= std::ldexp(1.0, quant_.device_bits);
            }
            data[j] = plan.signs[j] * plan.scale * sum;
        }
    }
    return out;
}

NetworkWeights perturb_weights(const NetworkWeights& weights, const QuantConfig& quant,
                               const DeviceModel& model, std::uint64_t seed) {
    return PerturbPlan(weights, quant, model).apply(seed);
}

}  // namespace trice
