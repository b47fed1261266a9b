#pragma once

#include <cstdint>
#include <vector>

#include "trice/network.hpp"
#include "trice/rng.hpp"

namespace trice {

/// Weight quantization geometry: H bits per weight held by H/B devices of
/// B bits each. H must be a multiple of B.
struct QuantConfig {
    int weight_bits = 4;  // H
    int device_bits = 2;  // B

    void validate() const;
    int devices_per_weight() const { return weight_bits / device_bits; }
};

enum class DeviceKind { UniformRram, Fefet1, Fefet2 };

const char* device_kind_name(DeviceKind kind);
DeviceKind device_kind_from_name(const std::string& name);

/// Conductance deviation law for one device type. Uniform RRAM applies
/// N(0, sigma_d) to every level; the FeFET models scale sigma with the
/// programmed level (larger deviation at the middle levels 1 and 2).
struct DeviceModel {
    DeviceKind kind = DeviceKind::UniformRram;
    double sigma_d = 0.0;

    void validate(const QuantConfig& quant) const;
    double level_sigma(int level) const;
};

struct QuantizedWeight {
    int sign;             // -1 or +1
    std::uint32_t level;  // in [0, 2^H - 1]
};

/// Snap |w| onto the 2^H-level magnitude grid [0, max_abs]; ties round away
/// from zero.
QuantizedWeight quantize_weight(double w, int weight_bits, double max_abs);

/// The real value represented by (sign, level).
double dequantize_level(int sign, std::uint32_t level, int weight_bits, double max_abs);

/// Split a weight level into per-device levels; device 0 holds the least
/// significant B bits.
std::vector<int> split_devices(std::uint32_t level, int weight_bits, int device_bits);

/// One conductance deviation draw for a device programmed to `level`.
double sample_device_noise(const DeviceModel& model, int level, StreamRng& rng);

/// Rebuild a weight value from (possibly perturbed) per-device levels.
double reconstruct(int sign, const std::vector<double>& perturbed_levels, int weight_bits,
                   int device_bits, double max_abs);

/// Standard deviation of the weight-space deviation per unit sigma_d and unit
/// max_abs: sqrt(sum_i 2^(2iB)) / (2^H - 1). Multiply by max_abs * sigma_d to
/// get the induced weight-space sigma under the uniform device law.
double weight_sigma_factor(const QuantConfig& quant);

/// Zero-noise device mapping: every weight becomes its quantized value W_des.
/// Biases stay digital and untouched.
NetworkWeights quantize_network_weights(const NetworkWeights& weights, const QuantConfig& quant);

/// Precomputed device mapping of a fixed weight set, reusable across many
/// noise draws. apply() is deterministic in `seed` and keys one counter-based
/// substream per weight tensor, so results do not depend on evaluation order.
class PerturbPlan {
public:
    PerturbPlan(const NetworkWeights& base, const QuantConfig& quant, const DeviceModel& model);

    NetworkWeights apply(std::uint64_t seed) const;

private:
    struct TensorPlan {
        double scale = 0.0;                 // max_abs / (2^H - 1)
        std::vector<signed char> signs;     // per coordinate
        std::vector<unsigned char> levels;  // per coordinate x device
        std::vector<double> sigmas;         // per coordinate x device
    };

    QuantConfig quant_;
    NetworkWeights base_;
    std::vector<TensorPlan> tensors_;
};

/// Quantize -> split across devices -> sample per-device noise ->
/// reconstruct, for every weight coordinate. Returns a fresh copy; the inputs
/// are not modified.
NetworkWeights perturb_weights(const NetworkWeights& weights, const QuantConfig& quant,
                               const DeviceModel& model, std::uint64_t seed);

}  // namespace trice
