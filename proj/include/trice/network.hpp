#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "trice/tensor.hpp"

namespace trice {

enum class LayerKind { Linear, Conv2d, Relu, MaxPool2d, Flatten };

const char* layer_kind_name(LayerKind kind);

struct LayerSpec {
    LayerKind kind = LayerKind::Flatten;
    // linear
    int in_features = 0;
    int out_features = 0;
    // conv2d
    int in_channels = 0;
    int out_channels = 0;
    int kernel = 0;
    int stride = 1;
    int padding = 0;
    // maxpool2d
    int pool = 0;

    static LayerSpec linear(int in_features, int out_features);
    static LayerSpec conv2d(int in_channels, int out_channels, int kernel, int stride = 1,
                            int padding = 0);
    static LayerSpec relu();
    static LayerSpec maxpool2d(int pool);
    static LayerSpec flatten();

    bool has_weights() const { return kind == LayerKind::Linear || kind == LayerKind::Conv2d; }
};

/// A network is an ordered list of layers; weighted layers consume entries of
/// NetworkWeights in order of appearance.
using Network = std::vector<LayerSpec>;

struct LayerWeights {
    Tensor weight;
    Tensor bias;
    double max_abs = 0.0;  // per-tensor quantization range
};

struct NetworkWeights {
    std::vector<LayerWeights> layers;
};

struct GradientSlice {
    Tensor weight;
    Tensor bias;
};

/// Gradients mirror the shapes of NetworkWeights.
struct Gradients {
    std::vector<GradientSlice> layers;
};

struct Dataset {
    Tensor inputs;            // (N, ...) batch
    std::vector<int> labels;  // class indices in [0, num_classes)
    int num_classes = 0;

    std::int64_t count() const { return inputs.shape.empty() ? 0 : inputs.dim(0); }
    /// Rows [begin, end) as a new dataset.
    Dataset slice(std::int64_t begin, std::int64_t end) const;
    void validate() const;
};

// ---------------------------------------------------------------------------
// Activation quantization

/// Clamp to [lo, hi] and snap to the uniform grid of 2^bits levels spanning
/// that range. Ties round up.
Tensor quantize_to_range(const Tensor& t, int bits, double lo, double hi);

/// Snap a tensor onto the grid spanned by its own [min, max] range.
Tensor quantize_activations(const Tensor& t, int bits);

/// Per-layer output quantizer. Calibrate ranges on one or more batches, then
/// the frozen ranges are applied after every conv / linear / relu layer during
/// inference.
class ActQuantizer {
public:
    ActQuantizer(int bits, std::size_t num_layers);

    void observe(std::size_t layer, const Tensor& out);
    bool has_range(std::size_t layer) const;
    void apply(std::size_t layer, Tensor& out) const;

    int bits() const { return bits_; }
    std::pair<double, double> range(std::size_t layer) const;

private:
    int bits_;
    std::vector<std::pair<double, double>> ranges_;
    std::vector<bool> seen_;
};

/// One calibration pass over `batch`, recording per-layer output ranges.
void calibrate_act_quantizer(ActQuantizer& aq, const Network& net, const NetworkWeights& weights,
                             const Tensor& batch);

// ---------------------------------------------------------------------------
// Core operations

/// He-style uniform fan-in initialization; biases start at zero.
NetworkWeights init_weights(const Network& net, std::uint64_t seed);

/// Recompute each weight tensor's max_abs from its current values.
void refresh_max_abs(NetworkWeights& weights);

Gradients zero_gradients(const NetworkWeights& weights);

/// Run the network on a batch; returns logits of shape (batch, classes).
Tensor forward(const Network& net, const NetworkWeights& weights, const Tensor& batch,
               const ActQuantizer* aq = nullptr);

struct LossGrad {
    double loss = 0.0;
    Gradients grads;
};

/// Mean softmax cross-entropy over the batch with exact gradients w.r.t. the
/// supplied weights.
LossGrad loss_and_grad(const Network& net, const NetworkWeights& weights, const Tensor& batch,
                       const std::vector<int>& labels);

/// Forward-only mean cross-entropy.
double mean_loss(const Network& net, const NetworkWeights& weights, const Tensor& batch,
                 const std::vector<int>& labels, const ActQuantizer* aq = nullptr);

/// w <- w - alpha * g, as a fresh copy. The inplace variant is what the
/// training loops use.
NetworkWeights sgd_step(const NetworkWeights& weights, const Gradients& grads, double alpha);
void sgd_step_inplace(NetworkWeights& weights, const Gradients& grads, double alpha);

/// Fraction of argmax-correct predictions; ties break to the lowest class
/// index.
double evaluate_accuracy(const Network& net, const NetworkWeights& weights, const Dataset& data,
                         const ActQuantizer* aq = nullptr, int batch_size = 128);

// ---------------------------------------------------------------------------
// Topology presets

Network make_mlp(int input_dim, int hidden, int classes);
Network make_lenet(int classes = 10);

}  // namespace trice
