#include "trice/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gemm.hpp"
#include "trice/errors.hpp"
#include "trice/rng.hpp"

namespace trice {

namespace {

std::string layer_label(std::size_t index, const LayerSpec& spec) {
    return "layer " + std::to_string(index) + " (" + layer_kind_name(spec.kind) + ")";
}

[[noreturn]] void shape_fail(std::size_t index, const LayerSpec& spec, const std::string& msg) {
    throw ConfigError(layer_label(index, spec) + ": " + msg);
}

struct ConvDims {
    int batch, in_h, in_w, out_h, out_w, col_rows;
};

ConvDims conv_dims(std::size_t index, const LayerSpec& s, const Tensor& in) {
    if (in.ndim() != 4) shape_fail(index, s, "expected 4-d input (N, C, H, W), got " + in.shape_str());
    if (in.dim(1) != s.in_channels) {
        shape_fail(index, s, "expected " + std::to_string(s.in_channels) + " input channels, got " +
                                 std::to_string(in.dim(1)));
    }
    ConvDims d{};
    d.batch = in.dim(0);
    d.in_h = in.dim(2);
    d.in_w = in.dim(3);
    d.out_h = (d.in_h + 2 * s.padding - s.kernel) / s.stride + 1;
    d.out_w = (d.in_w + 2 * s.padding - s.kernel) / s.stride + 1;
    if (d.out_h <= 0 || d.out_w <= 0) shape_fail(index, s, "kernel larger than padded input");
    d.col_rows = s.in_channels * s.kernel * s.kernel;
    return d;
}

// Gather one image into a (C*k*k, out_h*out_w) patch matrix.
void im2col(const double* img, const LayerSpec& s, const ConvDims& d, double* col) {
    const int k = s.kernel;
    const int out_area = d.out_h * d.out_w;
    for (int c = 0; c < s.in_channels; ++c) {
        const double* plane = img + static_cast<long>(c) * d.in_h * d.in_w;
        for (int ki = 0; ki < k; ++ki) {
            for (int kj = 0; kj < k; ++kj) {
                double* row = col + (static_cast<long>(c) * k * k + ki * k + kj) * out_area;
                for (int oh = 0; oh < d.out_h; ++oh) {
                    const int ih = oh * s.stride + ki - s.padding;
                    double* out = row + static_cast<long>(oh) * d.out_w;
                    if (ih < 0 || ih >= d.in_h) {
                        std::fill(out, out + d.out_w, 0.0);
                        continue;
                    }
                    const double* in_row = plane + static_cast<long>(ih) * d.in_w;
                    for (int ow = 0; ow < d.out_w; ++ow) {
                        const int iw = ow * s.stride + kj - s.padding;
                        out[ow] = (iw >= 0 && iw < d.in_w) ? in_row[iw] : 0.0;
                    }
                }
            }
        }
    }
}

// Scatter-add the patch-matrix gradient back onto one image.
void col2im_accum(const double* col, const LayerSpec& s, const ConvDims& d, double* img) {
    const int k = s.kernel;
    const int out_area = d.out_h * d.out_w;
    for (int c = 0; c < s.in_channels; ++c) {
        double* plane = img + static_cast<long>(c) * d.in_h * d.in_w;
        for (int ki = 0; ki < k; ++ki) {
            for (int kj = 0; kj < k; ++kj) {
                const double* row = col + (static_cast<long>(c) * k * k + ki * k + kj) * out_area;
                for (int oh = 0; oh < d.out_h; ++oh) {
                    const int ih = oh * s.stride + ki - s.padding;
                    if (ih < 0 || ih >= d.in_h) continue;
                    const double* src = row + static_cast<long>(oh) * d.out_w;
                    double* in_row = plane + static_cast<long>(ih) * d.in_w;
                    for (int ow = 0; ow < d.out_w; ++ow) {
                        const int iw = ow * s.stride + kj - s.padding;
                        if (iw >= 0 && iw < d.in_w) in_row[iw] += src[ow];
                    }
                }
            }
        }
    }
}

struct LayerTrace {
    Tensor input;                     // input tensor of the layer
    std::vector<double> cols;        // cached im2col buffers (conv only)
    std::vector<std::int64_t> argmax;  // winning input index per output (maxpool only)
};

struct ForwardResult {
    Tensor output;
    std::vector<LayerTrace> traces;
};

ForwardResult run_forward(const Network& net, const NetworkWeights& weights, const Tensor& batch,
                          const ActQuantizer* aq, ActQuantizer* calibrating, bool keep_trace) {
    std::size_t expected = 0;
    for (const auto& l : net) expected += l.has_weights() ? 1 : 0;
    if (weights.layers.size() != expected) {
        throw ConfigError("network expects " + std::to_string(expected) + " weight entries, got " +
                          std::to_string(weights.layers.size()));
    }

    ForwardResult result;
    if (keep_trace) result.traces.resize(net.size());
    Tensor x = batch;
    std::size_t wi = 0;
    for (std::size_t li = 0; li < net.size(); ++li) {
        const LayerSpec& s = net[li];
        Tensor out;
        LayerTrace* trace = keep_trace ? &result.traces[li] : nullptr;
        switch (s.kind) {
            case LayerKind::Linear: {
                const LayerWeights& lw = weights.layers[wi];
                if (x.ndim() != 2) {
                    shape_fail(li, s, "expected 2-d input (flatten first), got " + x.shape_str());
                }
                if (x.dim(1) != s.in_features) {
                    shape_fail(li, s, "expected " + std::to_string(s.in_features) + " features, got " +
                                          std::to_string(x.dim(1)));
                }
                const int n = x.dim(0);
                out = Tensor::zeros({n, s.out_features});
                detail::gemm_nt_accum(x.ptr(), lw.weight.ptr(), out.ptr(), n, s.in_features,
                                      s.out_features);
                for (int i = 0; i < n; ++i) {
                    double* row = out.ptr() + static_cast<long>(i) * s.out_features;
                    for (int o = 0; o < s.out_features; ++o) row[o] += lw.bias.data[o];
                }
                ++wi;
                break;
            }
            case LayerKind::Conv2d: {
                const LayerWeights& lw = weights.layers[wi];
                const ConvDims d = conv_dims(li, s, x);
                const int out_area = d.out_h * d.out_w;
                out = Tensor::zeros({d.batch, s.out_channels, d.out_h, d.out_w});
                std::vector<double> col(static_cast<std::size_t>(d.col_rows) * out_area);
                if (trace) {
                    trace->cols.resize(static_cast<std::size_t>(d.batch) * d.col_rows * out_area);
                }
                const long in_stride = static_cast<long>(s.in_channels) * d.in_h * d.in_w;
                const long out_stride = static_cast<long>(s.out_channels) * out_area;
                for (int n = 0; n < d.batch; ++n) {
                    double* col_ptr =
                        trace ? trace->cols.data() + static_cast<long>(n) * d.col_rows * out_area
                              : col.data();
                    im2col(x.ptr() + n * in_stride, s, d, col_ptr);
                    double* out_n = out.ptr() + n * out_stride;
                    detail::gemm_nn_accum(lw.weight.ptr(), col_ptr, out_n, s.out_channels, d.col_rows,
                                          out_area);
                    for (int oc = 0; oc < s.out_channels; ++oc) {
                        const double b = lw.bias.data[oc];
                        double* plane = out_n + static_cast<long>(oc) * out_area;
                        for (int p = 0; p < out_area; ++p) plane[p] += b;
                    }
                }
                ++wi;
                break;
            }
            case LayerKind::Relu: {
                out = x;
                for (double& v : out.data) v = v > 0.0 ? v : 0.0;
                break;
            }
            case LayerKind::MaxPool2d: {
                if (x.ndim() != 4) shape_fail(li, s, "expected 4-d input, got " + x.shape_str());
                const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
                const int p = s.pool;
                if (h < p || w < p) shape_fail(li, s, "pool window larger than input");
                const int oh = h / p, ow = w / p;
                out = Tensor::zeros({n, c, oh, ow});
                if (trace) trace->argmax.assign(out.data.size(), 0);
                const double* in = x.ptr();
                double* dst = out.ptr();
                std::int64_t oi = 0;
                for (int ni = 0; ni < n; ++ni) {
                    for (int ci = 0; ci < c; ++ci) {
                        const double* plane =
                            in + (static_cast<long>(ni) * c + ci) * h * w;
                        for (int y = 0; y < oh; ++y) {
                            for (int xo = 0; xo < ow; ++xo, ++oi) {
                                double best = -std::numeric_limits<double>::infinity();
                                std::int64_t best_idx = 0;
                                for (int dy = 0; dy < p; ++dy) {
                                    const long row = static_cast<long>(y * p + dy) * w + xo * p;
                                    for (int dx = 0; dx < p; ++dx) {
                                        const double v = plane[row + dx];
                                        if (v > best) {
                                            best = v;
                                            best_idx = (static_cast<long>(ni) * c + ci) * h * w + row + dx;
                                        }
                                    }
                                }
                                dst[oi] = best;
                                if (trace) trace->argmax[static_cast<std::size_t>(oi)] = best_idx;
                            }
                        }
                    }
                }
                break;
            }
            case LayerKind::Flatten: {
                if (x.ndim() < 2) shape_fail(li, s, "expected batched input, got " + x.shape_str());
                const int n = x.dim(0);
                const int features = static_cast<int>(x.size() / n);
                out = x.reshaped({n, features});
                break;
            }
        }
        if (trace) trace->input = std::move(x);
        if (calibrating != nullptr && s.kind != LayerKind::MaxPool2d && s.kind != LayerKind::Flatten) {
            calibrating->observe(li, out);
        }
        if (aq != nullptr && aq->has_range(li)) aq->apply(li, out);
        x = std::move(out);
    }
    result.output = std::move(x);
    return result;
}

struct SoftmaxLoss {
    double loss;
    Tensor dlogits;
};

SoftmaxLoss softmax_cross_entropy(const Tensor& logits, const std::vector<int>& labels,
                                  bool want_grad) {
    if (logits.ndim() != 2) throw ConfigError("logits must be 2-d, got " + logits.shape_str());
    const int n = logits.dim(0);
    const int classes = logits.dim(1);
    if (static_cast<std::size_t>(n) != labels.size()) {
        throw ConfigError("batch size " + std::to_string(n) + " does not match " +
                          std::to_string(labels.size()) + " labels");
    }
    if (n == 0) throw ConfigError("empty batch");
    SoftmaxLoss res;
    res.loss = 0.0;
    if (want_grad) res.dlogits = Tensor::zeros(logits.shape);
    const double inv_n = 1.0 / n;
    for (int i = 0; i < n; ++i) {
        const int label = labels[static_cast<std::size_t>(i)];
        if (label < 0 || label >= classes) {
            throw ConfigError("label " + std::to_string(label) + " out of range [0, " +
                              std::to_string(classes) + ")");
        }
        const double* row = logits.ptr() + static_cast<long>(i) * classes;
        double max = row[0];
        for (int c = 1; c < classes; ++c) max = std::max(max, row[c]);
        double sum = 0.0;
        for (int c = 0; c < classes; ++c) sum += std::exp(row[c] - max);
        res.loss += (std::log(sum) - (row[label] - max)) * inv_n;
        if (want_grad) {
            double* drow = res.dlogits.ptr() + static_cast<long>(i) * classes;
            const double inv_sum = 1.0 / sum;
            for (int c = 0; c < classes; ++c) {
                drow[c] = std::exp(row[c] - max) * inv_sum * inv_n;
            }
            drow[label] -= inv_n;
        }
    }
    return res;
}

void check_finite(const Tensor& t, std::size_t index, const LayerSpec& spec, const char* what) {
    if (!t.all_finite()) {
        throw NumericError("non-finite " + std::string(what) + " in " + layer_label(index, spec));
    }
}

}  // namespace

const char* layer_kind_name(LayerKind kind) {
    switch (kind) {
        case LayerKind::Linear: return "linear";
        case LayerKind::Conv2d: return "conv2d";
        case LayerKind::Relu: return "relu";
        case LayerKind::MaxPool2d: return "maxpool2d";
        case LayerKind::Flatten: return "flatten";
    }
    return "?";
}

LayerSpec LayerSpec::linear(int in_features, int out_features) {
    if (in_features <= 0 || out_features <= 0) throw ConfigError("linear: dims must be positive");
    LayerSpec s;
    s.kind = LayerKind::Linear;
    s.in_features = in_features;
    s.out_features = out_features;
    return s;
}

LayerSpec LayerSpec::conv2d(int in_channels, int out_channels, int kernel, int stride, int padding) {
    if (in_channels <= 0 || out_channels <= 0 || kernel <= 0 || stride <= 0 || padding < 0) {
        throw ConfigError("conv2d: invalid dims");
    }
    LayerSpec s;
    s.kind = LayerKind::Conv2d;
    s.in_channels = in_channels;
    s.out_channels = out_channels;
    s.kernel = kernel;
    s.stride = stride;
    s.padding = padding;
    return s;
}

LayerSpec LayerSpec::relu() {
    LayerSpec s;
    s.kind = LayerKind::Relu;
    return s;
}

LayerSpec LayerSpec::maxpool2d(int pool) {
    if (pool <= 0) throw ConfigError("maxpool2d: pool must be positive");
    LayerSpec s;
    s.kind = LayerKind::MaxPool2d;
    s.pool = pool;
    return s;
}

LayerSpec LayerSpec::flatten() {
    LayerSpec s;
    s.kind = LayerKind::Flatten;
    return s;
}

Dataset Dataset::slice(std::int64_t begin, std::int64_t end) const {
    const std::int64_t n = count();
    begin = std::clamp<std::int64_t>(begin, 0, n);
    end = std::clamp<std::int64_t>(end, begin, n);
    const std::int64_t row = n > 0 ? inputs.size() / n : 0;
    Dataset out;
    out.num_classes = num_classes;
    std::vector<int> shape = inputs.shape;
    shape[0] = static_cast<int>(end - begin);
    out.inputs.shape = shape;
    out.inputs.data.assign(inputs.data.begin() + begin * row, inputs.data.begin() + end * row);
    out.labels.assign(labels.begin() + begin, labels.begin() + end);
    return out;
}

void Dataset::validate() const {
    if (static_cast<std::size_t>(count()) != labels.size()) {
        throw ConfigError("dataset has " + std::to_string(count()) + " inputs but " +
                          std::to_string(labels.size()) + " labels");
    }
    for (int l : labels) {
        if (l < 0 || (num_classes > 0 && l >= num_classes)) {
            throw ConfigError("dataset label " + std::to_string(l) + " out of range");
        }
    }
}

// ---------------------------------------------------------------------------
// Activation quantization

Tensor quantize_to_range(const Tensor& t, int bits, double lo, double hi) {
    if (bits < 1) throw ConfigError("quantize_to_range: bits must be >= 1");
    if (!(hi > lo)) throw ConfigError("quantize_to_range: empty range");
    const double levels = std::ldexp(1.0, bits) - 1.0;  // 2^bits - 1 steps
    const double scale = (hi - lo) / levels;
    Tensor out = t;
    for (double& v : out.data) {
        double x = std::clamp(v, lo, hi);
        const double k = std::floor((x - lo) / scale + 0.5);  // ties round up
        v = lo + std::min(k, levels) * scale;
    }
    return out;
}

Tensor quantize_activations(const Tensor& t, int bits) {
    if (t.size() == 0) return t;
    const auto [mn, mx] = std::minmax_element(t.data.begin(), t.data.end());
    if (*mx <= *mn) return t;  // constant tensor is already on any grid
    return quantize_to_range(t, bits, *mn, *mx);
}

ActQuantizer::ActQuantizer(int bits, std::size_t num_layers)
    : bits_(bits),
      ranges_(num_layers, {std::numeric_limits<double>::infinity(),
                           -std::numeric_limits<double>::infinity()}),
      seen_(num_layers, false) {
    if (bits < 1) throw ConfigError("ActQuantizer: bits must be >= 1");
}

void ActQuantizer::observe(std::size_t layer, const Tensor& out) {
    if (layer >= ranges_.size() || out.size() == 0) return;
    const auto [mn, mx] = std::minmax_element(out.data.begin(), out.data.end());
    ranges_[layer].first = std::min(ranges_[layer].first, *mn);
    ranges_[layer].second = std::max(ranges_[layer].second, *mx);
    seen_[layer] = true;
}

bool ActQuantizer::has_range(std::size_t layer) const {
    return layer < seen_.size() && seen_[layer] && ranges_[layer].second > ranges_[layer].first;
}

void ActQuantizer::apply(std::size_t layer, Tensor& out) const {
    const auto [lo, hi] = ranges_[layer];
    const double levels = std::ldexp(1.0, bits_) - 1.0;
    const double scale = (hi - lo) / levels;
    for (double& v : out.data) {
        double x = std::clamp(v, lo, hi);
        const double k = std::floor((x - lo) / scale + 0.5);
        v = lo + std::min(k, levels) * scale;
    }
}

std::pair<double, double> ActQuantizer::range(std::size_t layer) const { return ranges_[layer]; }

void calibrate_act_quantizer(ActQuantizer& aq, const Network& net, const NetworkWeights& weights,
                             const Tensor& batch) {
    run_forward(net, weights, batch, nullptr, &aq, false);
}

// ---------------------------------------------------------------------------
// Core operations

NetworkWeights init_weights(const Network& net, std::uint64_t seed) {
    NetworkWeights w;
    std::size_t wi = 0;
    for (const auto& s : net) {
        if (!s.has_weights()) continue;
        LayerWeights lw;
        int fan_in;
        if (s.kind == LayerKind::Linear) {
            fan_in = s.in_features;
            lw.weight = Tensor::zeros({s.out_features, s.in_features});
            lw.bias = Tensor::zeros({s.out_features});
        } else {
            fan_in = s.in_channels * s.kernel * s.kernel;
            lw.weight = Tensor::zeros({s.out_channels, s.in_channels, s.kernel, s.kernel});
            lw.bias = Tensor::zeros({s.out_channels});
        }
        const double limit = std::sqrt(6.0 / fan_in);
        StreamRng rng(split_seed(seed, wi));
        for (double& v : lw.weight.data) v = (2.0 * rng.next_uniform() - 1.0) * limit;
        w.layers.push_back(std::move(lw));
        ++wi;
    }
    refresh_max_abs(w);
    return w;
}

void refresh_max_abs(NetworkWeights& weights) {
    for (auto& lw : weights.layers) {
        double m = 0.0;
        for (double v : lw.weight.data) m = std::max(m, std::fabs(v));
        lw.max_abs = m;
    }
}

Gradients zero_gradients(const NetworkWeights& weights) {
    Gradients g;
    g.layers.reserve(weights.layers.size());
    for (const auto& lw : weights.layers) {
        g.layers.push_back({Tensor::zeros(lw.weight.shape), Tensor::zeros(lw.bias.shape)});
    }
    return g;
}

Tensor forward(const Network& net, const NetworkWeights& weights, const Tensor& batch,
               const ActQuantizer* aq) {
    return run_forward(net, weights, batch, aq, nullptr, false).output;
}

LossGrad loss_and_grad(const Network& net, const NetworkWeights& weights, const Tensor& batch,
                       const std::vector<int>& labels) {
    ForwardResult fwd = run_forward(net, weights, batch, nullptr, nullptr, true);
    SoftmaxLoss sm = softmax_cross_entropy(fwd.output, labels, true);
    if (!std::isfinite(sm.loss)) throw NumericError("non-finite loss at network output");

    LossGrad res;
    res.loss = sm.loss;
    res.grads = zero_gradients(weights);

    Tensor dout = std::move(sm.dlogits);
    int wi = static_cast<int>(weights.layers.size());
    for (int li = static_cast<int>(net.size()) - 1; li >= 0; --li) {
        const LayerSpec& s = net[static_cast<std::size_t>(li)];
        const LayerTrace& trace = fwd.traces[static_cast<std::size_t>(li)];
        Tensor din;
        switch (s.kind) {
            case LayerKind::Linear: {
                --wi;
                const LayerWeights& lw = weights.layers[static_cast<std::size_t>(wi)];
                GradientSlice& g = res.grads.layers[static_cast<std::size_t>(wi)];
                const int n = dout.dim(0);
                // dW += dOut^T * X ; db += column sums ; dX = dOut * W
                detail::gemm_tn_accum(dout.ptr(), trace.input.ptr(), g.weight.ptr(), s.out_features,
                                      n, s.in_features);
                for (int i = 0; i < n; ++i) {
                    const double* row = dout.ptr() + static_cast<long>(i) * s.out_features;
                    for (int o = 0; o < s.out_features; ++o) g.bias.data[static_cast<std::size_t>(o)] += row[o];
                }
                din = Tensor::zeros(trace.input.shape);
                detail::gemm_nn_accum(dout.ptr(), lw.weight.ptr(), din.ptr(), n, s.out_features,
                                      s.in_features);
                check_finite(g.weight, static_cast<std::size_t>(li), s, "weight gradient");
                break;
            }
            case LayerKind::Conv2d: {
                --wi;
                const LayerWeights& lw = weights.layers[static_cast<std::size_t>(wi)];
                GradientSlice& g = res.grads.layers[static_cast<std::size_t>(wi)];
                const ConvDims d = conv_dims(static_cast<std::size_t>(li), s, trace.input);
                const int out_area = d.out_h * d.out_w;
                const long out_stride = static_cast<long>(s.out_channels) * out_area;
                const long in_stride = static_cast<long>(s.in_channels) * d.in_h * d.in_w;
                din = Tensor::zeros(trace.input.shape);
                std::vector<double> dcol(static_cast<std::size_t>(d.col_rows) * out_area);
                for (int n = 0; n < d.batch; ++n) {
                    const double* col_n =
                        trace.cols.data() + static_cast<long>(n) * d.col_rows * out_area;
                    const double* dout_n = dout.ptr() + n * out_stride;
                    // dW(OC x CKK) += dOut_n(OC x A) * col_n(CKK x A)^T
                    detail::gemm_nt_accum(dout_n, col_n, g.weight.ptr(), s.out_channels, out_area,
                                          d.col_rows);
                    for (int oc = 0; oc < s.out_channels; ++oc) {
                        const double* plane = dout_n + static_cast<long>(oc) * out_area;
                        double acc = 0.0;
                        for (int p = 0; p < out_area; ++p) acc += plane[p];
                        g.bias.data[static_cast<std::size_t>(oc)] += acc;
                    }
                    // dcol(CKK x A) = W(OC x CKK)^T * dOut_n(OC x A)
                    std::fill(dcol.begin(), dcol.end(), 0.0);
                    detail::gemm_tn_accum(lw.weight.ptr(), dout_n, dcol.data(), d.col_rows,
                                          s.out_channels, out_area);
                    col2im_accum(dcol.data(), s, d, din.ptr() + n * in_stride);
                }
                check_finite(g.weight, static_cast<std::size_t>(li), s, "weight gradient");
                break;
            }
            case LayerKind::Relu: {
                din = std::move(dout);
                const double* in = trace.input.ptr();
                for (std::int64_t i = 0; i < din.size(); ++i) {
                    if (in[i] <= 0.0) din.data[static_cast<std::size_t>(i)] = 0.0;
                }
                break;
            }
            case LayerKind::MaxPool2d: {
                din = Tensor::zeros(trace.input.shape);
                for (std::size_t i = 0; i < trace.argmax.size(); ++i) {
                    din.data[static_cast<std::size_t>(trace.argmax[i])] += dout.data[i];
                }
                break;
            }
            case LayerKind::Flatten: {
                din = dout.reshaped(trace.input.shape);
                break;
            }
        }
        dout = std::move(din);
    }
    return res;
}

double mean_loss(const Network& net, const NetworkWeights& weights, const Tensor& batch,
                 const std::vector<int>& labels, const ActQuantizer* aq) {
    Tensor logits = forward(net, weights, batch, aq);
    return softmax_cross_entropy(logits, labels, false).loss;
}

NetworkWeights sgd_step(const NetworkWeights& weights, const Gradients& grads, double alpha) {
    NetworkWeights out = weights;
    sgd_step_inplace(out, grads, alpha);
    return out;
}

void sgd_step_inplace(NetworkWeights& weights, const Gradients& grads, double alpha) {
    if (weights.layers.size() != grads.layers.size()) {
        throw ConfigError("gradient structure does not match weights");
    }
    for (std::size_t i = 0; i < weights.layers.size(); ++i) {
        auto& lw = weights.layers[i];
        const auto& g = grads.layers[i];
        if (!lw.weight.same_shape(g.weight) || !lw.bias.same_shape(g.bias)) {
            throw ConfigError("gradient shape mismatch at weight entry " + std::to_string(i));
        }
        for (std::size_t j = 0; j < lw.weight.data.size(); ++j) lw.weight.data[j] -= alpha * g.weight.data[j];
        for (std::size_t j = 0; j < lw.bias.data.size(); ++j) lw.bias.data[j] -= alpha * g.bias.data[j];
    }
}

double evaluate_accuracy(const Network& net, const NetworkWeights& weights, const Dataset& data,
                         const ActQuantizer* aq, int batch_size) {
    const std::int64_t n = data.count();
    if (n == 0) throw ConfigError("evaluate_accuracy: empty dataset");
    std::int64_t correct = 0;
    for (std::int64_t begin = 0; begin < n; begin += batch_size) {
        const std::int64_t end = std::min<std::int64_t>(begin + batch_size, n);
        Dataset chunk = data.slice(begin, end);
        Tensor logits = forward(net, weights, chunk.inputs, aq);
        const int classes = logits.dim(1);
        for (std::int64_t i = 0; i < end - begin; ++i) {
            const double* row = logits.ptr() + i * classes;
            int best = 0;
            for (int c = 1; c < classes; ++c) {
                if (row[c] > row[best]) best = c;  // ties keep the lowest index
            }
            if (best == chunk.labels[static_cast<std::size_t>(i)]) ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Topology presets

Network make_mlp(int input_dim, int hidden, int classes) {
    return {LayerSpec::flatten(), LayerSpec::linear(input_dim, hidden), LayerSpec::relu(),
            LayerSpec::linear(hidden, classes)};
}

Network make_lenet(int classes) {
    return {LayerSpec::conv2d(1, 6, 5),  LayerSpec::relu(), LayerSpec::maxpool2d(2),
            LayerSpec::conv2d(6, 16, 5), LayerSpec::relu(), LayerSpec::maxpool2d(2),
            LayerSpec::flatten(),        LayerSpec::linear(256, 120), LayerSpec::relu(),
            LayerSpec::linear(120, 84),  LayerSpec::relu(), LayerSpec::linear(84, classes)};
}

}  // namespace trice
