#include "trice/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "trice/errors.hpp"
#include "trice/rng.hpp"

namespace trice {

Dataset generate_synthetic(int classes, int samples_per_class, std::uint64_t seed,
                           double separation) {
    constexpr int kDims = 16;
    if (classes < 1 || classes > kDims) {
        throw ConfigError("synthetic data supports 1-16 classes");
    }
    if (samples_per_class < 1) throw ConfigError("samples_per_class must be >= 1");
    if (!(separation > 0.0)) throw ConfigError("separation must be positive");

    // Raw space: class c is N(separation * e_c, I). Mapped affinely onto
    // [0, 1] so tails up to 5 sigma survive the byte grid unclipped.
    const double lo = -5.0;
    const double hi = separation + 5.0;
    const int n = classes * samples_per_class;
    Dataset d;
    d.num_classes = classes;
    d.inputs = Tensor::zeros({n, 1, 4, 4});
    d.labels.resize(static_cast<std::size_t>(n));
    for (int c = 0; c < classes; ++c) {
        StreamRng rng(split_seed(seed, static_cast<std::uint64_t>(c)));
        for (int s = 0; s < samples_per_class; ++s) {
            const int row = c * samples_per_class + s;
            double* x = d.inputs.ptr() + static_cast<long>(row) * kDims;
            for (int j = 0; j < kDims; ++j) {
                double v = rng.next_normal() + (j == c ? separation : 0.0);
                v = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
                x[j] = std::floor(v * 255.0 + 0.5) / 255.0;  // byte grid
            }
            d.labels[static_cast<std::size_t>(row)] = c;
        }
    }
    return d;
}

}  // namespace trice
