#pragma once

#include <cstdint>

#include "trice/network.hpp"

namespace trice {

/// Deterministic Gaussian-blob classification data in a 16-dimensional input
/// space, shaped (N, 1, 4, 4) so it round-trips through the IDX format. Class
/// means sit `separation` standard deviations apart along distinct axes, so
/// the classes are linearly separable for separation >= 6. Values are snapped
/// to the byte grid k/255.
Dataset generate_synthetic(int classes, int samples_per_class, std::uint64_t seed,
                           double separation = 10.0);

}  // namespace trice
