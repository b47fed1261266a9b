#pragma once

#include "trice/rng.hpp"

namespace trice {

/// Training-noise family. The censored kinds replace out-of-range draws with
/// the threshold value (leaving a point mass there); the truncated kinds
/// condition the Gaussian on staying inside the support.
enum class NoiseKind { Gaussian, RightCensored, LeftCensored, RightTruncated, LeftTruncated };

const char* noise_kind_name(NoiseKind kind);

struct NoiseSpec {
    NoiseKind kind = NoiseKind::Gaussian;
    double sigma = 0.0;      // base Gaussian scale (sigma_t)
    double threshold = 0.0;  // in units of sigma; ignored for plain Gaussian

    void validate() const;
};

/// One draw. Truncated kinds sample by inverse-CDF transform so every draw
/// consumes exactly one uniform.
double sample(const NoiseSpec& spec, StreamRng& rng);

/// Closed-form E[X].
double analytic_mean(const NoiseSpec& spec);

/// Closed-form E[X^2].
double analytic_second_moment(const NoiseSpec& spec);

}  // namespace trice
