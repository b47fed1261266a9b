#include "trice/noise.hpp"

#include <algorithm>
#include <cmath>

#include "trice/errors.hpp"
#include "trice/normal.hpp"

namespace trice {

const char* noise_kind_name(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::Gaussian: return "gaussian";
        case NoiseKind::RightCensored: return "rc-gaussian";
        case NoiseKind::LeftCensored: return "lc-gaussian";
        case NoiseKind::RightTruncated: return "rt-gaussian";
        case NoiseKind::LeftTruncated: return "lt-gaussian";
    }
    return "?";
}

void NoiseSpec::validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw ConfigError("noise sigma must be finite and >= 0");
    }
    if (kind != NoiseKind::Gaussian && !std::isfinite(threshold)) {
        throw ConfigError("noise threshold must be finite");
    }
}

double sample(const NoiseSpec& spec, StreamRng& rng) {
    const double u = rng.next_uniform();
    if (spec.sigma == 0.0) return 0.0;
    switch (spec.kind) {
        case NoiseKind::Gaussian:
            return spec.sigma * normal_quantile(u);
        case NoiseKind::RightCensored:
            return spec.sigma * std::min(normal_quantile(u), spec.threshold);
        case NoiseKind::LeftCensored:
            return spec.sigma * std::max(normal_quantile(u), -spec.threshold);
        case NoiseKind::RightTruncated:
            // conditioned on z < threshold
            return spec.sigma * normal_quantile(u * normal_cdf(spec.threshold));
        case NoiseKind::LeftTruncated: {
            // conditioned on z > -threshold
            const double lo = normal_cdf(-spec.threshold);
            return spec.sigma * normal_quantile(lo + u * (1.0 - lo));
        }
    }
    return 0.0;
}

double analytic_mean(const NoiseSpec& spec) {
    if (spec.sigma == 0.0) return 0.0;
    const double a = spec.threshold;
    switch (spec.kind) {
        case NoiseKind::Gaussian:
            return 0.0;
        case NoiseKind::RightCensored:
            // E[min(Z, a)] = -phi(a) + a (1 - Phi(a)), scaled by sigma
            return spec.sigma * (-normal_pdf(a) + a * (1.0 - normal_cdf(a)));
        case NoiseKind::LeftCensored:
            return -spec.sigma * (-normal_pdf(a) + a * (1.0 - normal_cdf(a)));
        case NoiseKind::RightTruncated:
            return -spec.sigma * normal_pdf(a) / normal_cdf(a);
        case NoiseKind::LeftTruncated:
            return spec.sigma * normal_pdf(a) / normal_cdf(a);
    }
    return 0.0;
}

double analytic_second_moment(const NoiseSpec& spec) {
    if (spec.sigma == 0.0) return 0.0;
    const double s2 = spec.sigma * spec.sigma;
    const double a = spec.threshold;
    switch (spec.kind) {
        case NoiseKind::Gaussian:
            return s2;
        case NoiseKind::RightCensored:
        case NoiseKind::LeftCensored:
            // E[min(Z, a)^2] = Phi(a) - a phi(a) + a^2 (1 - Phi(a))
            return s2 * (normal_cdf(a) - a * normal_pdf(a) + a * a * (1.0 - normal_cdf(a)));
        case NoiseKind::RightTruncated:
        case NoiseKind::LeftTruncated:
            // E[Z^2 | Z < a] = 1 - a phi(a) / Phi(a)
            return s2 * (1.0 - a * normal_pdf(a) / normal_cdf(a));
    }
    return 0.0;
}

}  // namespace trice
