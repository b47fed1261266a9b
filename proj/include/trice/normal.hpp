#pragma once

namespace trice {

/// Standard normal density phi(x).
double normal_pdf(double x);

/// Standard normal CDF Phi(x), erf-based (absolute error below 1e-12).
double normal_cdf(double x);

/// Inverse standard normal CDF on (0, 1). Wichura's AS 241 (PPND16),
/// accurate to about 1e-15 relative.
double normal_quantile(double p);

}  // namespace trice
