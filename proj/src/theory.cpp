#include "trice/theory.hpp"

#include <cmath>
#include <string>

#include "trice/errors.hpp"
#include "trice/normal.hpp"

namespace trice {

double taylor_loss(const DerivativeTriple& d, double dw) {
    return d.f0 + d.f1 * dw + 0.5 * d.f2 * dw * dw;
}

LossQuantileRoots roots_for_lossq(const DerivativeTriple& d, double loss_q) {
    if (!(d.f2 > 0.0)) throw ConfigError("roots_for_lossq requires f2 > 0");
    const double disc = d.f1 * d.f1 - 2.0 * d.f2 * (d.f0 - loss_q);
    if (disc < 0.0) {
        throw ConfigError("loss_q below the quadratic minimum (no real roots)");
    }
    LossQuantileRoots r;
    r.beta = std::sqrt(disc);
    r.w1 = (-d.f1 - r.beta) / d.f2;
    r.w2 = (-d.f1 + r.beta) / d.f2;
    return r;
}

double q_from_lossq(const DerivativeTriple& d, double loss_q, double sigma_d) {
    const LossQuantileRoots r = roots_for_lossq(d, loss_q);
    if (!(sigma_d > 0.0)) throw ConfigError("q_from_lossq requires sigma_d > 0");
    return 1.0 - (normal_cdf(r.w2 / sigma_d) - normal_cdf(r.w1 / sigma_d));
}

double loss_q_analytic(const DerivativeTriple& d, double sigma_d, double q) {
    if (!(d.f2 > 0.0)) throw ConfigError("loss_q_analytic requires f2 > 0");
    const double pi = 3.14159265358979323846;
    return -d.f1 * d.f1 / (2.0 * d.f2) + d.f0 + d.f2 * pi * q * q * sigma_d * sigma_d / 4.0;
}

double loss_q_exact(const DerivativeTriple& d, double sigma_d, double q) {
    if (!(d.f2 > 0.0)) throw ConfigError("loss_q_exact requires f2 > 0");
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("loss_q_exact requires q in (0, 1)");
    const double quad_min = d.f0 - d.f1 * d.f1 / (2.0 * d.f2);
    // q_from_lossq decreases monotonically from 1 at the quadratic minimum
    // towards 0; bracket the target and bisect.
    double lo = quad_min;
    double span = std::max(1.0, std::fabs(quad_min));
    double hi = quad_min + span;
    while (q_from_lossq(d, hi, sigma_d) > q) {
        span *= 2.0;
        hi = quad_min + span;
        if (!std::isfinite(hi)) throw NumericError("loss_q_exact failed to bracket");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval exhausted at double precision
        if (q_from_lossq(d, mid, sigma_d) > q) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double expected_update(const DerivativeTriple& d, const NoiseSpec& noise, double alpha) {
    noise.validate();
    const double m1 = analytic_mean(noise);
    const double m2 = analytic_second_moment(noise);
    return -alpha * (d.f1 + m1 * d.f2 + 0.5 * m2 * d.f3);
}

namespace {

double loss_at_offset(const Network& net, NetworkWeights& scratch, const WeightCoordinate& coord,
                      double base, double offset, const Dataset& data) {
    scratch.layers[coord.layer].weight.data[coord.offset] = base + offset;
    return mean_loss(net, scratch, data.inputs, data.labels);
}

}  // namespace

DerivativeTriple finite_diff_derivatives(const Network& net, const NetworkWeights& weights,
                                         const WeightCoordinate& coord, double h,
                                         const Dataset& data) {
    if (!(h > 0.0)) throw ConfigError("finite_diff_derivatives requires h > 0");
    if (coord.layer >= weights.layers.size() ||
        coord.offset >= weights.layers[coord.layer].weight.data.size()) {
        throw ConfigError("weight coordinate out of range");
    }
    NetworkWeights scratch = weights;
    const double base = weights.layers[coord.layer].weight.data[coord.offset];
    const double fp2 = loss_at_offset(net, scratch, coord, base, 2.0 * h, data);
    const double fp1 = loss_at_offset(net, scratch, coord, base, h, data);
    const double f0 = loss_at_offset(net, scratch, coord, base, 0.0, data);
    const double fm1 = loss_at_offset(net, scratch, coord, base, -h, data);
    const double fm2 = loss_at_offset(net, scratch, coord, base, -2.0 * h, data);
    DerivativeTriple d;
    d.f0 = f0;
    d.f1 = (fp1 - fm1) / (2.0 * h);
    d.f2 = (fp1 - 2.0 * f0 + fm1) / (h * h);
    d.f3 = (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h);
    return d;
}

}  // namespace trice
