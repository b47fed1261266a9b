#pragma once

#include <cstddef>

#include "trice/network.hpp"
#include "trice/noise.hpp"

namespace trice {

/// Loss value and derivatives of the loss along one weight coordinate,
/// evaluated at the unperturbed weight.
struct DerivativeTriple {
    double f0 = 0.0;  // loss
    double f1 = 0.0;  // first derivative
    double f2 = 0.0;  // second derivative
    double f3 = 0.0;  // third derivative (used by expected_update only)
};

/// Second-order Taylor model of the loss under a single-coordinate
/// perturbation: f0 + f1 dw + f2/2 dw^2.
double taylor_loss(const DerivativeTriple& d, double dw);

struct LossQuantileRoots {
    double w1 = 0.0;  // lower root
    double w2 = 0.0;  // upper root
    double beta = 0.0;
};

/// The two perturbations at which the quadratic loss model crosses loss_q.
/// Requires f2 > 0 and loss_q at or above the quadratic minimum.
LossQuantileRoots roots_for_lossq(const DerivativeTriple& d, double loss_q);

/// Probability that the quadratic loss under dw ~ N(0, sigma_d) reaches
/// loss_q or more: q = 1 - (Phi(w2/sigma) - Phi(w1/sigma)).
double q_from_lossq(const DerivativeTriple& d, double loss_q, double sigma_d);

/// Closed-form upper-tail loss quantile:
/// -f1^2/(2 f2) + f0 + f2 pi q^2 sigma_d^2 / 4.
/// This approximation is kept verbatim; see loss_q_exact for the reference
/// inversion, which can differ substantially (and even in its trend in f1).
double loss_q_analytic(const DerivativeTriple& d, double sigma_d, double q);

/// Exact inversion of q_from_lossq by bisection: the loss value whose
/// exceedance probability equals q.
double loss_q_exact(const DerivativeTriple& d, double sigma_d, double q);

/// Expected single-step weight displacement under noise-injected gradient
/// descent: -alpha (f1 + E[dw] f2 + E[dw^2]/2 f3), using the analytic noise
/// moments.
double expected_update(const DerivativeTriple& d, const NoiseSpec& noise, double alpha);

/// Address of one scalar weight coordinate inside NetworkWeights.
struct WeightCoordinate {
    std::size_t layer = 0;    // index into NetworkWeights::layers
    std::size_t offset = 0;   // flat index into that weight tensor
};

/// Central finite differences of the dataset loss along one weight
/// coordinate; f3 uses the 5-point stencil.
DerivativeTriple finite_diff_derivatives(const Network& net, const NetworkWeights& weights,
                                         const WeightCoordinate& coord, double h,
                                         const Dataset& data);

}  // namespace trice
