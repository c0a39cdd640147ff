#pragma once

#include "qng/fock.hpp"

#include <optional>
#include <utility>

// The noisy single-photon family
//   rho(p, r, theta) = p|1><1| + (1-p)|0><0| + r e^{i theta}|0><1| + r e^{-i theta}|1><0|
// and its closed-form non-Gaussianity N(p, r), together with the minimization
//   M(p) = min_r N(p, r) over r in [0, sqrt(p(1-p))].
//
// Closed forms used throughout (all theta-independent):
//   eigenvalues           lambda_{-+} = 1/2 -+ t,      t = sqrt((1/2 - p)^2 + r^2)
//   thermal occupation    n_th = sqrt((1/2 + p)(1/2 + p - 2 r^2)) - 1/2
//   non-Gaussianity       N = g(n_th) + lambda_+ ln lambda_+ + lambda_- ln lambda_-
// with g the thermal entropy from gaussian.hpp. Near the boundary
// r^2 = p(1-p), where lambda_- -> 0, the code evaluates the algebraically
// equivalent cancellation-free forms
//   lambda_- = (p(1-p) - r^2) / (1/2 + t)
//   n_th     = (p(1+p) - r^2(1+2p)) / (1/2 + sqrt((1/2+p)(1/2+p-2r^2))).

namespace qng {

struct NoisyPhotonParams {
    double p = 0.0;      // single-photon fraction, in [0, 1]
    double r = 0.0;      // coherence magnitude, 0 <= r^2 <= p(1-p)
    double theta = 0.0;  // coherence phase, radians

    // Throws std::invalid_argument if (p, r) leaves the physical region.
    void validate() const;

    // Largest admissible coherence sqrt(p(1-p)) at this p.
    double r_max() const;
};

struct MinimizationResult {
    double p = 0.0;
    double m_value = 0.0;  // M(p) in nats
    double r_opt = 0.0;    // argmin of N(p, .)
};

// The family state embedded at Fock indices 0 and 1 of a dim-dimensional space.
DensityOperator density(const NoisyPhotonParams& params, int dim);

// (lambda_minus, lambda_plus) of the 2x2 block.
std::pair<double, double> eigenvalues(const NoisyPhotonParams& params);

// Thermal occupation of the Gaussian reference, n_th(p, r).
double thermal_occupation(const NoisyPhotonParams& params);

// Closed-form non-Gaussianity N(p, r) in nats (independent of theta).
double ng_closed_form(const NoisyPhotonParams& params);

// Analytic derivative dN/dr for r strictly inside (0, sqrt(p(1-p))):
//   dN/dr = 4r [ atanh(2 lambda_+ - 1)/(2 lambda_+ - 1)
//                - (1+2p)/(2 n_th + 1) atanh(1/(2 n_th + 1)) ].
// Diverges to +infinity as r -> sqrt(p(1-p)) (lambda_- -> 0).
double ng_derivative_r(const NoisyPhotonParams& params);

// Analytic partial derivative dN/dp at fixed r. On the r-minimizer this equals
// M'(p) (envelope theorem); at r = 0 it reduces to ln((1+p)/(1-p)).
double ng_partial_p(const NoisyPhotonParams& params);

// Global minimum of N(p, .) over the admissible r range: candidates are both
// endpoints and every interior root of dN/dr, bracketed on a grid of 200
// uniform points plus a logarithmically spaced refinement near r_max (where
// the derivative blows up), each refined by bisection.
MinimizationResult minimize_over_r(double p);

// M(p) and its derivative via the envelope theorem.
double m_value(double p);
double m_prime(double p);

// The p at which r_opt(p) transitions from positive to zero, found by
// bisection on the indicator r_opt > 1e-8 within (lo, hi); nullopt when the
// transition does not lie inside the interval.
std::optional<double> crossover(double lo, double hi);

}  // namespace qng
