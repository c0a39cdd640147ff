#pragma once

#include "qng/fock.hpp"
#include "qng/noisy_photon.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

// Lower convex envelope of M(p) and the convex-roof quantum non-Gaussianity
// (QNG) of the diagonal noisy single-photon states rho_p.
//
// M(p) is convex on [0, c] and on [c, 1] separately (c is the r_opt crossover)
// but not globally, so its lower convex envelope replaces M on an interval
// [p1, p2] by the common tangent line:
//
//   Q(p) = M(p)                                   for p <= p1 or p >= p2,
//   Q(p) = ((p2-p) M(p1) + (p-p1) M(p2))/(p2-p1)  for p1 < p < p2,
//
// where (p1, p2) solve M'(p1) = M'(p2) = (M(p2)-M(p1))/(p2-p1).

namespace qng {

struct EnvelopeSolution {
    double p1 = 0.0;
    double p2 = 0.0;
    double slope = 0.0;  // common tangent slope, nats per unit p
    double m_p1 = 0.0;   // M(p1)
    double m_p2 = 0.0;   // M(p2)
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

using ScalarFunction = std::function<double(double)>;

// Solves the common-tangent system for a function m that is convex on each of
// the two disjoint intervals: nested bisection in the slope s, with tangency
// points located by bisection of mprime(p) = s inside each interval. Returns
// nullopt when no genuine two-point tangent exists (e.g. m globally convex).
// Throws std::invalid_argument if sampled second differences show m is not
// convex on one of the intervals.
std::optional<EnvelopeSolution> common_tangent(const ScalarFunction& m,
                                               const ScalarFunction& mprime,
                                               Interval left, Interval right);

// Piecewise-linear interpolant through an increasing sequence of knots;
// constant extrapolation outside the knot range.
class PiecewiseLinear {
public:
    explicit PiecewiseLinear(std::vector<std::pair<double, double>> knots);
    double operator()(double x) const;
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

private:
    std::vector<std::pair<double, double>> knots_;
};

// Lower convex hull of the sample points (monotone-chain construction),
// evaluable by linear interpolation. Assumption-free cross-check for
// common_tangent.
PiecewiseLinear envelope_bruteforce(std::vector<std::pair<double, double>> samples);

// Crossover location plus tangent solution for the family's M(p), searched
// on [lo, hi]. `crossover_p` is empty when r_opt does not change sign inside
// the interval; `solution` is empty whenever no common tangent exists there.
struct FamilyEnvelopeResult {
    std::optional<double> crossover_p;
    std::optional<EnvelopeSolution> solution;
};

FamilyEnvelopeResult solve_family_envelope(double lo = 1e-4, double hi = 0.15);

// The piecewise QNG of the diagonal family state rho_p, given the envelope.
double qng_noisy_photon(double p, const EnvelopeSolution& env);

// A convex decomposition of rho_p achieving the convex roof.
struct Decomposition {
    std::vector<std::pair<double, NoisyPhotonParams>> components;  // (weight, state)
};

// Optimal decomposition of rho_p: the state itself for p >= p2; the equal
// mixture of the two coherence signs at r_opt(p) for p <= p1 (the minus sign
// realized as theta = pi); and for p1 < p < p2 the three-component mixture
// of the p1 pair with the diagonal state at p2.
Decomposition optimal_decomposition(double p, const EnvelopeSolution& env);

// QNG of a pure state equals its non-Gaussianity. Throws
// std::invalid_argument if the input is mixed (largest eigenvalue < 1 - 1e-10).
double qng_pure(const DensityOperator& psi);

}  // namespace qng
