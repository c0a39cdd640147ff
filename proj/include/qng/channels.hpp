#pragma once

#include "qng/convex_roof.hpp"
#include "qng/fock.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

// Gaussian unitaries and the pure-loss channel on truncated Fock states,
// plus the executable checks for the monotone properties of the measures:
//   N0  non-negativity of NG
//   N1  faithfulness spot checks (positive on Fock mixtures, zero on Gaussians)
//   N2  convexity of QNG under mixing of diagonal family states
//   N3  invariance of NG (and family QNG) under Gaussian unitaries
//   N4  monotonicity under the pure-loss channel

namespace qng {

struct PhaseRotation {
    double angle = 0.0;  // radians
};

struct Displacement {
    Complex amplitude{0.0, 0.0};
};

struct Squeeze {
    Complex parameter{0.0, 0.0};
};

struct PureLoss {
    double transmissivity = 1.0;  // eta in [0, 1]
};

using ChannelSpec = std::variant<PhaseRotation, Displacement, Squeeze, PureLoss>;

// Applies the channel to `rho`:
//  - phase rotation multiplies rho_{mn} by e^{i(m-n)theta} (so the coherence
//    phase of a family state shifts theta -> theta - angle);
//  - displacement and squeeze exponentiate the truncated generators
//    alpha a^dag - alpha* a and (xi* a^2 - xi a^dag^2)/2;
//  - pure loss applies the Kraus set
//    K_k = sum_n sqrt(C(n,k) eta^{n-k} (1-eta)^k) |n-k><n|.
// Displacement and squeeze require the input to be supported below dim - 10
// (population beyond that must be < 1e-9), since they push weight upward;
// violations throw truncation_error.
DensityOperator apply(const ChannelSpec& channel, const DensityOperator& rho);

// Outcome of one property check.
struct PropertyReport {
    std::string name;
    int trials = 0;
    int violations = 0;
    double worst_residual = 0.0;  // largest quantity that the tolerance bounds
    double tolerance = 0.0;
    std::vector<std::string> failures;  // descriptions of violating cases (capped)

    bool passed() const { return violations == 0; }
};

// N0: g(n_th) - S(rho) >= -1e-9 before clamping, over random family states
// and a few standard Gaussian states.
PropertyReport check_n0_nonnegativity(int trials, std::uint64_t seed);

// N1: NG > 0.01 for the diagonal family at p in {0.1, 0.5, 1.0}; NG < 1e-6
// for vacuum, coherent, and thermal states.
PropertyReport check_n1_faithfulness();

// N2: Q(lambda p_a + (1-lambda) p_b) <= lambda Q(p_a) + (1-lambda) Q(p_b)
// + 1e-10 for random triples; mixing two diagonal family states yields the
// diagonal family state with the mixed fraction.
PropertyReport check_n2_convexity(int samples, std::uint64_t seed, const EnvelopeSolution& env);

// N3 for one state/channel pair: |NG(rho) - NG(U rho U^dag)| <= 1e-7.
PropertyReport check_n3_invariance(const DensityOperator& rho, const ChannelSpec& channel);

// N3 over random family states and random phase/displacement/squeeze
// unitaries; also checks that a phase rotation leaves the diagonal family
// state (hence its QNG) exactly unchanged.
PropertyReport check_n3_suite(int trials, std::uint64_t seed);

// N4: Q[rho_{eta p}] <= Q[rho_p] + 1e-10 for every (p, eta) pair, with the
// chain over ascending eta monotone; plus NG(pure_loss(rho)) <= NG(rho) + 1e-7
// on `ng_trials` random family states.
PropertyReport check_n4_monotonicity(const std::vector<double>& p_values,
                                     const std::vector<double>& eta_values,
                                     const EnvelopeSolution& env, int ng_trials,
                                     std::uint64_t seed);

// Default counts for the full N0-N4 run.
struct PropertySuiteConfig {
    std::uint64_t seed = 20240915;
    int n0_trials = 200;
    int n2_samples = 10000;
    int n3_trials = 60;
    int n4_ng_trials = 100;
    std::vector<double> n4_p_values = {0.02, 0.05, 0.0559, 0.065, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0};
    std::vector<double> n4_eta_values = {0.0, 0.25, 0.5, 0.75, 1.0};
};

std::vector<PropertyReport> run_property_suite(const PropertySuiteConfig& config,
                                               const EnvelopeSolution& env);

}  // namespace qng
