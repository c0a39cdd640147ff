#include "qng/channels.hpp"

#include "qng/gaussian.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace qng {

namespace {

constexpr double kUnitaryMarginPop = 1e-9;  // allowed population at/above dim-10
constexpr double kLossTraceDeficit = 1e-8;
constexpr int kSuiteDim = 48;  // room for displacement/squeeze leakage in the N3 suite

// Canonical uniform double in [0, 1): top 53 bits of the generator output.
double uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void require_upper_margin(const DensityOperator& rho, const char* what) {
    const int dim = rho.dim();
    const int first_guarded = std::max(0, dim - 10);
    double pop = 0.0;
    for (int n = first_guarded; n < dim; ++n) pop += rho.population(n);
    if (pop > kUnitaryMarginPop) {
        throw truncation_error(std::string(what) +
                               " needs input support below the top 10 Fock levels "
                               "(found population " +
                               std::to_string(pop) + " there)");
    }
}

DensityOperator apply_unitary(const Matrix& u, const DensityOperator& rho) {
    return DensityOperator(u * rho.matrix() * u.adjoint());
}

DensityOperator apply_phase(double angle, const DensityOperator& rho) {
    const int dim = rho.dim();
    Matrix out = rho.matrix();
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            out(m, n) *= std::exp(Complex(0.0, (m - n) * angle));
        }
    }
    return DensityOperator(std::move(out));
}

DensityOperator apply_loss(double eta, const DensityOperator& rho) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("transmissivity must lie in [0, 1]");
    }
    const int dim = rho.dim();
    // K_k = sum_{n>=k} sqrt(C(n,k) eta^{n-k} (1-eta)^k) |n-k><n|. Coefficients
    // accumulate in log space via C(n,k) = C(n-1,k) n/(n-k).
    Matrix out = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        Matrix kraus = Matrix::Zero(dim, dim);
        double log_coeff = k == 0 ? 0.0 : k * std::log1p(-eta);  // ln[(1-eta)^k]
        for (int n = k; n < dim; ++n) {
            if (n > k) {
                if (eta == 0.0) break;  // higher columns carry eta^{n-k} = 0
                log_coeff += std::log(static_cast<double>(n)) -
                             std::log(static_cast<double>(n - k)) + std::log(eta);
            }
            kraus(n - k, n) = std::sqrt(std::exp(log_coeff));
        }
        out += kraus * rho.matrix() * kraus.adjoint();
    }
    const double trace = out.trace().real();
    if (std::abs(trace - 1.0) > kLossTraceDeficit) {
        throw truncation_error("pure-loss output trace deviates by " +
                               std::to_string(std::abs(trace - 1.0)));
    }
    out /= trace;
    return DensityOperator(std::move(out));
}

NoisyPhotonParams random_family_state(std::mt19937_64& rng) {
    const double p = 0.02 + 0.96 * uniform(rng);
    const double r = 0.95 * uniform(rng) * std::sqrt(p * (1.0 - p));
    const double theta = 2.0 * std::numbers::pi * uniform(rng);
    return NoisyPhotonParams{p, r, theta};
}

void record_failure(PropertyReport& report, const std::string& message) {
    ++report.violations;
    if (report.failures.size() < 10) report.failures.push_back(message);
}

}  // namespace

DensityOperator apply(const ChannelSpec& channel, const DensityOperator& rho) {
    if (const auto* phase = std::get_if<PhaseRotation>(&channel)) {
        return apply_phase(phase->angle, rho);
    }
    if (const auto* disp = std::get_if<Displacement>(&channel)) {
        require_upper_margin(rho, "displacement");
        const Matrix a = annihilation_operator(rho.dim());
        const Matrix gen = disp->amplitude * a.adjoint() - std::conj(disp->amplitude) * a;
        return apply_unitary(gen.exp(), rho);
    }
    if (const auto* sq = std::get_if<Squeeze>(&channel)) {
        require_upper_margin(rho, "squeezing");
        const Matrix a = annihilation_operator(rho.dim());
        const Matrix a2 = a * a;
        const Matrix gen = 0.5 * (std::conj(sq->parameter) * a2 - sq->parameter * a2.adjoint());
        return apply_unitary(gen.exp(), rho);
    }
    return apply_loss(std::get<PureLoss>(channel).transmissivity, rho);
}

PropertyReport check_n0_nonnegativity(int trials, std::uint64_t seed) {
    PropertyReport report{.name = "n0-nonnegativity", .tolerance = 1e-9};
    std::mt19937_64 rng(seed);
    constexpr int dim = 30;

    auto check_state = [&](const DensityOperator& rho, const std::string& label) {
        const double raw = gaussian_reference(rho).entropy - von_neumann_entropy(rho);
        ++report.trials;
        report.worst_residual = std::max(report.worst_residual, -raw);
        if (raw < -report.tolerance) {
            record_failure(report, label + ": NG = " + std::to_string(raw));
        }
    };

    check_state(states::vacuum(dim), "vacuum");
    check_state(states::coherent(Complex(0.8, -0.3), dim), "coherent(0.8-0.3i)");
    check_state(states::thermal(0.7, dim), "thermal(0.7)");
    for (int i = 0; i < trials; ++i) {
        const NoisyPhotonParams params = random_family_state(rng);
        check_state(density(params, dim),
                    "family(p=" + std::to_string(params.p) + ", r=" + std::to_string(params.r) +
                        ", theta=" + std::to_string(params.theta) + ")");
    }
    return report;
}

PropertyReport check_n1_faithfulness() {
    PropertyReport report{.name = "n1-faithfulness", .tolerance = 1e-6};
    constexpr int dim = 30;

    for (const double p : {0.1, 0.5, 1.0}) {
        ++report.trials;
        const double ng = non_gaussianity(density(NoisyPhotonParams{p, 0.0, 0.0}, dim));
        if (ng <= 0.01) {
            record_failure(report, "family(p=" + std::to_string(p) +
                                       ") should be visibly non-Gaussian, NG = " +
                                       std::to_string(ng));
        }
    }
    const std::pair<const char*, DensityOperator> gaussians[] = {
        {"vacuum", states::vacuum(dim)},
        {"coherent(0.7)", states::coherent(Complex(0.7, 0.0), dim)},
        {"thermal(0.6)", states::thermal(0.6, dim)},
    };
    for (const auto& [label, rho] : gaussians) {
        ++report.trials;
        const double ng = non_gaussianity(rho);
        report.worst_residual = std::max(report.worst_residual, ng);
        if (ng >= report.tolerance) {
            record_failure(report,
                           std::string(label) + " should be Gaussian, NG = " + std::to_string(ng));
        }
    }
    return report;
}

PropertyReport check_n2_convexity(int samples, std::uint64_t seed, const EnvelopeSolution& env) {
    PropertyReport report{.name = "n2-convexity", .tolerance = 1e-10};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < samples; ++i) {
        const double pa = uniform(rng);
        const double pb = uniform(rng);
        const double lambda = uniform(rng);
        const double mixed = lambda * pa + (1.0 - lambda) * pb;
        const double lhs = qng_noisy_photon(mixed, env);
        const double rhs =
            lambda * qng_noisy_photon(pa, env) + (1.0 - lambda) * qng_noisy_photon(pb, env);
        ++report.trials;
        report.worst_residual = std::max(report.worst_residual, lhs - rhs);
        if (lhs - rhs > report.tolerance) {
            record_failure(report, "p_a=" + std::to_string(pa) + " p_b=" + std::to_string(pb) +
                                       " lambda=" + std::to_string(lambda) +
                                       " violates convexity by " + std::to_string(lhs - rhs));
        }
    }
    return report;
}

PropertyReport check_n3_invariance(const DensityOperator& rho, const ChannelSpec& channel) {
    PropertyReport report{.name = "n3-invariance", .trials = 1, .tolerance = 1e-7};
    const double before = non_gaussianity(rho);
    const double after = non_gaussianity(qng::apply(channel, rho));
    report.worst_residual = std::abs(after - before);
    if (report.worst_residual > report.tolerance) {
        record_failure(report, "NG changed from " + std::to_string(before) + " to " +
                                   std::to_string(after));
    }
    return report;
}

PropertyReport check_n3_suite(int trials, std::uint64_t seed) {
    PropertyReport report{.name = "n3-invariance", .tolerance = 1e-7};
    std::mt19937_64 rng(seed);

    for (int i = 0; i < trials; ++i) {
        const NoisyPhotonParams params = random_family_state(rng);
        const DensityOperator rho = density(params, kSuiteDim);

        ChannelSpec channel;
        std::string label;
        switch (i % 3) {
            case 0: {
                const double angle = 2.0 * std::numbers::pi * uniform(rng);
                channel = PhaseRotation{angle};
                label = "phase(" + std::to_string(angle) + ")";
                break;
            }
            case 1: {
                const double mag = 0.3 * uniform(rng);
                const double arg = 2.0 * std::numbers::pi * uniform(rng);
                channel = Displacement{std::polar(mag, arg)};
                label = "displacement(" + std::to_string(mag) + ")";
                break;
            }
            default: {
                const double mag = 0.2 * uniform(rng);
                const double arg = 2.0 * std::numbers::pi * uniform(rng);
                channel = Squeeze{std::polar(mag, arg)};
                label = "squeeze(" + std::to_string(mag) + ")";
                break;
            }
        }

        const double before = non_gaussianity(rho);
        const double after = non_gaussianity(qng::apply(channel, rho));
        ++report.trials;
        report.worst_residual = std::max(report.worst_residual, std::abs(after - before));
        if (std::abs(after - before) > report.tolerance) {
            record_failure(report, label + " on family(p=" + std::to_string(params.p) +
                                       ", r=" + std::to_string(params.r) + ") moved NG by " +
                                       std::to_string(after - before));
        }

        // QNG level, same trial: a phase rotation leaves the diagonal family
        // state itself unchanged, so its convex-roof value cannot move either.
        const DensityOperator diag = density(NoisyPhotonParams{params.p, 0.0, 0.0}, kSuiteDim);
        const DensityOperator rotated =
            apply(PhaseRotation{2.0 * std::numbers::pi * uniform(rng)}, diag);
        const double drift = (rotated.matrix() - diag.matrix()).cwiseAbs().maxCoeff();
        if (drift > 1e-12) {
            record_failure(report, "phase rotation moved the diagonal state at p=" +
                                       std::to_string(params.p) + " by " + std::to_string(drift));
        }
    }
    return report;
}

PropertyReport check_n4_monotonicity(const std::vector<double>& p_values,
                                     const std::vector<double>& eta_values,
                                     const EnvelopeSolution& env, int ng_trials,
                                     std::uint64_t seed) {
    PropertyReport report{.name = "n4-loss-monotonicity", .tolerance = 1e-10};

    std::vector<double> etas = eta_values;
    std::sort(etas.begin(), etas.end());
    for (const double p : p_values) {
        const double q_full = qng_noisy_photon(p, env);
        double q_prev = -1.0;  // Q at the previous (smaller) eta
        for (const double eta : etas) {
            const double q = qng_noisy_photon(eta * p, env);
            ++report.trials;
            report.worst_residual = std::max(report.worst_residual, q - q_full);
            if (q - q_full > report.tolerance) {
                record_failure(report, "Q(eta p) > Q(p) by " + std::to_string(q - q_full) +
                                           " at p=" + std::to_string(p) +
                                           ", eta=" + std::to_string(eta));
            }
            if (q_prev >= 0.0 && q_prev - q > report.tolerance) {
                record_failure(report, "chain not monotone between consecutive etas at p=" +
                                           std::to_string(p) + ", eta=" + std::to_string(eta));
            }
            q_prev = q;
        }
    }

    // NG-level monotonicity under pure loss for general (coherent) family states.
    std::mt19937_64 rng(seed);
    constexpr int dim = 16;
    constexpr double ng_tol = 1e-7;
    for (int i = 0; i < ng_trials; ++i) {
        const NoisyPhotonParams params = random_family_state(rng);
        const double eta = uniform(rng);
        const DensityOperator rho = density(params, dim);
        const double before = non_gaussianity(rho);
        const double after = non_gaussianity(apply(PureLoss{eta}, rho));
        ++report.trials;
        report.worst_residual = std::max(report.worst_residual, after - before);
        if (after - before > ng_tol) {
            record_failure(report, "NG increased under loss eta=" + std::to_string(eta) +
                                       " at p=" + std::to_string(params.p) + ", r=" +
                                       std::to_string(params.r) + " by " +
                                       std::to_string(after - before));
        }
    }
    return report;
}

std::vector<PropertyReport> run_property_suite(const PropertySuiteConfig& config,
                                               const EnvelopeSolution& env) {
    std::vector<PropertyReport> reports;
    reports.push_back(check_n0_nonnegativity(config.n0_trials, config.seed));
    reports.push_back(check_n1_faithfulness());
    reports.push_back(check_n2_convexity(config.n2_samples, config.seed + 1, env));
    reports.push_back(check_n3_suite(config.n3_trials, config.seed + 2));
    reports.push_back(check_n4_monotonicity(config.n4_p_values, config.n4_eta_values, env,
                                            config.n4_ng_trials, config.seed + 3));
    return reports;
}

}  // namespace qng
