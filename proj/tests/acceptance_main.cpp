// Acceptance checks for the non-Gaussianity library: one line per criterion,
// exit status = number of failed criteria.

#include "qng/channels.hpp"
#include "qng/convex_roof.hpp"
#include "qng/gaussian.hpp"
#include "qng/noisy_photon.hpp"
#include "qng/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string num(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

qng::DensityOperator random_density(std::mt19937_64& rng, int dim) {
    qng::Matrix a(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            a(i, j) = qng::Complex(2.0 * uniform(rng) - 1.0, 2.0 * uniform(rng) - 1.0);
        }
    }
    qng::Matrix m = a * a.adjoint();
    m /= m.trace().real();
    return qng::DensityOperator(std::move(m));
}

}  // namespace

int main() {
    using Clock = std::chrono::steady_clock;

    std::optional<qng::EnvelopeSolution> envelope;
    int failures = 0;
    int index = 0;

    auto criterion = [&](const char* name, double time_limit_s,
                         const std::function<Outcome()>& body) {
        ++index;
        const auto start = Clock::now();
        Outcome outcome;
        try {
            outcome = body();
        } catch (const std::exception& err) {
            outcome = {false, std::string("exception: ") + err.what()};
        }
        const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
        if (outcome.pass && time_limit_s > 0.0 && elapsed > time_limit_s) {
            outcome.pass = false;
            outcome.detail = "runtime " + num(elapsed) + " s exceeds the " +
                             num(time_limit_s) + " s budget";
        }
        std::printf("%s  %d. %s (%.2f s)%s%s\n", outcome.pass ? "PASS" : "FAIL", index, name,
                    elapsed, outcome.detail.empty() ? "" : ": ", outcome.detail.c_str());
        std::fflush(stdout);
        if (!outcome.pass) ++failures;
    };

    criterion("envelope tangent constants", 10.0, [&]() -> Outcome {
        const auto fam = qng::solve_family_envelope();
        if (!fam.solution) return {false, "no common tangent found"};
        envelope = fam.solution;
        const double p1 = envelope->p1;
        const double p2 = envelope->p2;
        const bool ok = std::abs(p1 - 0.0559) <= 5e-4 && std::abs(p2 - 0.0701) <= 5e-4;
        return {ok, "p1=" + num(p1) + ", p2=" + num(p2) + ", slope=" + num(envelope->slope)};
    });

    criterion("optimal-coherence transition point", 5.0, [&]() -> Outcome {
        const auto c = qng::crossover(0.01, 0.14);
        if (!c) return {false, "no sign change of the optimal coherence in [0.01, 0.14]"};
        if (std::abs(*c - 0.062) > 2e-3) {
            return {false, "transition at " + num(*c) + ", expected 0.062 +/- 0.002"};
        }
        const double r_below = qng::minimize_over_r(*c - 0.01).r_opt;
        const double r_above = qng::minimize_over_r(*c + 0.01).r_opt;
        if (r_below <= 1e-8) return {false, "optimal coherence not positive below the transition"};
        if (r_above > 1e-8) return {false, "optimal coherence not zero above the transition"};
        return {true, "c=" + num(*c) + ", r_opt(c-0.01)=" + num(r_below)};
    });

    criterion("closed form vs Fock-space reference", 60.0, [&]() -> Outcome {
        constexpr int dim = 30;
        const double thetas[] = {0.0, std::numbers::pi / 3.0, std::numbers::pi, 1.7};
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const double p = 0.05 + 0.9 * i / 9.0;
            for (int j = 0; j < 10; ++j) {
                const double fraction = 0.05 + 0.9 * j / 9.0;
                const double r = fraction * std::sqrt(p * (1.0 - p));
                for (const double theta : thetas) {
                    const qng::NoisyPhotonParams params{p, r, theta};
                    const auto rho = qng::density(params, dim);
                    const double numeric =
                        qng::relative_entropy(rho, qng::gaussify_fock(rho, dim));
                    worst = std::max(worst, std::abs(qng::ng_closed_form(params) - numeric));
                }
            }
        }
        return {worst <= 1e-5, "worst deviation " + num(worst) + " over 400 states"};
    });

    criterion("radial derivative vs finite differences", 0.0, [&]() -> Outcome {
        std::mt19937_64 rng(987654321);
        constexpr double h = 1e-6;
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double p = 0.02 + 0.96 * uniform(rng);
            const double fraction = 0.05 + 0.85 * uniform(rng);
            const double r = fraction * std::sqrt(p * (1.0 - p));
            const double analytic = qng::ng_derivative_r({p, r, 0.0});
            const double fd = (qng::ng_closed_form({p, r + h, 0.0}) -
                               qng::ng_closed_form({p, r - h, 0.0})) /
                              (2.0 * h);
            const double rel = std::abs(analytic - fd) / std::max(std::abs(analytic), 1e-3);
            worst = std::max(worst, rel);
        }
        return {worst <= 1e-6, "worst relative deviation " + num(worst) + " at 100 points"};
    });

    criterion("tangent envelope vs convex-hull oracle", 0.0, [&]() -> Outcome {
        if (!envelope) return {false, "envelope unavailable"};
        constexpr int count = 2000;
        std::vector<std::pair<double, double>> samples;
        samples.reserve(count);
        for (int i = 0; i < count; ++i) {
            const double p = static_cast<double>(i) / (count - 1);
            samples.emplace_back(p, qng::m_value(p));
        }
        const auto hull = qng::envelope_bruteforce(samples);
        double worst = 0.0;
        for (const auto& [p, unused] : samples) {
            worst = std::max(worst, std::abs(hull(p) - qng::qng_noisy_photon(p, *envelope)));
        }
        return {worst <= 1e-5, "worst deviation " + num(worst) + " over " +
                                   std::to_string(count) + " grid points"};
    });

    criterion("monotone property suite", 120.0, [&]() -> Outcome {
        if (!envelope) return {false, "envelope unavailable"};
        const qng::PropertySuiteConfig config;
        const auto reports = qng::run_property_suite(config, *envelope);
        int violations = 0;
        std::string first_failure;
        for (const auto& report : reports) {
            violations += report.violations;
            if (!report.passed() && first_failure.empty()) {
                first_failure = report.name + ": " +
                                (report.failures.empty() ? "unnamed case" : report.failures[0]);
            }
        }
        if (violations > 0) {
            return {false, std::to_string(violations) + " violations; first is " + first_failure};
        }
        int trials = 0;
        for (const auto& report : reports) trials += report.trials;
        return {true, "0 violations over " + std::to_string(trials) + " checks"};
    });

    criterion("decomposition achievability", 0.0, [&]() -> Outcome {
        if (!envelope) return {false, "envelope unavailable"};
        constexpr int dim = 8;
        const double p_values[] = {0.01, 0.03, 0.0, 0.065, 0.0, 0.3, 0.9};
        double worst_entry = 0.0;
        double worst_value = 0.0;
        for (size_t i = 0; i < std::size(p_values); ++i) {
            double p = p_values[i];
            if (i == 2) p = envelope->p1;
            if (i == 4) p = envelope->p2;
            const auto decomposition = qng::optimal_decomposition(p, *envelope);
            qng::Matrix mixture = qng::Matrix::Zero(dim, dim);
            double weighted_ng = 0.0;
            for (const auto& [weight, params] : decomposition.components) {
                mixture += weight * qng::density(params, dim).matrix();
                weighted_ng += weight * qng::ng_closed_form(params);
            }
            const auto target = qng::density({p, 0.0, 0.0}, dim);
            worst_entry =
                std::max(worst_entry, (mixture - target.matrix()).cwiseAbs().maxCoeff());
            worst_value = std::max(
                worst_value, std::abs(weighted_ng - qng::qng_noisy_photon(p, *envelope)));
        }
        const bool ok = worst_entry <= 1e-10 && worst_value <= 1e-8;
        return {ok, "worst reconstruction " + num(worst_entry) + ", worst value gap " +
                        num(worst_value)};
    });

    criterion("roof never exceeds the single-state measure", 0.0, [&]() -> Outcome {
        if (!envelope) return {false, "envelope unavailable"};
        constexpr int count = 1000;
        double worst_excess = -1.0;
        double worst_gap_above = 0.0;
        for (int i = 0; i < count; ++i) {
            const double p = static_cast<double>(i) / (count - 1);
            const double q = qng::qng_noisy_photon(p, *envelope);
            const double ng = qng::ng_closed_form({p, 0.0, 0.0});
            worst_excess = std::max(worst_excess, q - ng);
            if (p >= envelope->p2 + 1e-4) {
                worst_gap_above = std::max(worst_gap_above, std::abs(q - ng));
            }
        }
        const bool ok = worst_excess <= 1e-9 && worst_gap_above <= 1e-9;
        return {ok, "max(Q - NG) = " + num(worst_excess) + ", max |Q - NG| above p2 = " +
                        num(worst_gap_above)};
    });

    criterion("block-diagonal relative-entropy identity", 0.0, [&]() -> Outcome {
        std::mt19937_64 rng(24680);
        double worst = 0.0;
        for (int instance = 0; instance < 100; ++instance) {
            const int blocks = 2 + static_cast<int>(uniform(rng) * 3.0);
            std::vector<double> w1(blocks);
            std::vector<double> w2(blocks);
            std::vector<qng::DensityOperator> b1;
            std::vector<qng::DensityOperator> b2;
            double s1 = 0.0;
            double s2 = 0.0;
            for (int j = 0; j < blocks; ++j) {
                w1[j] = 0.1 + uniform(rng);
                w2[j] = 0.1 + uniform(rng);
                s1 += w1[j];
                s2 += w2[j];
                const int dim = 2 + static_cast<int>(uniform(rng) * 4.0);
                b1.push_back(random_density(rng, dim));
                b2.push_back(random_density(rng, dim));
            }
            for (int j = 0; j < blocks; ++j) {
                w1[j] /= s1;
                w2[j] /= s2;
            }
            const auto [lhs, rhs] = qng::block_relative_entropy_identity(w1, b1, w2, b2);
            if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
                return {false, "unexpected divergence in instance " + std::to_string(instance)};
            }
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        return {worst <= 1e-8, "worst |lhs - rhs| = " + num(worst) + " over 100 instances"};
    });

    std::printf("%d of %d criteria passed\n", index - failures, index);
    return failures;
}
