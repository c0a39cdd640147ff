#include "qng/noisy_photon.hpp"

#include "qng/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace qng {

namespace {

constexpr double kPositivitySlack = 1e-12;  // allowed r^2 - p(1-p) excess
constexpr double kRootTol = 1e-12;          // bisection width for dN/dr roots
constexpr double kCrossoverTol = 1e-7;      // bisection width for the r_opt transition
constexpr double kRoptPositive = 1e-8;      // r_opt above this counts as "positive"

double xlogx(double x) { return x <= 0.0 ? 0.0 : x * std::log(x); }

// Discriminant t = sqrt((1/2-p)^2 + r^2); lambda_{-+} = 1/2 -+ t.
double half_gap(double p, double r) {
    return std::sqrt((0.5 - p) * (0.5 - p) + r * r);
}

double lambda_minus(double p, double r) {
    // Cancellation-free: 1/4 - t^2 = p(1-p) - r^2.
    return std::max(0.0, (p * (1.0 - p) - r * r) / (0.5 + half_gap(p, r)));
}

double nth_stable(double p, double r) {
    const double a = 0.5 + p;
    const double b = 0.5 + p - 2.0 * r * r;
    const double root = std::sqrt(std::max(a * b, 0.0));
    // Cancellation-free: ab - 1/4 = p(1+p) - r^2(1+2p).
    return std::max(0.0, (p * (1.0 + p) - r * r * (1.0 + 2.0 * p)) / (0.5 + root));
}

double ng_value(double p, double r) {
    const double t = half_gap(p, r);
    return gaussian_entropy(nth_stable(p, r)) + xlogx(0.5 + t) + xlogx(lambda_minus(p, r));
}

// dN/dr evaluated without forming atanh near its pole:
// atanh(2 lambda_+ - 1) = ln(lambda_+/lambda_-)/2 and
// atanh(1/(2n+1)) = ln((n+1)/n)/2.
double ng_derivative(double p, double r) {
    const double lm = lambda_minus(p, r);
    const double lp = 0.5 + half_gap(p, r);
    if (lm <= 0.0) {
        return r > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    const double gap = lp - lm;
    const double term1 = gap > 1e-14 ? 0.5 * std::log(lp / lm) / gap : 1.0;
    const double n = nth_stable(p, r);
    const double term2 = n > 0.0 ? (1.0 + 2.0 * p) / (2.0 * n + 1.0) *
                                       0.5 * std::log((n + 1.0) / n)
                                 : std::numeric_limits<double>::infinity();
    return 4.0 * r * (term1 - term2);
}

double partial_p(double p, double r) {
    const double n = nth_stable(p, r);
    const double thermal_part =
        n > 0.0 ? std::log((n + 1.0) / n) * (1.0 + 2.0 * p - 2.0 * r * r) / (2.0 * n + 1.0)
                : std::numeric_limits<double>::infinity();
    const double t = half_gap(p, r);
    // (p - 1/2)/t * ln(lambda_+/lambda_-); the t -> 0 limit is 4(p - 1/2) -> 0.
    double mixing_part = 0.0;
    if (t >= 1e-14) {
        const double lm = lambda_minus(p, r);
        const double log_ratio =
            lm > 0.0 ? std::log((0.5 + t) / lm) : std::numeric_limits<double>::infinity();
        mixing_part = (p - 0.5) / t * log_ratio;
    }
    return thermal_part + mixing_part;
}

}  // namespace

void NoisyPhotonParams::validate() const {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("single-photon fraction p must lie in [0, 1]");
    }
    if (!(r >= 0.0)) {
        throw std::invalid_argument("coherence magnitude r must be non-negative");
    }
    if (r * r > p * (1.0 - p) + kPositivitySlack) {
        throw std::invalid_argument("coherence r^2 = " + std::to_string(r * r) +
                                    " exceeds p(1-p) = " + std::to_string(p * (1.0 - p)) +
                                    "; not a state");
    }
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("phase theta must be finite");
    }
}

double NoisyPhotonParams::r_max() const { return std::sqrt(std::max(p * (1.0 - p), 0.0)); }

DensityOperator density(const NoisyPhotonParams& params, int dim) {
    params.validate();
    if (dim < 2) throw std::invalid_argument("family states need dimension >= 2");
    Matrix m = Matrix::Zero(dim, dim);
    m(0, 0) = 1.0 - params.p;
    m(1, 1) = params.p;
    m(0, 1) = params.r * std::exp(Complex(0.0, params.theta));
    m(1, 0) = std::conj(m(0, 1));
    return DensityOperator(std::move(m));
}

std::pair<double, double> eigenvalues(const NoisyPhotonParams& params) {
    params.validate();
    return {lambda_minus(params.p, params.r), 0.5 + half_gap(params.p, params.r)};
}

double thermal_occupation(const NoisyPhotonParams& params) {
    params.validate();
    return nth_stable(params.p, params.r);
}

double ng_closed_form(const NoisyPhotonParams& params) {
    params.validate();
    return ng_value(params.p, params.r);
}

double ng_derivative_r(const NoisyPhotonParams& params) {
    params.validate();
    return ng_derivative(params.p, params.r);
}

double ng_partial_p(const NoisyPhotonParams& params) {
    params.validate();
    return partial_p(params.p, params.r);
}

MinimizationResult minimize_over_r(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("single-photon fraction p must lie in [0, 1]");
    }
    const double r_max = std::sqrt(std::max(p * (1.0 - p), 0.0));
    if (r_max == 0.0) {
        return {p, ng_value(p, 0.0), 0.0};
    }

    // Interior sampling grid for sign changes of dN/dr: 200 uniform points,
    // plus points log-spaced in lambda_- via r(l) = sqrt((p - l)(1 - p - l)).
    // The extra points resolve the boundary layer near r_max, where the
    // derivative diverges and interior roots crowd together.
    constexpr int kUniform = 200;
    constexpr int kBoundary = 200;
    std::vector<double> grid;
    grid.reserve(kUniform + kBoundary);
    for (int i = 1; i < kUniform; ++i) {
        grid.push_back(r_max * static_cast<double>(i) / kUniform);
    }
    const double lm_hi = lambda_minus(p, grid.back());
    const double lm_lo = 1e-18;
    if (lm_hi > lm_lo) {
        const double step = std::log(lm_hi / lm_lo) / (kBoundary - 1);
        for (int i = 0; i < kBoundary; ++i) {
            const double l = lm_lo * std::exp(step * i);
            const double v = (p - l) * (1.0 - p - l);
            if (v > 0.0) grid.push_back(std::sqrt(v));
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<double> candidates = {0.0, r_max};
    double prev_r = grid.front();
    double prev_d = ng_derivative(p, prev_r);
    for (size_t i = 1; i < grid.size(); ++i) {
        const double cur_r = grid[i];
        const double cur_d = ng_derivative(p, cur_r);
        if (prev_d == 0.0) candidates.push_back(prev_r);
        const bool sign_change =
            (prev_d < 0.0 && cur_d > 0.0) || (prev_d > 0.0 && cur_d < 0.0);
        if (sign_change) {
            double a = prev_r;
            double b = cur_r;
            double fa = prev_d;
            while (b - a > kRootTol) {
                const double mid = 0.5 * (a + b);
                const double fm = ng_derivative(p, mid);
                if ((fa <= 0.0) != (fm <= 0.0)) {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            candidates.push_back(0.5 * (a + b));
        }
        prev_r = cur_r;
        prev_d = cur_d;
    }

    MinimizationResult best{p, std::numeric_limits<double>::infinity(), 0.0};
    for (const double r : candidates) {
        const double value = ng_value(p, r);
        if (value < best.m_value) {
            best.m_value = value;
            best.r_opt = r;
        }
    }
    return best;
}

double m_value(double p) { return minimize_over_r(p).m_value; }

double m_prime(double p) {
    const MinimizationResult res = minimize_over_r(p);
    return partial_p(p, res.r_opt);
}

std::optional<double> crossover(double lo, double hi) {
    if (!(lo > 0.0 && hi > lo && hi < 1.0)) {
        throw std::invalid_argument("crossover interval must satisfy 0 < lo < hi < 1");
    }
    auto positive = [](double p) { return minimize_over_r(p).r_opt > kRoptPositive; };
    bool at_lo = positive(lo);
    bool at_hi = positive(hi);
    if (at_lo == at_hi) return std::nullopt;

    double a = lo;
    double b = hi;
    while (b - a > kCrossoverTol) {
        const double mid = 0.5 * (a + b);
        if (positive(mid) == at_lo) {
            a = mid;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace qng
