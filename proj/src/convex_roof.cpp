#include "qng/convex_roof.hpp"

#include "qng/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qng {

namespace {

constexpr double kSlopeBisectTol = 1e-13;
constexpr double kPointBisectTol = 1e-12;
constexpr double kTangencyTol = 1e-9;
constexpr double kSlopeMatchTol = 1e-7;
constexpr double kCrossoverMargin = 2e-4;  // keep tangent intervals clear of the kink at c

void check_convex_on(const ScalarFunction& m, const Interval& iv) {
    constexpr int kSamples = 33;
    const double h = (iv.hi - iv.lo) / (kSamples - 1);
    double f_prev = m(iv.lo);
    double f_cur = m(iv.lo + h);
    for (int i = 1; i + 1 < kSamples; ++i) {
        const double f_next = m(iv.lo + (i + 1) * h);
        const double second_diff = f_prev + f_next - 2.0 * f_cur;
        if (second_diff < -1e-6 * std::max(1.0, std::abs(f_cur))) {
            throw std::invalid_argument("function is not convex on [" + std::to_string(iv.lo) +
                                        ", " + std::to_string(iv.hi) + "]");
        }
        f_prev = f_cur;
        f_cur = f_next;
    }
}

// Tangency point in [iv.lo, iv.hi] where mprime = s; mprime is increasing on a
// convex interval, so bisection applies. Clamps to the nearer endpoint when s
// lies outside the attained slope range.
double point_at_slope(const ScalarFunction& mprime, const Interval& iv, double s) {
    double a = iv.lo;
    double b = iv.hi;
    const double fa = mprime(a) - s;
    const double fb = mprime(b) - s;
    if (fa >= 0.0) return a;
    if (fb <= 0.0) return b;
    double ga = fa;
    while (b - a > kPointBisectTol) {
        const double mid = 0.5 * (a + b);
        const double gm = mprime(mid) - s;
        if ((ga <= 0.0) != (gm <= 0.0)) {
            b = mid;
        } else {
            a = mid;
            ga = gm;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

std::optional<EnvelopeSolution> common_tangent(const ScalarFunction& m,
                                               const ScalarFunction& mprime,
                                               Interval left, Interval right) {
    if (!(left.lo < left.hi) || !(right.lo < right.hi) || !(left.hi <= right.lo)) {
        throw std::invalid_argument("tangent intervals must be ordered and disjoint");
    }
    check_convex_on(m, left);
    check_convex_on(m, right);

    // Admissible common slopes must be attainable as a tangent slope on both
    // intervals; outside this range one of the tangency points would clamp to
    // an endpoint and the "tangent" would degenerate into a chord.
    const double s_lo = std::max(mprime(left.lo), mprime(right.lo)) + 1e-9;
    const double s_hi = std::min(mprime(left.hi), mprime(right.hi)) - 1e-9;
    if (!(s_lo < s_hi)) return std::nullopt;

    // Chord residual phi(s) = m(p1) + s (p2 - p1) - m(p2) is increasing in s
    // because d phi/d s = p2 - p1 > 0 (envelope theorem at the tangency points).
    auto residual = [&](double s) {
        const double p1 = point_at_slope(mprime, left, s);
        const double p2 = point_at_slope(mprime, right, s);
        return m(p1) + s * (p2 - p1) - m(p2);
    };
    double a = s_lo;
    double b = s_hi;
    double fa = residual(a);
    const double fb = residual(b);
    if ((fa <= 0.0) == (fb <= 0.0)) return std::nullopt;
    while (b - a > kSlopeBisectTol) {
        const double mid = 0.5 * (a + b);
        const double fm = residual(mid);
        if ((fa <= 0.0) != (fm <= 0.0)) {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }

    EnvelopeSolution sol;
    sol.slope = 0.5 * (a + b);
    sol.p1 = point_at_slope(mprime, left, sol.slope);
    sol.p2 = point_at_slope(mprime, right, sol.slope);
    sol.m_p1 = m(sol.p1);
    sol.m_p2 = m(sol.p2);

    const double tangency = std::abs(sol.slope * (sol.p2 - sol.p1) + sol.m_p1 - sol.m_p2);
    const double slope_dev =
        std::max(std::abs(mprime(sol.p1) - sol.slope), std::abs(mprime(sol.p2) - sol.slope));
    if (tangency > kTangencyTol || slope_dev > kSlopeMatchTol) return std::nullopt;
    return sol;
}

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<double, double>> knots)
    : knots_(std::move(knots)) {
    if (knots_.empty()) throw std::invalid_argument("interpolant needs at least one knot");
    for (size_t i = 1; i < knots_.size(); ++i) {
        if (!(knots_[i - 1].first < knots_[i].first)) {
            throw std::invalid_argument("knot abscissae must be strictly increasing");
        }
    }
}

double PiecewiseLinear::operator()(double x) const {
    if (x <= knots_.front().first) return knots_.front().second;
    if (x >= knots_.back().first) return knots_.back().second;
    const auto it = std::upper_bound(
        knots_.begin(), knots_.end(), x,
        [](double value, const std::pair<double, double>& k) { return value < k.first; });
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *(it - 1);
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

PiecewiseLinear envelope_bruteforce(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 2) {
        throw std::invalid_argument("hull construction needs at least two samples");
    }
    std::sort(samples.begin(), samples.end());
    // Collapse duplicate abscissae, keeping the lowest ordinate.
    std::vector<std::pair<double, double>> pts;
    pts.reserve(samples.size());
    for (const auto& s : samples) {
        if (!pts.empty() && pts.back().first == s.first) {
            pts.back().second = std::min(pts.back().second, s.second);
        } else {
            pts.push_back(s);
        }
    }

    // Monotone chain, lower hull only; the <= turn test drops collinear
    // interior points without changing the interpolated values.
    std::vector<std::pair<double, double>> hull;
    auto turns_right = [](const std::pair<double, double>& o, const std::pair<double, double>& a,
                          const std::pair<double, double>& b) {
        return (a.first - o.first) * (b.second - o.second) -
                   (a.second - o.second) * (b.first - o.first) <=
               0.0;
    };
    for (const auto& pt : pts) {
        while (hull.size() >= 2 && turns_right(hull[hull.size() - 2], hull.back(), pt)) {
            hull.pop_back();
        }
        hull.push_back(pt);
    }
    return PiecewiseLinear(std::move(hull));
}

FamilyEnvelopeResult solve_family_envelope(double lo, double hi) {
    FamilyEnvelopeResult result;
    result.crossover_p = crossover(lo, hi);
    if (!result.crossover_p) return result;

    const double c = *result.crossover_p;
    const Interval left{lo, c - kCrossoverMargin};
    const Interval right{c + kCrossoverMargin, hi};
    if (!(left.lo < left.hi) || !(right.lo < right.hi)) return result;
    result.solution = common_tangent([](double p) { return m_value(p); },
                                     [](double p) { return m_prime(p); }, left, right);
    return result;
}

double qng_noisy_photon(double p, const EnvelopeSolution& env) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("single-photon fraction p must lie in [0, 1]");
    }
    if (p <= env.p1 || p >= env.p2) return m_value(p);
    const double span = env.p2 - env.p1;
    return ((env.p2 - p) * env.m_p1 + (p - env.p1) * env.m_p2) / span;
}

Decomposition optimal_decomposition(double p, const EnvelopeSolution& env) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("single-photon fraction p must lie in [0, 1]");
    }
    Decomposition decomposition;
    if (p >= env.p2) {
        decomposition.components.push_back({1.0, NoisyPhotonParams{p, 0.0, 0.0}});
        return decomposition;
    }
    if (p <= env.p1) {
        const double r = minimize_over_r(p).r_opt;
        decomposition.components.push_back({0.5, NoisyPhotonParams{p, r, 0.0}});
        decomposition.components.push_back({0.5, NoisyPhotonParams{p, r, std::numbers::pi}});
        return decomposition;
    }
    const double r1 = minimize_over_r(env.p1).r_opt;
    const double w = (env.p2 - p) / (env.p2 - env.p1);
    decomposition.components.push_back({0.5 * w, NoisyPhotonParams{env.p1, r1, 0.0}});
    decomposition.components.push_back({0.5 * w, NoisyPhotonParams{env.p1, r1, std::numbers::pi}});
    decomposition.components.push_back({1.0 - w, NoisyPhotonParams{env.p2, 0.0, 0.0}});
    return decomposition;
}

double qng_pure(const DensityOperator& psi) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(psi.matrix(), Eigen::EigenvaluesOnly);
    const double largest = solver.eigenvalues().maxCoeff();
    if (largest < 1.0 - 1e-10) {
        throw std::invalid_argument("state is mixed (largest eigenvalue " +
                                    std::to_string(largest) + "); the shortcut Q = NG needs purity");
    }
    return non_gaussianity(psi);
}

}  // namespace qng
