#include "qng/fock.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

namespace {

using qng::Complex;
using qng::DensityOperator;
using qng::Matrix;

constexpr double kLn2 = std::numbers::ln2;

Matrix two_level(double p00, double p11, Complex p01) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = p00;
    m(1, 1) = p11;
    m(0, 1) = p01;
    m(1, 0) = std::conj(p01);
    return m;
}

}  // namespace

TEST_CASE("density operator validation") {
    SUBCASE("accepts a valid mixed state") {
        const DensityOperator rho(two_level(0.7, 0.3, Complex(0.1, 0.05)));
        CHECK(rho.dim() == 2);
        CHECK(rho.population(0) == doctest::Approx(0.7));
        CHECK(rho.population(1) == doctest::Approx(0.3));
    }
    SUBCASE("rejects non-Hermitian input") {
        Matrix m = two_level(0.5, 0.5, Complex(0.1, 0.0));
        m(1, 0) = Complex(0.3, 0.0);
        CHECK_THROWS_AS(DensityOperator{m}, std::invalid_argument);
    }
    SUBCASE("rejects wrong trace") {
        CHECK_THROWS_AS(DensityOperator(two_level(0.6, 0.6, Complex(0.0, 0.0))),
                        std::invalid_argument);
    }
    SUBCASE("rejects indefinite matrices") {
        // Hermitian, unit trace, but eigenvalues 1/2 +- sqrt(0.5^2 + ...) < 0.
        CHECK_THROWS_AS(DensityOperator(two_level(0.5, 0.5, Complex(0.7, 0.0))),
                        std::invalid_argument);
    }
    SUBCASE("rejects non-square input") {
        CHECK_THROWS_AS(DensityOperator(Matrix::Zero(2, 3)), std::invalid_argument);
    }
    SUBCASE("population index bounds") {
        const DensityOperator rho = qng::states::vacuum(4);
        CHECK_THROWS_AS(rho.population(4), std::out_of_range);
        CHECK_THROWS_AS(rho.population(-1), std::out_of_range);
    }
}

TEST_CASE("moments") {
    SUBCASE("vacuum") {
        const auto stats = qng::moments(qng::states::vacuum(10));
        CHECK(stats.mean_q == doctest::Approx(0.0).epsilon(1e-12).scale(1));
        CHECK(stats.mean_p == doctest::Approx(0.0).epsilon(1e-12).scale(1));
        CHECK(stats.cov(0, 0) == doctest::Approx(0.5));
        CHECK(stats.cov(1, 1) == doctest::Approx(0.5));
        CHECK(stats.cov(0, 1) == doctest::Approx(0.0).scale(1));
    }
    SUBCASE("two-level block with coherence") {
        const double p = 0.3;
        const double r = 0.2;
        const double theta = 0.7;
        const DensityOperator rho(
            [&] {
                Matrix m = Matrix::Zero(8, 8);
                m(0, 0) = 1.0 - p;
                m(1, 1) = p;
                m(0, 1) = r * std::exp(Complex(0.0, theta));
                m(1, 0) = std::conj(m(0, 1));
                return m;
            }());
        const auto stats = qng::moments(rho);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        CHECK(stats.mean_q == doctest::Approx(std::sqrt(2.0) * r * c).epsilon(1e-12));
        CHECK(stats.mean_p == doctest::Approx(-std::sqrt(2.0) * r * s).epsilon(1e-12));
        CHECK(stats.cov(0, 0) == doctest::Approx(0.5 + p - 2.0 * r * r * c * c).epsilon(1e-12));
        CHECK(stats.cov(1, 1) == doctest::Approx(0.5 + p - 2.0 * r * r * s * s).epsilon(1e-12));
        CHECK(stats.cov(0, 1) == doctest::Approx(2.0 * r * r * s * c).epsilon(1e-12));
        CHECK(stats.cov(0, 1) == stats.cov(1, 0));
    }
    SUBCASE("coherent state has vacuum covariance and displaced mean") {
        const auto stats = qng::moments(qng::states::coherent(Complex(0.5, 0.0), 30));
        CHECK(std::abs(stats.mean_q - std::sqrt(2.0) * 0.5) < 1e-8);
        CHECK(std::abs(stats.mean_p) < 1e-8);
        CHECK(std::abs(stats.cov(0, 0) - 0.5) < 1e-8);
        CHECK(std::abs(stats.cov(1, 1) - 0.5) < 1e-8);
        CHECK(std::abs(stats.cov(0, 1)) < 1e-8);
    }
    SUBCASE("uncertainty bound holds") {
        const auto stats = qng::moments(qng::states::thermal(0.8, 40));
        CHECK(stats.cov.determinant() >= 0.25 - 1e-9);
    }
    SUBCASE("rejects states crowding the truncation boundary") {
        CHECK_THROWS_AS(qng::moments(qng::states::fock(7, 8)), qng::truncation_error);
    }
}

TEST_CASE("von Neumann entropy") {
    SUBCASE("pure Fock state") {
        CHECK(qng::von_neumann_entropy(qng::states::fock(1, 6)) ==
              doctest::Approx(0.0).scale(1));
    }
    SUBCASE("maximally mixed two levels") {
        const DensityOperator rho(two_level(0.5, 0.5, Complex(0.0, 0.0)));
        CHECK(qng::von_neumann_entropy(rho) == doctest::Approx(kLn2).epsilon(1e-14));
    }
    SUBCASE("binary mixture") {
        const DensityOperator rho(two_level(0.7, 0.3, Complex(0.0, 0.0)));
        CHECK(qng::von_neumann_entropy(rho) == doctest::Approx(0.61086430205489355).epsilon(1e-12));
    }
    SUBCASE("bounded by ln(dim)") {
        const DensityOperator rho = qng::states::thermal(1.0, 32);
        const double entropy = qng::von_neumann_entropy(rho);
        CHECK(entropy >= 0.0);
        CHECK(entropy <= std::log(32.0));
    }
}

TEST_CASE("eigendecomposition") {
    SUBCASE("diagonal input, ascending order") {
        const auto es = qng::eigen_decompose(DensityOperator(two_level(0.7, 0.3, Complex(0, 0))));
        CHECK(es.values(0) == doctest::Approx(0.3));
        CHECK(es.values(1) == doctest::Approx(0.7));
    }
    SUBCASE("coherence block") {
        const auto es = qng::eigen_decompose(DensityOperator(two_level(0.5, 0.5, Complex(0.4, 0))));
        CHECK(es.values(0) == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(es.values(1) == doctest::Approx(0.9).epsilon(1e-12));
    }
    SUBCASE("degenerate spectrum and reconstruction") {
        const DensityOperator rho(two_level(0.5, 0.5, Complex(0, 0)));
        const auto es = qng::eigen_decompose(rho);
        CHECK(es.values(0) == doctest::Approx(0.5));
        CHECK(es.values(1) == doctest::Approx(0.5));
        const Matrix rebuilt =
            es.vectors * es.values.asDiagonal().toDenseMatrix().cast<qng::Complex>() *
            es.vectors.adjoint();
        CHECK((rebuilt - rho.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("standard states") {
    SUBCASE("fock requires room") {
        CHECK_THROWS_AS(qng::states::fock(8, 8), qng::truncation_error);
        CHECK_THROWS_AS(qng::states::fock(-1, 8), std::invalid_argument);
    }
    SUBCASE("coherent amplitudes follow the Poisson ladder") {
        const auto amps = qng::states::coherent_amplitudes(Complex(0.5, 0.0), 6);
        CHECK(std::abs(amps[0]) == doctest::Approx(std::exp(-0.125)));
        CHECK(std::abs(amps[2]) ==
              doctest::Approx(std::exp(-0.125) * 0.25 / std::sqrt(2.0)));
    }
    SUBCASE("coherent truncation rejection") {
        CHECK_THROWS_AS(qng::states::coherent(Complex(3.0, 0.0), 10), qng::truncation_error);
    }
    SUBCASE("thermal occupancies are geometric") {
        const DensityOperator rho = qng::states::thermal(0.5, 30);
        CHECK(rho.population(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(rho.population(1) == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
        CHECK(rho.population(2) == doctest::Approx(2.0 / 27.0).epsilon(1e-12));
    }
    SUBCASE("thermal truncation rejection") {
        CHECK_THROWS_AS(qng::states::thermal(5.0, 10), qng::truncation_error);
        CHECK_THROWS_AS(qng::states::thermal(-0.1, 10), std::invalid_argument);
    }
    SUBCASE("thermal nbar zero is vacuum") {
        const DensityOperator rho = qng::states::thermal(0.0, 5);
        CHECK(rho.population(0) == doctest::Approx(1.0));
    }
    SUBCASE("pure-state helper validates the norm") {
        qng::Vector psi = qng::Vector::Zero(4);
        psi(0) = psi(1) = 1.0 / std::sqrt(2.0);
        const DensityOperator rho = qng::states::pure(psi);
        CHECK(rho.matrix()(0, 1).real() == doctest::Approx(0.5));
        psi(1) = 1.0;
        CHECK_THROWS_AS(qng::states::pure(psi), std::invalid_argument);
    }
}

TEST_CASE("annihilation operator ladder") {
    const Matrix a = qng::annihilation_operator(4);
    CHECK(a(0, 1).real() == doctest::Approx(1.0));
    CHECK(a(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(a(2, 3).real() == doctest::Approx(std::sqrt(3.0)));
    CHECK(a(1, 0).real() == doctest::Approx(0.0));
}
