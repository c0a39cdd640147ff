#include "qng/fock.hpp"

#include <cmath>
#include <string>

namespace qng {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kValidationTol = 1e-10;
constexpr double kEntropyFloor = 1e-14;
constexpr double kTruncationUnsafe = 1e-6;
// State factories renormalize truncated tails up to this weight; beyond it the
// truncated representation is considered unfaithful.
constexpr double kFactoryTailTol = 1e-6;

}  // namespace

DensityOperator::DensityOperator(Matrix m) : mat_(std::move(m)) {
    if (mat_.rows() < 1 || mat_.rows() != mat_.cols()) {
        throw std::invalid_argument("density matrix must be square and non-empty");
    }
    const double herm_dev = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > kHermitianTol) {
        throw std::invalid_argument("density matrix not Hermitian (deviation " +
                                    std::to_string(herm_dev) + ")");
    }
    // Symmetrize so downstream spectral code sees an exactly Hermitian matrix.
    mat_ = 0.5 * (mat_ + mat_.adjoint().eval());

    const double trace_dev = std::abs(mat_.trace().real() - 1.0) + std::abs(mat_.trace().imag());
    if (trace_dev > kValidationTol) {
        throw std::invalid_argument("density matrix trace deviates from 1 by " +
                                    std::to_string(trace_dev));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(mat_, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -kValidationTol) {
        throw std::invalid_argument("density matrix has negative eigenvalue " +
                                    std::to_string(min_eig));
    }
}

double DensityOperator::population(int n) const {
    if (n < 0 || n >= dim()) {
        throw std::out_of_range("population index outside truncated space");
    }
    return mat_(n, n).real();
}

Matrix annihilation_operator(int dim) {
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

QuadratureStatistics moments(const DensityOperator& rho) {
    const int dim = rho.dim();
    const Matrix& m = rho.matrix();

    const double top = m(dim - 1, dim - 1).real();
    if (top > kTruncationUnsafe) {
        throw truncation_error("state occupies the top Fock level with population " +
                               std::to_string(top) + "; moments would be unreliable");
    }

    // <a> = sum_n sqrt(n+1) rho_{n+1,n};  <a^2> = sum_n sqrt((n+1)(n+2)) rho_{n+2,n};
    // <n> = sum_n n rho_{nn}. Index sums read directly off the matrix, avoiding
    // dense operator products.
    Complex mean_a = 0.0;
    Complex mean_a2 = 0.0;
    double mean_n = 0.0;
    for (int n = 0; n < dim; ++n) {
        mean_n += n * m(n, n).real();
        if (n + 1 < dim) mean_a += std::sqrt(n + 1.0) * m(n + 1, n);
        if (n + 2 < dim) mean_a2 += std::sqrt((n + 1.0) * (n + 2.0)) * m(n + 2, n);
    }

    QuadratureStatistics stats;
    stats.mean_q = std::sqrt(2.0) * mean_a.real();
    stats.mean_p = std::sqrt(2.0) * mean_a.imag();
    stats.cov(0, 0) = mean_a2.real() + mean_n + 0.5 - stats.mean_q * stats.mean_q;
    stats.cov(1, 1) = -mean_a2.real() + mean_n + 0.5 - stats.mean_p * stats.mean_p;
    stats.cov(0, 1) = mean_a2.imag() - stats.mean_q * stats.mean_p;
    stats.cov(1, 0) = stats.cov(0, 1);
    return stats;
}

double von_neumann_entropy(const DensityOperator& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
    double entropy = 0.0;
    for (int i = 0; i < solver.eigenvalues().size(); ++i) {
        const double lambda = solver.eigenvalues()(i);
        if (lambda > kEntropyFloor) entropy -= lambda * std::log(lambda);
    }
    return entropy;
}

EigenSystem eigen_decompose(const DensityOperator& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix());
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition failed to converge");
    }
    return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

namespace states {

DensityOperator vacuum(int dim) { return fock(0, dim); }

DensityOperator fock(int n, int dim) {
    if (n < 0) throw std::invalid_argument("Fock index must be non-negative");
    if (n >= dim) {
        throw truncation_error("Fock state |" + std::to_string(n) +
                               "> does not fit in dimension " + std::to_string(dim));
    }
    Matrix m = Matrix::Zero(dim, dim);
    m(n, n) = 1.0;
    return DensityOperator(std::move(m));
}

std::vector<Complex> coherent_amplitudes(Complex alpha, int dim) {
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
    std::vector<Complex> c(static_cast<size_t>(dim));
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) {
        c[static_cast<size_t>(n)] = c[static_cast<size_t>(n - 1)] * alpha / std::sqrt(static_cast<double>(n));
    }
    return c;
}

DensityOperator coherent(Complex alpha, int dim) {
    const auto amps = coherent_amplitudes(alpha, dim);
    Vector psi(dim);
    double norm2 = 0.0;
    for (int n = 0; n < dim; ++n) {
        psi(n) = amps[static_cast<size_t>(n)];
        norm2 += std::norm(amps[static_cast<size_t>(n)]);
    }
    if (1.0 - norm2 > kFactoryTailTol) {
        throw truncation_error("coherent state |alpha|=" + std::to_string(std::abs(alpha)) +
                               " leaks weight " + std::to_string(1.0 - norm2) +
                               " outside dimension " + std::to_string(dim));
    }
    psi /= std::sqrt(norm2);
    return DensityOperator(psi * psi.adjoint());
}

DensityOperator thermal(double nbar, int dim) {
    if (nbar < 0.0) throw std::invalid_argument("thermal occupation must be non-negative");
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
    if (nbar == 0.0) return vacuum(dim);

    const double ratio = nbar / (nbar + 1.0);
    // Geometric weights w_n = ratio^n / (nbar+1); the exact truncated tail is ratio^dim.
    const double tail = std::pow(ratio, dim);
    if (tail > kFactoryTailTol) {
        throw truncation_error("thermal state nbar=" + std::to_string(nbar) +
                               " leaks weight " + std::to_string(tail) +
                               " outside dimension " + std::to_string(dim));
    }
    Matrix m = Matrix::Zero(dim, dim);
    double w = 1.0 / (nbar + 1.0);
    double total = 0.0;
    for (int n = 0; n < dim; ++n) {
        m(n, n) = w;
        total += w;
        w *= ratio;
    }
    m /= total;
    return DensityOperator(std::move(m));
}

DensityOperator pure(const Vector& amplitudes) {
    const double norm = amplitudes.norm();
    if (std::abs(norm - 1.0) > kValidationTol) {
        throw std::invalid_argument("pure-state amplitudes not normalized (norm " +
                                    std::to_string(norm) + ")");
    }
    return DensityOperator(amplitudes * amplitudes.adjoint());
}

}  // namespace states

}  // namespace qng
