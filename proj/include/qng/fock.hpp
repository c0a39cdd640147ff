#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

// Core types for single-mode bosonic states in a truncated Fock basis.
//
// Conventions used throughout the library:
//   - hbar = 1, quadratures q = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)),
//     so the vacuum covariance matrix is (1/2) * Identity.
//   - All entropies are in nats (natural logarithm).
//   - A matrix of dimension `dim` spans Fock states |0>, ..., |dim-1>.

namespace qng {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Thrown when a requested state or operation cannot be represented faithfully
// in the given truncated Fock space (leaked weight above tolerance).
class truncation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Validated density matrix: Hermitian, unit trace, positive semidefinite.
// Construction throws std::invalid_argument if any invariant fails beyond
// tolerance (hermiticity 1e-12; trace deviation and negative eigenvalues 1e-10).
class DensityOperator {
public:
    explicit DensityOperator(Matrix m);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Matrix& matrix() const { return mat_; }

    // Diagonal occupation probability <n|rho|n>.
    double population(int n) const;

private:
    Matrix mat_;
};

// First and second quadrature moments of a state.
struct QuadratureStatistics {
    double mean_q = 0.0;
    double mean_p = 0.0;
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();  // symmetrized covariance
};

// Matrix representation of the annihilation operator a on the truncated space:
// a|n> = sqrt(n)|n-1>.
Matrix annihilation_operator(int dim);

// Means and symmetrized covariance matrix of (q, p) for `rho`.
// Throws truncation_error if the top Fock level carries population > 1e-6,
// since the moment sums would then be visibly distorted by the cutoff.
QuadratureStatistics moments(const DensityOperator& rho);

// Von Neumann entropy -sum_k lambda_k ln lambda_k in nats.
// Eigenvalues below 1e-14 are treated as exact zeros.
double von_neumann_entropy(const DensityOperator& rho);

// Spectral decomposition with eigenvalues in ascending order; eigenvectors
// are the columns of `vectors`.
struct EigenSystem {
    Eigen::VectorXd values;
    Matrix vectors;
};

EigenSystem eigen_decompose(const DensityOperator& rho);

namespace states {

DensityOperator vacuum(int dim);

// Fock state |n><n|. Throws truncation_error if n >= dim.
DensityOperator fock(int n, int dim);

// Fock-basis amplitudes of the coherent state |alpha>, c_n = e^{-|a|^2/2} a^n / sqrt(n!).
std::vector<Complex> coherent_amplitudes(Complex alpha, int dim);

// Coherent state |alpha><alpha|. Throws truncation_error if more than 1e-6
// of the norm falls outside the truncated space; the retained amplitudes are
// renormalized.
DensityOperator coherent(Complex alpha, int dim);

// Thermal state with mean photon number nbar >= 0. Throws truncation_error
// if the truncated tail weight exceeds 1e-6; retained weights renormalized.
DensityOperator thermal(double nbar, int dim);

// Pure state |psi><psi| from Fock-basis amplitudes. The amplitude vector must
// be normalized within 1e-10.
DensityOperator pure(const Vector& amplitudes);

}  // namespace states

}  // namespace qng
