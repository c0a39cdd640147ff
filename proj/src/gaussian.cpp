#include "qng/gaussian.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>
#include <string>

namespace qng {

namespace {

constexpr double kSigmaSupportFloor = 1e-16;  // sigma eigenvalues below this count as kernel
constexpr double kKernelWeightTol = 1e-6;     // rho weight on the kernel that triggers +inf
constexpr double kNegativeClamp = 1e-9;

}  // namespace

double thermal_photon_number(const Eigen::Matrix2d& cov) {
    const double det = cov.determinant();
    if (det < 0.25 - 1e-6) {
        throw std::invalid_argument("covariance matrix violates the uncertainty bound (det " +
                                    std::to_string(det) + " < 1/4)");
    }
    const double n = std::sqrt(std::max(det, 0.0)) - 0.5;
    return n < 0.0 ? 0.0 : n;
}

double gaussian_entropy(double n_th) {
    if (n_th < 0.0) throw std::invalid_argument("thermal occupation must be non-negative");
    if (n_th == 0.0) return 0.0;
    return (n_th + 1.0) * std::log(n_th + 1.0) - n_th * std::log(n_th);
}

GaussianReference gaussian_reference(const DensityOperator& rho) {
    const QuadratureStatistics stats = moments(rho);
    GaussianReference ref;
    ref.mean_q = stats.mean_q;
    ref.mean_p = stats.mean_p;
    ref.cov = stats.cov;
    ref.n_th = thermal_photon_number(stats.cov);
    ref.entropy = gaussian_entropy(ref.n_th);
    return ref;
}

DensityOperator gaussify_fock(const DensityOperator& rho, int dim) {
    if (dim < 2) throw std::invalid_argument("gaussification needs dimension >= 2");
    const QuadratureStatistics stats = moments(rho);

    // Diagonalize the covariance: cov = R(phi) diag(g_hi, g_lo) R(phi)^T with
    // g_hi >= g_lo. The symplectic eigenvalue is nu = sqrt(g_hi g_lo).
    const double a = stats.cov(0, 0);
    const double b = stats.cov(0, 1);
    const double d = stats.cov(1, 1);
    const double phi = 0.5 * std::atan2(2.0 * b, a - d);
    const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
    const double g_hi = 0.5 * (a + d) + half_gap;
    const double g_lo = 0.5 * (a + d) - half_gap;
    if (g_lo <= 0.0) throw std::invalid_argument("covariance matrix is not positive definite");
    const double nu = std::sqrt(g_hi * g_lo);
    const double n_th = std::max(nu - 0.5, 0.0);

    // Start from the thermal diagonal with occupation n_th (renormalized in
    // the truncated space).
    Matrix sigma = Matrix::Zero(dim, dim);
    if (n_th > 0.0) {
        const double ratio = n_th / (n_th + 1.0);
        double w = 1.0;
        double total = 0.0;
        for (int n = 0; n < dim; ++n) {
            sigma(n, n) = w;
            total += w;
            w *= ratio;
        }
        sigma /= total;
    } else {
        sigma(0, 0) = 1.0;
    }

    const Matrix aa = annihilation_operator(dim);

    // Squeeze the axes from nu*I to diag(g_hi, g_lo): exp(s/2 (a^2 - a^dag^2))
    // scales Var(q) by e^{-2s}, so s = ln(g_lo/g_hi)/4.
    const double s = 0.25 * std::log(g_lo / g_hi);
    if (s != 0.0) {
        const Matrix gen = 0.5 * s * (aa * aa - (aa * aa).adjoint());
        const Matrix squeezer = gen.exp();
        sigma = squeezer * sigma * squeezer.adjoint();
    }

    // Rotate the principal axes into place: entries pick up e^{i(m-n)phi}.
    if (phi != 0.0) {
        Vector phases(dim);
        for (int n = 0; n < dim; ++n) phases(n) = std::exp(Complex(0.0, n * phi));
        sigma = phases.asDiagonal() * sigma * phases.conjugate().asDiagonal();
    }

    // Displace to the target means, alpha = (mean_q + i mean_p)/sqrt(2).
    const Complex alpha(stats.mean_q / std::sqrt(2.0), stats.mean_p / std::sqrt(2.0));
    if (alpha != Complex(0.0, 0.0)) {
        const Matrix gen = alpha * aa.adjoint() - std::conj(alpha) * aa;
        const Matrix displacer = gen.exp();
        sigma = displacer * sigma * displacer.adjoint();
    }

    return DensityOperator(std::move(sigma));
}

double non_gaussianity(const DensityOperator& rho) {
    const GaussianReference ref = gaussian_reference(rho);
    const double ng = ref.entropy - von_neumann_entropy(rho);
    return ng < 0.0 ? 0.0 : ng;
}

double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("relative entropy requires equal dimensions");
    }
    const EigenSystem es = eigen_decompose(sigma);

    // Overlaps q_k = <v_k|rho|v_k> of rho with sigma's eigenvectors.
    double result = -von_neumann_entropy(rho);
    double kernel_weight = 0.0;
    for (int k = 0; k < sigma.dim(); ++k) {
        const auto v = es.vectors.col(k);
        const double q = std::max(0.0, (v.adjoint() * rho.matrix() * v).value().real());
        const double s = es.values(k);
        if (s < kSigmaSupportFloor) {
            kernel_weight += q;
        } else {
            result -= q * std::log(s);
        }
    }
    if (kernel_weight > kKernelWeightTol) {
        return std::numeric_limits<double>::infinity();
    }
    return (result < 0.0 && result > -kNegativeClamp) ? 0.0 : result;
}

std::pair<double, double> block_relative_entropy_identity(
    const std::vector<double>& weights1, const std::vector<DensityOperator>& blocks1,
    const std::vector<double>& weights2, const std::vector<DensityOperator>& blocks2) {
    const size_t count = weights1.size();
    if (count == 0 || blocks1.size() != count || weights2.size() != count ||
        blocks2.size() != count) {
        throw std::invalid_argument("block identity needs equal, non-zero block counts");
    }
    int total_dim = 0;
    double sum1 = 0.0;
    double sum2 = 0.0;
    for (size_t j = 0; j < count; ++j) {
        if (blocks1[j].dim() != blocks2[j].dim()) {
            throw std::invalid_argument("paired blocks must have equal dimensions");
        }
        if (weights1[j] < 0.0 || weights2[j] < 0.0) {
            throw std::invalid_argument("weights must be non-negative");
        }
        total_dim += blocks1[j].dim();
        sum1 += weights1[j];
        sum2 += weights2[j];
    }
    if (std::abs(sum1 - 1.0) > 1e-10 || std::abs(sum2 - 1.0) > 1e-10) {
        throw std::invalid_argument("weights must each sum to 1");
    }

    Matrix rho = Matrix::Zero(total_dim, total_dim);
    Matrix sig = Matrix::Zero(total_dim, total_dim);
    int offset = 0;
    for (size_t j = 0; j < count; ++j) {
        const int dj = blocks1[j].dim();
        rho.block(offset, offset, dj, dj) = weights1[j] * blocks1[j].matrix();
        sig.block(offset, offset, dj, dj) = weights2[j] * blocks2[j].matrix();
        offset += dj;
    }
    const double lhs = relative_entropy(DensityOperator(std::move(rho)),
                                        DensityOperator(std::move(sig)));

    // Shannon relative entropy of the weights plus the weighted block terms.
    double rhs = 0.0;
    for (size_t j = 0; j < count; ++j) {
        if (weights1[j] == 0.0) continue;
        if (weights2[j] == 0.0) {
            rhs = std::numeric_limits<double>::infinity();
            break;
        }
        rhs += weights1[j] * std::log(weights1[j] / weights2[j]);
        rhs += weights1[j] * relative_entropy(blocks1[j], blocks2[j]);
    }
    return {lhs, rhs};
}

}  // namespace qng
