#pragma once

#include <array>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace ldstat {

using Matrix2 = std::array<std::array<double, 2>, 2>;
using Vector2 = std::array<double, 2>;

enum class Method { ML, MLWinsor, GF, P0 };

std::string_view method_name(Method m);

/// Point estimates of (alpha, rho) with their covariance. Index 0 is alpha,
/// index 1 is rho. P0 results carry no rho estimate (has_rho == false).
struct EstimateResult {
    double alpha_hat = std::numeric_limits<double>::quiet_NaN();
    double rho_hat = std::numeric_limits<double>::quiet_NaN();
    bool has_rho = true;
    Matrix2 cov{};
    Method method = Method::GF;
    int iterations = 0;
    bool converged = false;
    std::vector<std::string> warnings;
    /// Reason for failure when !converged.
    std::string message;
};

bool is_symmetric(const Matrix2& m);
/// Both eigenvalues >= -tol * max|m_ij|.
bool is_positive_semidefinite(const Matrix2& m, double tol = 1e-12);
/// Throws DomainError when singular.
Matrix2 inverse(const Matrix2& m);
/// Eigenvalues ascending with unit eigenvectors (columns) of a symmetric matrix.
struct SymmetricEigen {
    Vector2 values;
    Matrix2 vectors;
};
SymmetricEigen symmetric_eigen(const Matrix2& m);

}  // namespace ldstat
