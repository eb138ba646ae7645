#include "ldstat/estimate.hpp"

#include "ldstat/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ldstat {

std::string_view method_name(Method m) {
    switch (m) {
        case Method::ML: return "ML";
        case Method::MLWinsor: return "ML_WINSOR";
        case Method::GF: return "GF";
        case Method::P0: return "P0";
    }
    return "?";
}

bool is_symmetric(const Matrix2& m) { return m[0][1] == m[1][0]; }

bool is_positive_semidefinite(const Matrix2& m, double tol) {
    if (!std::isfinite(m[0][0]) || !std::isfinite(m[0][1]) || !std::isfinite(m[1][0]) ||
        !std::isfinite(m[1][1]))
        return false;
    const double scale = std::max({std::fabs(m[0][0]), std::fabs(m[0][1]), std::fabs(m[1][1])});
    return symmetric_eigen(m).values[0] >= -tol * scale;
}

Matrix2 inverse(const Matrix2& m) {
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (det == 0.0 || !std::isfinite(det)) throw DomainError("singular 2x2 matrix");
    return {{{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
}

SymmetricEigen symmetric_eigen(const Matrix2& m) {
    const double a = m[0][0], b = 0.5 * (m[0][1] + m[1][0]), d = m[1][1];
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), b);
    SymmetricEigen e;
    e.values = {mean - radius, mean + radius};
    if (b == 0.0) {
        // Already diagonal; order columns by eigenvalue.
        if (a <= d)
            e.vectors = {{{1.0, 0.0}, {0.0, 1.0}}};
        else
            e.vectors = {{{0.0, 1.0}, {1.0, 0.0}}};
        return e;
    }
    for (int j = 0; j < 2; ++j) {
        // (m - lambda I) v = 0  =>  v = (b, lambda - a).
        double vx = b, vy = e.values[j] - a;
        const double norm = std::hypot(vx, vy);
        e.vectors[0][j] = vx / norm;
        e.vectors[1][j] = vy / norm;
    }
    return e;
}

}  // namespace ldstat
