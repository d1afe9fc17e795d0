#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

namespace ifsf {

using Complex = std::complex<double>;
using MatrixC = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

/// e(x) = exp(i 2 pi x)
inline Complex unit_phase(double x) {
    const double angle = 2.0 * std::numbers::pi * x;
    return {std::cos(angle), std::sin(angle)};
}

// Gaussian elimination with partial pivoting. The matrix is taken by value
// and reduced in place. Row operations with a zero multiplier are skipped,
// so a diagonal matrix yields exactly the ordered product of its diagonal.
template <typename Scalar>
Scalar determinant(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m) {
    const Eigen::Index n = m.rows();
    Scalar det = Scalar(1);
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index pivot = col;
        double best = std::abs(m(col, col));
        for (Eigen::Index r = col + 1; r < n; ++r) {
            if (std::abs(m(r, col)) > best) {
                best = std::abs(m(r, col));
                pivot = r;
            }
        }
        if (best == 0.0) return Scalar(0);
        if (pivot != col) {
            m.row(pivot).swap(m.row(col));
            det = -det;
        }
        const Scalar diag = m(col, col);
        det *= diag;
        for (Eigen::Index r = col + 1; r < n; ++r) {
            if (m(r, col) == Scalar(0)) continue;
            const Scalar factor = m(r, col) / diag;
            m.row(r).tail(n - col - 1) -= factor * m.row(col).tail(n - col - 1);
        }
    }
    return det;
}

}  // namespace ifsf
