#include "ifsf/induced.hpp"

#include "ifsf/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ifsf {

namespace {

constexpr int kExactPnMaxOrder = 16;

template <typename Step>
DetTransformResult ladder(Step step, double tol, int n_max) {
    if (!(tol > 0.0)) throw ValidationError("limit ladder: tol must be positive");
    if (n_max < 2) throw ValidationError("limit ladder: n_max must be at least 2");
    DetTransformResult out;
    Complex prev = step(1);
    int quiet = 0;
    for (int n = 2; n <= n_max; ++n) {
        const Complex v = step(n);
        out.trace.emplace_back(n, v);
        out.stagnation = std::abs(v - prev);
        out.value = v;
        out.n_used = n;
        prev = v;
        quiet = out.stagnation < tol ? quiet + 1 : 0;
        if (quiet >= 3) {
            out.converged = true;
            break;
        }
    }
    return out;
}

void check_toeplitz_args(double p, double a, double lambda, int n) {
    if (!(p > 0.0 && p < 1.0 && a >= 0.0 && a < 1.0 && lambda > 0.0 && lambda < 1.0))
        throw ValidationError("toeplitz transform: need p, lambda in (0, 1) and a in [0, 1)");
    if (n < 1) throw ValidationError("toeplitz transform: n must be positive");
}

}  // namespace

InducedSystem::InducedSystem(double l, Kernel k) : lambda(l), kernel(std::move(k)) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw ValidationError("induced system: lambda must lie in (0, 1)");
}

Eigen::VectorXcd d_diagonal(double lambda, double t, int n) {
    Eigen::VectorXcd d(n);
    double x = t;
    for (int k = 0; k < n; ++k) {
        x *= lambda;
        d(k) = unit_phase(x) - 1.0;
    }
    return d;
}

Complex det_n(const InducedSystem& sys, double t, int n) {
    if (n < 0) throw ValidationError("det_n: order must be non-negative");
    const Eigen::VectorXcd d = d_diagonal(sys.lambda, t, n);
    MatrixC m = d.asDiagonal() * sys.kernel.leading(n).cast<Complex>();
    m += MatrixC::Identity(n, n);
    return determinant<Complex>(m);
}

DetTransformResult nu_hat_det(const InducedSystem& sys, double t, double tol, int n_max) {
    return ladder([&](int n) { return det_n(sys, t, n); }, tol, n_max);
}

Complex nu_hat_bruteforce(const InducedSystem& sys, double t, int n) {
    if (n < 0 || n > kBruteForceMaxOrder) throw ValidationError("nu_hat_bruteforce: n must lie in [0, 14]");
    CylinderSpec cyl;
    for (int i = 1; i <= n; ++i) cyl.F.push_back(i);
    cyl.xi.assign(static_cast<std::size_t>(n), 0);
    std::vector<double> powers(static_cast<std::size_t>(n));
    double x = 1.0;
    for (int k = 0; k < n; ++k) powers[k] = (x *= sys.lambda);

    Complex sum = 0.0;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        double point = 0.0;
        for (int k = 0; k < n; ++k) {
            cyl.xi[k] = static_cast<int>((mask >> k) & 1U);
            if (cyl.xi[k]) point += powers[k];
        }
        sum += unit_phase(t * point) * determinant<double>(w_matrix(sys.kernel, cyl, true));
    }
    return sum;
}

AsymptoticComparison nu_hat_trace_asymptotic(const InducedSystem& sys, double t, int n) {
    const Eigen::VectorXcd d = d_diagonal(sys.lambda, t, n);
    Complex s = 0.0;
    for (int k = 0; k < n; ++k) s += d(k) * sys.kernel.entry(k + 1, k + 1);
    AsymptoticComparison out;
    out.value = std::exp(s);
    out.det = det_n(sys, t, n);
    out.gap = std::abs(out.value - out.det);
    return out;
}

ToeplitzApprox toeplitz_product_approx(double p, double a, double lambda, double t, int n) {
    check_toeplitz_args(p, a, lambda, n);
    const InducedSystem sys(lambda, Kernel::toeplitz_general(p, a));
    ToeplitzApprox out;
    out.product = 1.0;
    double x = t;
    for (int k = 0; k < n; ++k) {
        x *= lambda;
        out.product *= p * unit_phase(x) + (1.0 - p);
    }
    out.det = det_n(sys, t, n);
    out.deviation = std::abs(out.det - out.product);
    return out;
}

Eigen::MatrixXd a_matrix(double a, int n) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = std::pow(a, std::abs(i - j));
    return m;
}

double a_minor(double a, int n, int k) {
    if (k < 1 || k > n) throw ValidationError("a_minor: k must lie in [1, n]");
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (i != k - 1) keep.push_back(i);
    const Eigen::MatrixXd full = a_matrix(a, n);
    return determinant<double>(full(keep, keep));
}

double a_det_formula(double a, int n) { return std::pow(1.0 - a * a, n - 1); }

double a_minor_formula(double a, int n, int k) {
    if (k < 1 || k > n) throw ValidationError("a_minor_formula: k must lie in [1, n]");
    if (n == 1) return 1.0;
    const double base = std::pow(1.0 - a * a, n - 2);
    return (k == 1 || k == n) ? base : base * (1.0 + a * a);
}

ExactPn toeplitz_exact_pn(double p, double a, double lambda, double t, int n) {
    check_toeplitz_args(p, a, lambda, n);
    if (n > kExactPnMaxOrder) throw ValidationError("toeplitz_exact_pn: n must be at most 16");
    const Eigen::VectorXcd d = d_diagonal(lambda, t, n);
    const Eigen::MatrixXd A = a_matrix(a, n);

    ExactPn out;
    Complex all = 1.0;
    for (int k = 0; k < n; ++k) all *= d(k);
    Complex middle = 0.0;
    for (int k = 1; k <= n; ++k) {
        Complex others = 1.0;
        for (int j = 0; j < n; ++j)
            if (j != k - 1) others *= d(j);
        middle += a_minor(a, n, k) * others;
    }
    out.printed = 1.0 + std::pow(p, n - 1) * middle + std::pow(p, n) * a_det_formula(a, n) * all;

    out.expansion = 0.0;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        std::vector<int> S;
        Complex prod = 1.0;
        for (int k = 0; k < n; ++k) {
            if ((mask >> k) & 1U) {
                S.push_back(k);
                prod *= d(k);
            }
        }
        const double minor = S.empty() ? 1.0 : determinant<double>(A(S, S));
        out.expansion += std::pow(p, static_cast<double>(S.size())) * minor * prod;
    }

    out.det = det_n(InducedSystem(lambda, Kernel::toeplitz_general(p, a)), t, n);
    out.printed_gap = std::abs(out.printed - out.det);
    out.expansion_gap = std::abs(out.expansion - out.det);
    return out;
}

Complex det_lambda_n(const InducedSystem& sys, double t, int n) {
    if (n < 0) throw ValidationError("det_lambda_n: order must be non-negative");
    const Eigen::VectorXcd d = d_diagonal(sys.lambda, t, n);
    const MatrixC T = sys.kernel.leading(n).cast<Complex>();
    const MatrixC I = MatrixC::Identity(n, n);
    const MatrixC m = (MatrixC(d.asDiagonal()) + I) * T + (I - T);
    return determinant<Complex>(m);
}

DetTransformResult det_lambda(const InducedSystem& sys, double t, double tol, int n_max) {
    if (t == 0.0) {
        DetTransformResult out;
        out.value = 1.0;
        out.n_used = 2;
        out.trace = {{2, Complex(1.0)}};
        out.converged = true;
        return out;
    }
    return ladder([&](int n) { return det_lambda_n(sys, t, n); }, tol, n_max);
}

double positive_definite_check(const InducedSystem& sys, const std::vector<double>& grid, double tol) {
    const auto m = static_cast<Eigen::Index>(grid.size());
    if (m < 1 || m > 64) throw ValidationError("positive_definite_check: grid size must lie in [1, 64]");
    MatrixC G(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        G(i, i) = det_lambda(sys, 0.0, tol).value;
        for (Eigen::Index j = i + 1; j < m; ++j) {
            const DetTransformResult r = det_lambda(sys, grid[i] - grid[j], tol);
            if (!r.converged) throw NumericError("positive_definite_check: det_lambda did not converge", {r.stagnation});
            G(i, j) = r.value;
            G(j, i) = std::conj(r.value);
        }
    }
    const Eigen::SelfAdjointEigenSolver<MatrixC> es(G, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double unitary_invariance_check(const InducedSystem& sys, const std::vector<int>& permutation, double t, int N) {
    const int m = static_cast<int>(permutation.size());
    std::vector<int> seen(static_cast<std::size_t>(m), 0);
    for (int v : permutation) {
        if (v < 1 || v > m || seen[v - 1]++) throw ValidationError("unitary_invariance_check: not a permutation");
    }
    if (N < m) throw ValidationError("unitary_invariance_check: order must cover the permuted indices");

    const Eigen::MatrixXd T = sys.kernel.leading(N);
    std::vector<int> index(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) index[i] = i < m ? permutation[i] - 1 : i;
    const Eigen::MatrixXd P = T(index, index);

    const Eigen::VectorXcd d = d_diagonal(sys.lambda, t, N);
    const MatrixC I = MatrixC::Identity(N, N);
    const Complex base = determinant<Complex>(I + d.asDiagonal() * T.cast<Complex>());
    const Complex moved = determinant<Complex>(I + d.asDiagonal() * P.cast<Complex>());
    return std::abs(base - moved);
}

}  // namespace ifsf
