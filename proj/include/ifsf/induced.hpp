#pragma once

// Fourier transforms of nu_T = mu_T o pi^{-1}, pi(omega) = sum_k omega_k lambda^k,
// through the determinants det(I_n + D_n(lambda t) T_{F_n}).

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "ifsf/detmeasure.hpp"
#include "ifsf/linalg.hpp"

namespace ifsf {

inline constexpr double kLimitTol = 1e-10;
inline constexpr int kLimitMaxOrder = 64;
inline constexpr int kBruteForceMaxOrder = 14;

struct InducedSystem {
    double lambda;
    Kernel kernel;

    InducedSystem(double lambda, Kernel kernel);
};

struct DetTransformResult {
    Complex value{1.0, 0.0};
    int n_used = 0;
    std::vector<std::pair<int, Complex>> trace;
    double stagnation = 0.0;  // |value_n - value_{n-1}| at the last order
    bool converged = false;
};

/// D_n(lambda t) = diag(e(lambda^k t) - 1), k = 1..n.
Eigen::VectorXcd d_diagonal(double lambda, double t, int n);

/// det(I_n + D_n(lambda t) T_{F_n}).
Complex det_n(const InducedSystem& sys, double t, int n);

/// Orders n = 2..n_max until three consecutive |delta| < tol; unconverged
/// results carry converged = false.
DetTransformResult nu_hat_det(const InducedSystem& sys, double t, double tol = kLimitTol,
                              int n_max = kLimitMaxOrder);

/// sum over omega in {0,1}^n of e(t sum_k omega_k lambda^k) det W(omega).
Complex nu_hat_bruteforce(const InducedSystem& sys, double t, int n);

struct AsymptoticComparison {
    Complex value;  // exp(sum_k (e(lambda^k t) - 1) T_kk)
    Complex det;    // det_n at the same order
    double gap = 0.0;
};

AsymptoticComparison nu_hat_trace_asymptotic(const InducedSystem& sys, double t, int n);

struct ToeplitzApprox {
    Complex product;  // prod_{k<=n} (p e(lambda^k t) + 1 - p)
    Complex det;      // det_n for T = p a^{|i-j|}
    double deviation = 0.0;
};

ToeplitzApprox toeplitz_product_approx(double p, double a, double lambda, double t, int n);

/// A_n = [a^{|i-j|}], n x n.
Eigen::MatrixXd a_matrix(double a, int n);
/// det A_n with row and column k (1-based) removed.
double a_minor(double a, int n, int k);
/// (1 - a^2)^{n-1}
double a_det_formula(double a, int n);
/// (1 - a^2)^{n-2} (1 + a^2) for interior k, (1 - a^2)^{n-2} at k = 1 or n.
double a_minor_formula(double a, int n, int k);

struct ExactPn {
    Complex printed;    // 1 + p^{n-1} sum_k T(k^) prod_{j!=k} D_j + p^n (1-a^2)^{n-1} prod D_k
    Complex expansion;  // sum over S of p^{|S|} det(A_S) prod_{k in S} D_k
    Complex det;        // det_n
    double printed_gap = 0.0;
    double expansion_gap = 0.0;
};

ExactPn toeplitz_exact_pn(double p, double a, double lambda, double t, int n);

/// det((D_n + I) T_{F_n} + (I - T_{F_n})).
Complex det_lambda_n(const InducedSystem& sys, double t, int n);
DetTransformResult det_lambda(const InducedSystem& sys, double t, double tol = kLimitTol,
                              int n_max = kLimitMaxOrder);

/// Minimal eigenvalue of the Hermitian matrix [F(t_i - t_j)], F = det_lambda.
double positive_definite_check(const InducedSystem& sys, const std::vector<double>& grid,
                               double tol = kLimitTol);

/// |det_N(T) - det_N(P T P^t)| for a permutation of {1..m} (1-based images),
/// acting as the identity beyond m.
double unitary_invariance_check(const InducedSystem& sys, const std::vector<int>& permutation, double t, int N);

}  // namespace ifsf
