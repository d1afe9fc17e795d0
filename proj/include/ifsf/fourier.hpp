#pragma once

// Fourier transforms of IFS measures as truncated infinite products, and
// scans of |mu_hat(alpha^k)| along Pisot geometric sequences.

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "ifsf/algebraic.hpp"
#include "ifsf/ifs.hpp"
#include "ifsf/linalg.hpp"

namespace ifsf {

inline constexpr double kDefaultProductTol = 1e-12;

struct ProductEvaluation {
    Complex value{1.0, 0.0};
    int depth = 0;            // factors k = 1..depth were multiplied
    double tail_bound = 0.0;  // bound on |log of the omitted remainder|
    std::vector<Complex> factors;  // filled only on request
};

/// m_B(x) = sum_b p_b e(b . x)
Complex m_B(const AffineIFS& ifs, const Eigen::VectorXd& x);

/// prod_{k>=1} m_B((A^t)^{-k} xi), truncated once the remainder's log bound
/// 2 pi max|b| sum_{j>K} ||(A^t)^{-j} xi|| / (1 - u) drops below tol.
ProductEvaluation mu_hat(const AffineIFS& ifs, const Eigen::VectorXd& xi, double tol = kDefaultProductTol,
                         bool log_factors = false);

/// Same product with exactly `depth` factors; tail_bound still reported.
ProductEvaluation mu_hat_at_depth(const AffineIFS& ifs, const Eigen::VectorXd& xi, int depth);

/// A scalar system seen along one direction: m(x) = sum_b p_b e(c_b x) with
/// c_b = b . W. All products over lambda^n x are products of m.
struct DigitLine {
    double lambda = 0.5;
    std::vector<double> weights;
    std::vector<double> digits;

    Complex m(double x) const;
    /// sum_b p_b cos(2 pi c_b x)
    double real_part(double x) const;
    bool integer_digits() const;
    double max_abs_digit() const;
    /// sum_b p_b c_b^2
    double second_moment() const;
};

struct RayRestriction {
    Eigen::VectorXd direction;
    AffineIFS base;

    RayRestriction(Eigen::VectorXd direction, AffineIFS base);
    DigitLine line() const;
};

/// B = {-1, 1}, p = (1/2, 1/2): m(x) = cos(2 pi x).
DigitLine bernoulli_line(double lambda);
/// Simplex system in R^d along [1, ..., 1]: m(x) = (1 + d e(x)) / (d + 1).
DigitLine simplex_line(int d, double lambda);
/// Planar simplex system along [n1, n2]: m(x) = (1 + e(n1 x) + e(n2 x)) / 3.
DigitLine direction_line(double lambda, double n1, double n2);

/// prod_{n>=1} m(lambda^n xi) with the same truncation rule as mu_hat.
ProductEvaluation line_product(const DigitLine& line, double xi, double tol = kDefaultProductTol,
                               bool log_factors = false);

ProductEvaluation mu_hat_ray(const RayRestriction& ray, double xi, double tol = kDefaultProductTol);

/// prod_{n=1}^{depth} m(lambda^n alpha^k) with alpha^k formed and reduced mod 1
/// in 50-digit floating point. Independent of the trace recurrence.
Complex direct_alpha_power_product(const DigitLine& line, const PisotContext& ctx, long k, int depth);

struct SplitEvaluation {
    ProductEvaluation split;   // head over alpha^n times the k-independent tail
    Complex direct{0.0, 0.0};  // direct_alpha_power_product
    double residual = 0.0;     // |split - direct|
    double min_cosine_slack = 0.0;  // min over factors of |f|^2 - (Re f)^2
};

/// mu_hat(alpha^k) = prod_{n=0}^{k-1} m(alpha^n) * prod_{n>=1} m(lambda^n), the
/// head factors taken from the exact-trace fractional parts of alpha^n.
/// Requires integer projected digits and lambda = 1/alpha.
SplitEvaluation mu_hat_at_alpha_k(const DigitLine& line, const PisotContext& ctx, long k,
                                  double tol = kDefaultProductTol);

struct TailFloor {
    double C = 0.0;          // certified lower bound on prod_{n>=start} |Re m(lambda^n)|
    int start = 1;
    int N = 1;               // Taylor bound used from N on
    double head = 1.0;       // prod_{n=start}^{N-1} |Re m(lambda^n)|, evaluated directly
    double log_bound = 0.0;  // bound on -log prod_{n>=N} Re m(lambda^n)
};

/// Floor for prod_{n>=start} |sum_b p_b cos(2 pi c_b lambda^n)|. Throws
/// NumericError naming the index if a head factor vanishes.
TailFloor cosine_tail_floor(const DigitLine& line, int start = 1);
/// The (1 + d cos(2 pi lambda^n)) / (d + 1) form.
TailFloor cosine_tail_floor(int d, double lambda, int start = 1);

struct ErdosScan {
    std::vector<long> ks;
    std::vector<Complex> values;
    std::vector<double> abs_values;
    std::vector<double> split_residuals;
    std::vector<int> depths;
    double tail_bound = 0.0;
    double floor = 0.0;
    double max_residual = 0.0;
    double min_cosine_slack = 0.0;

    // Assembled lower bound head * theta_product * tail_floor (certified scans only).
    bool certified = false;
    double theta = 0.0;
    long theta_N = 0;
    long N = 0;  // first index of the theta comparison
    double head_constant = 0.0;
    double theta_product = 0.0;
    double tail_floor = 0.0;
    double certified_bound = 0.0;
};

/// |mu_hat(alpha^k)| for k = 0..k_max. Integer digit lines use the split
/// evaluator and carry a certified bound; other lines are an experimental scan
/// evaluated directly, without a certificate.
ErdosScan erdos_scan(const DigitLine& line, const PisotContext& ctx, long k_max, double tol = kDefaultProductTol);

struct PisotMatrixScan {
    AffineIFS ifs;
    ErdosScan scan;
    double reduction_residual = 0.0;  // max |(A^t)^{-n} alpha^k e_1 - alpha^{k-n} e_1| / alpha^{k-n}
    std::vector<double> general_residuals;  // |mu_hat(A, alpha^k e_1) - scan value|
    double max_general_residual = 0.0;
};

/// A = [[alpha, 0], [b, c]], B = {0, e_1, e_2}, uniform weights, along alpha^k [1, 0]^t.
PisotMatrixScan pisot_matrix_scan(const PisotContext& ctx, double b, double c, long k_max,
                                  double tol = kDefaultProductTol);

}  // namespace ifsf
