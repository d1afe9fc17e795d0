#include "ifsf/fourier.hpp"

#include "ifsf/errors.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace ifsf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxDepth = 100000;

// Direct products stop being meaningful once alpha^k eats the fractional digits.
constexpr double kDirectMaxLog10 = 36.0;

double weighted_digit_norm(const AffineIFS& ifs) {
    double s = 0.0;
    for (int b = 0; b < ifs.size(); ++b) s += ifs.weights()[b] * ifs.digits()[b].norm();
    return s;
}

double log_remainder_bound(double u) {
    if (!(u < 1.0)) return std::numeric_limits<double>::infinity();
    return u / (1.0 - u);
}

// Remainder bound of prod_{n>K} m(lambda^n xi) for a digit line.
double line_remainder(const DigitLine& line, double xi, int K) {
    double kappa = 0.0;
    for (std::size_t b = 0; b < line.digits.size(); ++b) kappa += line.weights[b] * std::abs(line.digits[b]);
    kappa *= kTwoPi;
    const double u = kappa * std::abs(xi) * std::pow(line.lambda, K + 1) / (1.0 - line.lambda);
    return log_remainder_bound(u);
}

void check_line(const DigitLine& line) {
    if (!(line.lambda > 0.0 && line.lambda < 1.0)) throw ValidationError("digit line: lambda must lie in (0, 1)");
    if (line.digits.size() < 2 || line.digits.size() != line.weights.size())
        throw ValidationError("digit line: need at least two digits with matching weights");
}

void check_alpha_line(const DigitLine& line, const PisotContext& ctx) {
    check_line(line);
    if (std::abs(line.lambda * ctx.alpha() - 1.0) > 1e-12)
        throw ValidationError("lambda must equal 1/alpha for the Pisot context");
}

}  // namespace

Complex m_B(const AffineIFS& ifs, const Eigen::VectorXd& x) {
    if (x.size() != ifs.dim()) throw ValidationError("m_B: frequency dimension mismatch");
    Complex s = 0.0;
    for (int b = 0; b < ifs.size(); ++b) s += ifs.weights()[b] * unit_phase(ifs.digits()[b].dot(x));
    return s;
}

namespace {

ProductEvaluation matrix_product(const AffineIFS& ifs, const Eigen::VectorXd& xi, int fixed_depth, double tol,
                                 bool log_factors) {
    if (xi.size() != ifs.dim()) throw ValidationError("mu_hat: frequency dimension mismatch");
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(ifs.A().transpose());
    const double scale = kTwoPi * weighted_digit_norm(ifs) * ifs.inverse_power_sum();

    ProductEvaluation out;
    Eigen::VectorXd v = xi;
    int K = 0;
    for (;;) {
        out.tail_bound = log_remainder_bound(scale * v.norm());
        if (fixed_depth >= 0 ? K >= fixed_depth : out.tail_bound < tol) break;
        if (K >= kMaxDepth) throw NumericError("mu_hat: truncation depth limit reached", {out.tail_bound});
        v = lu.solve(v);
        ++K;
        const Complex f = m_B(ifs, v);
        out.value *= f;
        if (log_factors) out.factors.push_back(f);
    }
    out.depth = K;
    return out;
}

}  // namespace

ProductEvaluation mu_hat(const AffineIFS& ifs, const Eigen::VectorXd& xi, double tol, bool log_factors) {
    if (!(tol > 0.0)) throw ValidationError("mu_hat: tol must be positive");
    return matrix_product(ifs, xi, -1, tol, log_factors);
}

ProductEvaluation mu_hat_at_depth(const AffineIFS& ifs, const Eigen::VectorXd& xi, int depth) {
    if (depth < 0) throw ValidationError("mu_hat_at_depth: depth must be non-negative");
    return matrix_product(ifs, xi, depth, 0.0, false);
}

Complex DigitLine::m(double x) const {
    Complex s = 0.0;
    for (std::size_t b = 0; b < digits.size(); ++b) s += weights[b] * unit_phase(digits[b] * x);
    return s;
}

double DigitLine::real_part(double x) const {
    double s = 0.0;
    for (std::size_t b = 0; b < digits.size(); ++b) s += weights[b] * std::cos(kTwoPi * digits[b] * x);
    return s;
}

bool DigitLine::integer_digits() const {
    return std::all_of(digits.begin(), digits.end(), [](double c) { return c == std::round(c); });
}

double DigitLine::max_abs_digit() const {
    double m = 0.0;
    for (double c : digits) m = std::max(m, std::abs(c));
    return m;
}

double DigitLine::second_moment() const {
    double s = 0.0;
    for (std::size_t b = 0; b < digits.size(); ++b) s += weights[b] * digits[b] * digits[b];
    return s;
}

RayRestriction::RayRestriction(Eigen::VectorXd d, AffineIFS b) : direction(std::move(d)), base(std::move(b)) {
    if (direction.size() != base.dim()) throw ValidationError("ray: direction dimension mismatch");
    if (direction.isZero(0.0)) throw ValidationError("ray: direction must be nonzero");
    if (!base.is_scalar()) throw ValidationError("ray: the base system needs A = lambda^{-1} I");
}

DigitLine RayRestriction::line() const {
    DigitLine l;
    l.lambda = base.scalar_lambda();
    l.weights = base.weights();
    for (const auto& b : base.digits()) l.digits.push_back(b.dot(direction));
    return l;
}

DigitLine bernoulli_line(double lambda) { return {lambda, {0.5, 0.5}, {-1.0, 1.0}}; }

DigitLine simplex_line(int d, double lambda) {
    if (d < 1) throw ValidationError("simplex_line: d must be at least 1");
    DigitLine l;
    l.lambda = lambda;
    l.weights.assign(static_cast<std::size_t>(d) + 1, 1.0 / (d + 1));
    l.digits.assign(static_cast<std::size_t>(d) + 1, 1.0);
    l.digits[0] = 0.0;
    return l;
}

DigitLine direction_line(double lambda, double n1, double n2) {
    if (n1 == 0.0 && n2 == 0.0) throw ValidationError("direction_line: direction must be nonzero");
    return {lambda, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.0, n1, n2}};
}

ProductEvaluation line_product(const DigitLine& line, double xi, double tol, bool log_factors) {
    check_line(line);
    if (!(tol > 0.0)) throw ValidationError("line_product: tol must be positive");
    ProductEvaluation out;
    int K = 0;
    double x = xi;
    for (;;) {
        out.tail_bound = line_remainder(line, xi, K);
        if (out.tail_bound < tol) break;
        if (K >= kMaxDepth) throw NumericError("line_product: truncation depth limit reached", {out.tail_bound});
        x *= line.lambda;
        ++K;
        const Complex f = line.m(x);
        out.value *= f;
        if (log_factors) out.factors.push_back(f);
    }
    out.depth = K;
    return out;
}

ProductEvaluation mu_hat_ray(const RayRestriction& ray, double xi, double tol) {
    return line_product(ray.line(), xi, tol);
}

Complex direct_alpha_power_product(const DigitLine& line, const PisotContext& ctx, long k, int depth) {
    using boost::multiprecision::floor;
    using boost::multiprecision::pow;
    using Wide = boost::multiprecision::cpp_bin_float_100;
    if (k < 0 || depth < 0) throw ValidationError("direct product: k and depth must be non-negative");
    if (static_cast<double>(k) * std::log10(ctx.alpha()) > kDirectMaxLog10)
        throw NumericError("direct product: alpha^k too large for the working precision");

    const Wide alpha(ctx.alpha_high());
    Wide x = pow(alpha, static_cast<int>(k));
    std::vector<Wide> digits;
    for (double c : line.digits) digits.emplace_back(c);

    Complex value = 1.0;
    for (int n = 1; n <= depth; ++n) {
        x /= alpha;
        Complex f = 0.0;
        for (std::size_t b = 0; b < digits.size(); ++b) {
            const Wide y = digits[b] * x;
            f += line.weights[b] * unit_phase(static_cast<double>(y - floor(y)));
        }
        value *= f;
    }
    return value;
}

SplitEvaluation mu_hat_at_alpha_k(const DigitLine& line, const PisotContext& ctx, long k, double tol) {
    check_alpha_line(line, ctx);
    if (!line.integer_digits()) throw ValidationError("split evaluation needs integer projected digits");
    if (k < 0) throw ValidationError("mu_hat_at_alpha_k: k must be non-negative");

    SplitEvaluation out;
    const ProductEvaluation tail = line_product(line, 1.0, tol, true);
    double slack = std::numeric_limits<double>::infinity();
    auto note = [&](double x, Complex f) {
        const double r = line.real_part(x);
        slack = std::min(slack, std::norm(f) - r * r);
    };

    Complex head = 1.0;
    for (long n = 0; n < k; ++n) {
        const double x = ctx.alpha_pow_mod1(n).offset;
        const Complex f = line.m(x);
        note(x, f);
        head *= f;
    }
    double x = 1.0;
    for (const Complex& f : tail.factors) {
        x *= line.lambda;
        note(x, f);
    }

    out.split.value = head * tail.value;
    out.split.depth = static_cast<int>(k) + tail.depth;
    out.split.tail_bound = tail.tail_bound;
    out.min_cosine_slack = slack;
    if (static_cast<double>(k) * std::log10(ctx.alpha()) <= kDirectMaxLog10) {
        out.direct = direct_alpha_power_product(line, ctx, k, out.split.depth);
        out.residual = std::abs(out.direct - out.split.value);
    } else {
        out.direct = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
        out.residual = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

TailFloor cosine_tail_floor(const DigitLine& line, int start) {
    check_line(line);
    if (start < 0) throw ValidationError("cosine_tail_floor: start must be non-negative");
    const double lambda = line.lambda;
    const double s2 = line.second_moment();
    const double c = 2.0 * std::numbers::pi * std::numbers::pi * s2;
    const double eps_cap = std::min(lambda * lambda / 2.0, 0.5);

    TailFloor out;
    out.start = start;
    int N = start;
    while (c * std::pow(lambda, 2.0 * N) >= eps_cap) {
        if (++N > kMaxDepth) throw NumericError("cosine_tail_floor: no admissible N");
    }
    out.N = N;
    for (int n = start; n < N; ++n) {
        const double f = std::abs(line.real_part(std::pow(lambda, n)));
        if (f < 1e-15) throw NumericError("cosine_tail_floor: zero factor at n = " + std::to_string(n), {f});
        out.head *= f;
    }
    // 1 - Re m(x) <= 2 pi^2 s2 x^2 and -log(1 - e) <= 2e for e <= 1/2.
    out.log_bound = 2.0 * c * std::pow(lambda, 2.0 * N) / (1.0 - lambda * lambda);
    out.C = out.head * std::exp(-out.log_bound);
    return out;
}

TailFloor cosine_tail_floor(int d, double lambda, int start) {
    return cosine_tail_floor(simplex_line(d, lambda), start);
}

namespace {

DigitLine folded(const DigitLine& line, double ratio) {
    DigitLine l = line;
    l.lambda = ratio;
    for (double& c : l.digits) c = std::abs(c);
    return l;
}

void attach_certificate(const DigitLine& line, const PisotContext& ctx, ErdosScan& scan) {
    const double cmax = line.max_abs_digit();
    const ThetaScreen screen = [&](double theta) {
        const DigitLine g = folded(line, theta);
        for (int n = 0; n < 200; ++n) {
            if (!(std::abs(g.real_part(std::pow(theta, n))) > 1e-12)) return false;
        }
        return true;
    };
    const GeometricTheta gt = geometric_theta(ctx, screen);
    long N = gt.N;
    while (cmax * std::pow(gt.theta, static_cast<double>(N)) >= 0.25) ++N;

    double head = 1.0;
    for (long n = 0; n < N; ++n) head *= std::abs(line.m(ctx.alpha_pow_mod1(n).offset));

    scan.theta = gt.theta;
    scan.theta_N = gt.N;
    scan.N = N;
    scan.head_constant = head;
    scan.theta_product = cosine_tail_floor(folded(line, gt.theta), static_cast<int>(N)).C;
    scan.tail_floor = cosine_tail_floor(line, 1).C;
    scan.certified_bound = scan.head_constant * scan.theta_product * scan.tail_floor;
    scan.certified = scan.certified_bound > 0.0;
}

}  // namespace

ErdosScan erdos_scan(const DigitLine& line, const PisotContext& ctx, long k_max, double tol) {
    check_alpha_line(line, ctx);
    if (k_max < 0) throw ValidationError("erdos_scan: k_max must be non-negative");
    ErdosScan scan;
    scan.floor = std::numeric_limits<double>::infinity();
    scan.min_cosine_slack = std::numeric_limits<double>::infinity();

    const bool exact = line.integer_digits();
    const ProductEvaluation tail = exact ? ProductEvaluation{} : line_product(line, 1.0, tol);
    for (long k = 0; k <= k_max; ++k) {
        Complex value;
        double residual = std::numeric_limits<double>::quiet_NaN();
        int depth = 0;
        if (exact) {
            const SplitEvaluation e = mu_hat_at_alpha_k(line, ctx, k, tol);
            value = e.split.value;
            residual = e.residual;
            depth = e.split.depth;
            scan.tail_bound = std::max(scan.tail_bound, e.split.tail_bound);
            scan.min_cosine_slack = std::min(scan.min_cosine_slack, e.min_cosine_slack);
            if (!std::isnan(residual)) scan.max_residual = std::max(scan.max_residual, residual);
        } else {
            depth = static_cast<int>(k) + tail.depth;
            value = direct_alpha_power_product(line, ctx, k, depth);
            scan.tail_bound = tail.tail_bound;
        }
        scan.ks.push_back(k);
        scan.values.push_back(value);
        scan.abs_values.push_back(std::abs(value));
        scan.split_residuals.push_back(residual);
        scan.depths.push_back(depth);
        scan.floor = std::min(scan.floor, std::abs(value));
    }
    if (exact) attach_certificate(line, ctx, scan);
    return scan;
}

PisotMatrixScan pisot_matrix_scan(const PisotContext& ctx, double b, double c, long k_max, double tol) {
    if (!(c > 1.0)) throw ValidationError("pisot_matrix_scan: c must exceed 1");
    Eigen::MatrixXd A(2, 2);
    A << ctx.alpha(), 0.0, b, c;
    std::vector<Eigen::VectorXd> digits{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
    PisotMatrixScan out{AffineIFS(A, digits, {1.0 / 3, 1.0 / 3, 1.0 / 3}), {}, 0.0, {}, 0.0};

    // b . [x, 0] picks the first coordinate: digits {0, 1, 0}.
    out.scan = erdos_scan(direction_line(ctx.lambda(), 1.0, 0.0), ctx, k_max, tol);

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A.transpose());
    for (long k = 0; k <= k_max; ++k) {
        Eigen::VectorXd v = Eigen::Vector2d(std::pow(ctx.alpha(), static_cast<double>(k)), 0.0);
        for (long n = 1; n <= k + 5; ++n) {
            v = lu.solve(v);
            const double expect = std::pow(ctx.alpha(), static_cast<double>(k - n));
            const double r = (v - Eigen::Vector2d(expect, 0.0)).norm() / expect;
            out.reduction_residual = std::max(out.reduction_residual, r);
        }
        const Eigen::VectorXd xi = Eigen::Vector2d(std::pow(ctx.alpha(), static_cast<double>(k)), 0.0);
        const double g = std::abs(mu_hat(out.ifs, xi, tol).value - out.scan.values[static_cast<std::size_t>(k)]);
        out.general_residuals.push_back(g);
        out.max_general_residual = std::max(out.max_general_residual, g);
    }
    return out;
}

}  // namespace ifsf
