#pragma once

// Algebraic integers: monic integer polynomials, Pisot certification,
// exact power-sum traces and fractional parts of alpha^k.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ifsf {

using BigInt = boost::multiprecision::cpp_int;
using HighFloat = boost::multiprecision::cpp_bin_float_50;

/// Monic polynomial with integer coefficients, stored in descending order:
/// coeffs[0] = 1 is the leading coefficient, coeffs.back() the constant term.
class IntPolynomial {
public:
    explicit IntPolynomial(std::vector<BigInt> descending);

    /// Parses "x^3 - x - 1" or the coefficient list "[1,0,-1,-1]".
    static IntPolynomial parse(std::string_view text);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<BigInt>& coeffs() const { return coeffs_; }
    /// a_i in p(x) = x^n + a_1 x^{n-1} + ... + a_n.
    const BigInt& a(int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }

    double max_abs_coeff() const;
    std::complex<double> eval(std::complex<double> z) const;
    std::complex<double> eval_derivative(std::complex<double> z) const;

    std::string to_string() const;
    std::string to_list_string() const;

private:
    std::vector<BigInt> coeffs_;
};

struct RootSet {
    std::vector<std::complex<double>> roots;
    std::vector<double> residuals;  // |p(root)| after refinement
    int dominant = -1;              // index of the dominant real root, -1 if none
};

/// All n complex roots: companion-matrix eigenvalues followed by simultaneous
/// (Weierstrass) refinement. Throws NumericError carrying the residuals if
/// some |p(root)| stays above 1e-10 (1 + max|coeff|).
RootSet roots(const IntPolynomial& p);

struct Mod1Value {
    double value = 0.0;   // dist(alpha^k, Z), in [0, 0.5]
    double offset = 0.0;  // alpha^k - s_k, in (-0.5, 0.5)
    long k = 0;
};

inline constexpr double kPisotMargin = 1e-8;

class PisotContext {
public:
    PisotContext(IntPolynomial minpoly, double alpha, std::vector<std::complex<double>> conjugates);

    const IntPolynomial& minpoly() const { return minpoly_; }
    int degree() const { return minpoly_.degree(); }
    double alpha() const { return alpha_; }
    double lambda() const { return 1.0 / alpha_; }
    const std::vector<std::complex<double>>& conjugates() const { return conjugates_; }
    /// max_{i>=2} |alpha_i|; 0 for a rational integer alpha.
    double conjugate_max() const { return conjugate_max_; }
    /// alpha refined to ~50 significant digits by Newton steps on the minimal polynomial.
    const HighFloat& alpha_high() const { return alpha_high_; }

    /// s_k = sum_i alpha_i^k, from the integer recurrence. Thread-safe.
    BigInt trace(long k) const;

    /// dist(alpha^k, Z) through the conjugate sum, never through pow(alpha, k).
    Mod1Value alpha_pow_mod1(long k) const;

private:
    struct TraceCache {
        std::mutex mutex;
        std::vector<BigInt> values;
    };

    IntPolynomial minpoly_;
    double alpha_;
    std::vector<std::complex<double>> conjugates_;
    double conjugate_max_ = 0.0;
    HighFloat alpha_high_;
    std::shared_ptr<TraceCache> cache_;
};

enum class PisotVerdict { certified, not_expansive, conjugate_outside, indeterminate };

std::string to_string(PisotVerdict v);

struct PisotCertification {
    PisotVerdict verdict = PisotVerdict::indeterminate;
    std::string reason;
    RootSet roots;
    std::optional<PisotContext> context;

    bool certified() const { return verdict == PisotVerdict::certified; }
};

/// Certifies alpha > 1 with every other root strictly inside the circle of
/// radius 1 - kPisotMargin. Moduli within the margin of 1 give "indeterminate".
PisotCertification certify_pisot(const IntPolynomial& p);

/// Convenience: certify or throw ValidationError with the rejection reason.
PisotContext require_pisot(const IntPolynomial& p);

struct GeometricTheta {
    double theta = 0.0;
    long N = 0;
    int grid_index = 0;  // j in conjugate_max + j (1 - conjugate_max) / 32
};

/// Extra admissibility test on theta, e.g. positivity of a cosine product.
using ThetaScreen = std::function<bool(double)>;

/// Smallest N with (n-1) cm^N < theta^N < 1/4 for the given theta, checked
/// against alpha_pow_mod1 for k <= N + 20. Throws ValidationError when
/// theta <= conjugate_max or theta >= 1.
GeometricTheta geometric_theta(const PisotContext& ctx, double theta);

/// Smallest grid value conjugate_max + j (1 - conjugate_max) / 32 (j = 1..31)
/// that passes `screen`, with its N.
GeometricTheta geometric_theta(const PisotContext& ctx, const ThetaScreen& screen = {});

}  // namespace ifsf
