#include "ifsf/algebraic.hpp"

#include "ifsf/errors.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace ifsf {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

BigInt parse_bigint(const std::string& digits) {
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw ValidationError("polynomial: bad integer '" + digits + "'");
    return BigInt(digits);
}

// Parses sums of terms  [+|-] [integer] [*] [x [^ integer]].
std::vector<BigInt> parse_expression(const std::string& text) {
    std::map<int, BigInt> terms;
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ValidationError("polynomial: empty expression");

    std::size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (i != 0) {
            throw ValidationError("polynomial: expected '+' or '-' at position " + std::to_string(i));
        }
        std::string digits;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits.push_back(s[i++]);
        BigInt coeff = digits.empty() ? BigInt(1) : parse_bigint(digits);
        int exponent = 0;
        if (i < s.size() && s[i] == '*') {
            if (digits.empty()) throw ValidationError("polynomial: dangling '*'");
            ++i;
            if (i >= s.size() || s[i] != 'x') throw ValidationError("polynomial: expected 'x' after '*'");
        }
        if (i < s.size() && s[i] == 'x') {
            ++i;
            exponent = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::string exp_digits;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) exp_digits.push_back(s[i++]);
                if (exp_digits.empty() || exp_digits.size() > 4) throw ValidationError("polynomial: bad exponent");
                exponent = std::stoi(exp_digits);
            }
        } else if (digits.empty()) {
            throw ValidationError("polynomial: unexpected character at position " + std::to_string(i));
        }
        terms[exponent] += sign * coeff;
    }

    int degree = -1;
    for (const auto& [e, c] : terms)
        if (c != 0) degree = std::max(degree, e);
    if (degree < 1) throw ValidationError("polynomial: degree must be at least 1");
    std::vector<BigInt> desc(static_cast<std::size_t>(degree) + 1, BigInt(0));
    for (const auto& [e, c] : terms) desc[static_cast<std::size_t>(degree - e)] += c;
    return desc;
}

std::vector<BigInt> parse_list(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("polynomial: malformed coefficient list: ") + e.what());
    }
    if (!j.is_array()) throw ValidationError("polynomial: coefficient list must be an array");
    std::vector<BigInt> desc;
    for (const auto& c : j) {
        if (c.is_number_integer()) {
            desc.emplace_back(c.get<std::int64_t>());
        } else if (c.is_string()) {
            std::string s = c.get<std::string>();
            bool neg = !s.empty() && s[0] == '-';
            BigInt v = parse_bigint(neg ? s.substr(1) : s);
            desc.push_back(neg ? BigInt(-v) : v);
        } else {
            throw ValidationError("polynomial: coefficients must be integers");
        }
    }
    return desc;
}

double to_double(const BigInt& v) { return v.convert_to<double>(); }

}  // namespace

IntPolynomial::IntPolynomial(std::vector<BigInt> descending) : coeffs_(std::move(descending)) {
    if (coeffs_.size() < 2) throw ValidationError("polynomial: degree must be at least 1");
    if (coeffs_.front() != 1) throw ValidationError("polynomial: must be monic (leading coefficient 1)");
}

IntPolynomial IntPolynomial::parse(std::string_view text) {
    const std::string t = trim(text);
    if (!t.empty() && t.front() == '[') return IntPolynomial(parse_list(t));
    return IntPolynomial(parse_expression(t));
}

double IntPolynomial::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(to_double(c)));
    return m;
}

std::complex<double> IntPolynomial::eval(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    for (const auto& c : coeffs_) acc = acc * z + to_double(c);
    return acc;
}

std::complex<double> IntPolynomial::eval_derivative(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    const int n = degree();
    for (int i = 0; i < n; ++i) acc = acc * z + to_double(coeffs_[static_cast<std::size_t>(i)]) * static_cast<double>(n - i);
    return acc;
}

std::string IntPolynomial::to_string() const {
    std::ostringstream out;
    const int n = degree();
    bool first = true;
    for (int i = 0; i <= n; ++i) {
        const BigInt& c = coeffs_[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        const int e = n - i;
        BigInt mag = c < 0 ? BigInt(-c) : c;
        if (first) {
            if (c < 0) out << "-";
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        if (mag != 1 || e == 0) out << mag;
        if (e >= 1) out << "x";
        if (e >= 2) out << "^" << e;
        first = false;
    }
    return out.str();
}

std::string IntPolynomial::to_list_string() const {
    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out << (i ? "," : "") << coeffs_[i];
    out << "]";
    return out.str();
}

RootSet roots(const IntPolynomial& p) {
    using C = std::complex<double>;
    const int n = p.degree();
    const double tol = 1e-10 * (1.0 + p.max_abs_coeff());
    std::vector<C> z(static_cast<std::size_t>(n));

    if (n == 1) {
        z[0] = -to_double(p.a(1));
    } else {
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
        for (int j = 0; j < n; ++j) companion(0, j) = -to_double(p.a(j + 1));
        for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
        Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
        if (solver.info() != Eigen::Success) throw NumericError("roots: companion eigen-solve failed");
        for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);

        // Weierstrass (Durand-Kerner) sweeps, then Newton polish per root.
        for (int sweep = 0; sweep < 60; ++sweep) {
            double worst = 0.0;
            for (int i = 0; i < n; ++i) {
                C denom = 1.0;
                for (int j = 0; j < n; ++j)
                    if (j != i) denom *= z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
                if (std::abs(denom) == 0.0) continue;
                const C step = p.eval(z[static_cast<std::size_t>(i)]) / denom;
                z[static_cast<std::size_t>(i)] -= step;
                worst = std::max(worst, std::abs(step));
            }
            if (worst < 1e-17) break;
        }
        for (auto& root : z) {
            for (int it = 0; it < 4; ++it) {
                const C d = p.eval_derivative(root);
                if (std::abs(d) == 0.0) break;
                const C next = root - p.eval(root) / d;
                if (std::abs(p.eval(next)) <= std::abs(p.eval(root))) root = next;
                else break;
            }
        }
    }

    RootSet out;
    out.roots = z;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
        auto& r = out.roots[static_cast<std::size_t>(i)];
        if (std::abs(r.imag()) <= 1e-12 * (1.0 + std::abs(r))) r = {r.real(), 0.0};
        out.residuals.push_back(std::abs(p.eval(r)));
        if (std::abs(r) > best) {
            best = std::abs(r);
            out.dominant = i;
        }
    }
    if (out.dominant >= 0 && out.roots[static_cast<std::size_t>(out.dominant)].imag() != 0.0) out.dominant = -1;
    const double worst = *std::max_element(out.residuals.begin(), out.residuals.end());
    if (!(worst <= tol)) throw NumericError("roots: refinement did not converge", out.residuals);
    return out;
}

PisotContext::PisotContext(IntPolynomial minpoly, double alpha, std::vector<std::complex<double>> conjugates)
    : minpoly_(std::move(minpoly)), alpha_(alpha), conjugates_(std::move(conjugates)), cache_(std::make_shared<TraceCache>()) {
    if (static_cast<int>(conjugates_.size()) != minpoly_.degree() - 1)
        throw ValidationError("PisotContext: need exactly degree - 1 conjugates");
    for (const auto& c : conjugates_) conjugate_max_ = std::max(conjugate_max_, std::abs(c));

    // Newton refinement of alpha in 50-digit arithmetic.
    HighFloat x = alpha_;
    for (int it = 0; it < 10; ++it) {
        HighFloat f = 0, df = 0;
        for (const auto& c : minpoly_.coeffs()) {
            df = df * x + f;
            f = f * x + HighFloat(c);
        }
        if (df == 0) break;
        x -= f / df;
    }
    alpha_high_ = x;
}

BigInt PisotContext::trace(long k) const {
    if (k < 0) throw ValidationError("trace: k must be non-negative");
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto& s = cache_->values;
    const int n = degree();
    if (s.empty()) s.emplace_back(n);
    while (static_cast<long>(s.size()) <= k) {
        const long j = static_cast<long>(s.size());
        BigInt next = 0;
        if (j <= n) {
            // Newton: s_j = -(a_1 s_{j-1} + ... + a_{j-1} s_1) - j a_j
            for (long i = 1; i < j; ++i) next -= minpoly_.a(static_cast<int>(i)) * s[static_cast<std::size_t>(j - i)];
            next -= BigInt(j) * minpoly_.a(static_cast<int>(j));
        } else {
            for (long i = 1; i <= n; ++i) next -= minpoly_.a(static_cast<int>(i)) * s[static_cast<std::size_t>(j - i)];
        }
        s.push_back(std::move(next));
    }
    return s[static_cast<std::size_t>(k)];
}

Mod1Value PisotContext::alpha_pow_mod1(long k) const {
    if (k < 0) throw ValidationError("alpha_pow_mod1: k must be non-negative");
    const double kd = static_cast<double>(k);
    double conj_sum = 0.0;
    for (const auto& c : conjugates_) {
        if (c.imag() == 0.0) {
            conj_sum += std::pow(c.real(), kd);
        } else {
            conj_sum += std::pow(std::abs(c), kd) * std::cos(kd * std::arg(c));
        }
    }
    double offset = -conj_sum;  // alpha^k - s_k
    offset -= std::round(offset);
    if (offset <= -0.5) offset += 1.0;
    return {std::abs(offset), offset, k};
}

std::string to_string(PisotVerdict v) {
    switch (v) {
        case PisotVerdict::certified: return "certified";
        case PisotVerdict::not_expansive: return "not_expansive";
        case PisotVerdict::conjugate_outside: return "conjugate_outside";
        case PisotVerdict::indeterminate: return "indeterminate";
    }
    return "unknown";
}

PisotCertification certify_pisot(const IntPolynomial& p) {
    PisotCertification out;
    out.roots = roots(p);
    const auto& rs = out.roots.roots;

    // Dominant root: among the roots of maximal modulus prefer a positive real
    // one, so the verdict does not depend on the order roots come back in.
    double max_mod = 0.0;
    for (const auto& r : rs) max_mod = std::max(max_mod, std::abs(r));
    std::size_t top_index = 0;
    bool have_positive = false;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (std::abs(rs[i]) < max_mod * (1.0 - 1e-12)) continue;
        const bool positive = rs[i].imag() == 0.0 && rs[i].real() > 0.0;
        if (positive && !have_positive) {
            top_index = i;
            have_positive = true;
        } else if (!have_positive && std::abs(rs[i]) >= std::abs(rs[top_index])) {
            top_index = i;
        }
    }
    const auto top = rs[top_index];

    if (top.imag() != 0.0 || top.real() <= 0.0) {
        out.verdict = PisotVerdict::not_expansive;
        out.reason = "dominant root is not a positive real number";
        return out;
    }
    if (top.real() <= 1.0 + kPisotMargin) {
        out.verdict = top.real() >= 1.0 - kPisotMargin ? PisotVerdict::indeterminate : PisotVerdict::not_expansive;
        out.reason = "dominant root " + std::to_string(top.real()) + " is not > 1 with margin";
        return out;
    }

    std::vector<std::complex<double>> conj;
    double cm = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (i == top_index) continue;
        conj.push_back(rs[i]);
        cm = std::max(cm, std::abs(rs[i]));
    }
    if (cm >= 1.0 + kPisotMargin) {
        out.verdict = PisotVerdict::conjugate_outside;
        out.reason = "a conjugate has modulus " + std::to_string(cm) + " > 1";
        return out;
    }
    if (cm >= 1.0 - kPisotMargin) {
        out.verdict = PisotVerdict::indeterminate;
        out.reason = "a conjugate lies within the margin of the unit circle";
        return out;
    }
    out.verdict = PisotVerdict::certified;
    out.reason = "dominant root > 1, all conjugates strictly inside the unit disk";
    out.context.emplace(p, top.real(), std::move(conj));
    return out;
}

PisotContext require_pisot(const IntPolynomial& p) {
    auto cert = certify_pisot(p);
    if (!cert.certified()) throw ValidationError("not a certified Pisot number (" + to_string(cert.verdict) + "): " + cert.reason);
    return *cert.context;
}

GeometricTheta geometric_theta(const PisotContext& ctx, double theta) {
    const double cm = ctx.conjugate_max();
    if (!(theta > cm) || !(theta < 1.0))
        throw ValidationError("geometric_theta: need conjugate_max < theta < 1");
    const double conj_count = static_cast<double>(ctx.degree() - 1);

    long N = 1;
    while (!(conj_count * std::pow(cm, static_cast<double>(N)) < std::pow(theta, static_cast<double>(N)) &&
             std::pow(theta, static_cast<double>(N)) < 0.25)) {
        ++N;
        if (N > 100000) throw NumericError("geometric_theta: no admissible N found");
    }
    for (long k = N; k <= N + 20; ++k) {
        if (!(ctx.alpha_pow_mod1(k).value < std::pow(theta, static_cast<double>(k))))
            throw NumericError("geometric_theta: dist(alpha^k, Z) >= theta^k at k = " + std::to_string(k));
    }
    return {theta, N, 0};
}

GeometricTheta geometric_theta(const PisotContext& ctx, const ThetaScreen& screen) {
    const double cm = ctx.conjugate_max();
    for (int j = 1; j < 32; ++j) {
        const double theta = cm + j * (1.0 - cm) / 32.0;
        if (screen) {
            if (!screen(theta)) continue;
        } else {
            bool ok = true;
            for (int n = 0; n < 200 && ok; ++n) ok = std::abs(std::cos(2.0 * std::numbers::pi * std::pow(theta, n))) > 1e-12;
            if (!ok) continue;
        }
        auto g = geometric_theta(ctx, theta);
        g.grid_index = j;
        return g;
    }
    throw NumericError("geometric_theta: every grid value was screened out");
}

}  // namespace ifsf
