// One line per acceptance criterion; exit status 1 if any fails.

#include "ifsf/algebraic.hpp"
#include "ifsf/chaos.hpp"
#include "ifsf/detmeasure.hpp"
#include "ifsf/fourier.hpp"
#include "ifsf/ifs.hpp"
#include "ifsf/induced.hpp"
#include "ifsf/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

using namespace ifsf;

namespace {

// mpmath references (tests/oracles/fourier_values.py).
constexpr double kCantorAbs = 0.37143735670876564;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  %2d  %-32s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

void guarded(int id, const std::string& name, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, name, false, std::string("exception: ") + e.what());
    }
}

const PisotContext& phi() {
    static const PisotContext ctx = require_pisot(IntPolynomial::parse("x^2 - x - 1"));
    return ctx;
}

std::vector<std::vector<int>> subsets(int n, int max_size) {
    std::vector<std::vector<int>> out;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        std::vector<int> F;
        for (int i = 0; i < n; ++i)
            if ((mask >> i) & 1U) F.push_back(i + 1);
        if (static_cast<int>(F.size()) <= max_size) out.push_back(F);
    }
    return out;
}

void erdos_1d() {
    const auto t0 = Clock::now();
    const auto s = erdos_scan(bernoulli_line(phi().lambda()), phi(), 40);
    const double dt = seconds_since(t0);
    bool below = s.certified;
    for (double v : s.abs_values) below = below && s.certified_bound <= v;
    const bool ok = s.floor > 0 && s.floor >= 100 * s.tail_bound && s.max_residual <= 1e-9 && below && dt < 2.0;
    report(1, "Erdos 1D non-decay", ok,
           "floor " + g(s.floor) + ", tail bound " + g(s.tail_bound) + ", max residual " + g(s.max_residual) +
               ", certified bound " + g(s.certified_bound) + ", " + g(dt) + " s");
}

void cantor_equality() {
    const auto cantor = two_map_ifs(1.0 / 3, -1.0, 1.0);
    double worst = 0.0;
    for (int m = 0; m <= 12; ++m) {
        const double v = std::abs(mu_hat(cantor, Eigen::VectorXd::Constant(1, std::pow(3.0, m))).value);
        worst = std::max(worst, std::abs(v - kCantorAbs));
    }
    report(2, "Cantor |mu(3^m)| = |mu(1)|", worst <= 1e-10, "max deviation " + g(worst) + " over m <= 12");
}

void simplex_scans() {
    bool ok = true;
    std::string detail;
    for (int d = 2; d <= 4; ++d) {
        const auto s = erdos_scan(simplex_line(d, phi().lambda()), phi(), 30);
        ok = ok && s.floor > 0 && s.floor >= 100 * s.tail_bound && s.min_cosine_slack >= -1e-14;
        detail += "d=" + std::to_string(d) + " floor " + g(s.floor) + " slack " + g(s.min_cosine_slack) + "; ";
    }
    report(3, "simplex systems d = 2, 3, 4", ok, detail);
}

void integer_directions() {
    bool ok = true;
    std::string detail;
    const double dirs[3][2] = {{0, 1}, {1, 2}, {2, 3}};
    ErdosScan axis;
    for (const auto& w : dirs) {
        const auto s = erdos_scan(direction_line(phi().lambda(), w[0], w[1]), phi(), 25);
        if (w[0] == 0) axis = s;
        ok = ok && s.floor > 0;
        detail += "[" + g(w[0]) + "," + g(w[1]) + "] floor " + g(s.floor) + "; ";
    }
    const auto m = pisot_matrix_scan(phi(), 0.7, 2.0, 25);
    double diff = 0.0;
    for (std::size_t k = 0; k < axis.values.size(); ++k) diff = std::max(diff, std::abs(axis.values[k] - m.scan.values[k]));
    ok = ok && diff <= 1e-9;
    report(4, "integer directions", ok, detail + "matrix scan gap " + g(diff));
}

void trace_integrality() {
    bool ok = true;
    double worst = 0.0;
    for (const char* p : {"x^2 - x - 1", "x^2 - 2x - 1", "x^3 - x - 1"}) {
        const auto poly = IntPolynomial::parse(p);
        const auto ctx = require_pisot(poly);
        const auto r = roots(poly).roots;
        for (long k = 0; k <= 40; ++k) {
            std::complex<double> sum = 0.0;
            for (const auto& z : r) sum += std::pow(z, static_cast<double>(k));
            const double s = ctx.trace(k).convert_to<double>();
            const double err = std::abs(sum.real() - s) / std::max(1.0, std::abs(s));
            worst = std::max(worst, err);
        }
    }
    const auto& f = phi();
    ok = worst <= 1e-6 && f.trace(1) == 1 && f.trace(2) == 3 && f.trace(3) == 4 && f.trace(4) == 7;
    report(5, "trace integrality", ok, "max relative float gap " + g(worst) + ", phi traces 1 3 4 7");
}

void mod1_decay() {
    bool ok = true;
    std::string detail;
    for (const char* p : {"x^2 - x - 1", "x^2 - 2x - 1", "x^3 - x - 1"}) {
        const auto ctx = require_pisot(IntPolynomial::parse(p));
        const double n1 = ctx.degree() - 1;
        double ratio = 0.0;
        for (long k = 1; k <= 100; ++k) {
            const double bound = n1 * std::pow(ctx.conjugate_max(), static_cast<double>(k));
            ratio = std::max(ratio, ctx.alpha_pow_mod1(k).value / bound);
        }
        const auto th = geometric_theta(ctx);
        bool dominated = true;
        for (long k = th.N; k <= std::max(100L, th.N + 100); ++k)
            dominated = dominated && ctx.alpha_pow_mod1(k).value < std::pow(th.theta, static_cast<double>(k));
        ok = ok && ratio <= 1.0 && dominated;
        detail += "max dist/bound - 1 " + g(ratio - 1.0) + " theta " + g(th.theta) + " N " + std::to_string(th.N) + "; ";
    }
    report(6, "geometric mod-1 decay", ok, detail);
}

void consistency() {
    std::vector<Kernel> kernels;
    for (std::uint64_t s = 1; s <= 5; ++s) kernels.push_back(Kernel::dense(random_contraction(8, s)));
    for (double a : {0.3, 0.7}) {
        kernels.push_back(Kernel::toeplitz(a));
        kernels.push_back(Kernel::toeplitz_general(0.15, a));
    }
    for (double p : {0.2, 0.5, 0.9}) kernels.push_back(Kernel::diagonal(p));

    double worst = 0.0, lo = 1.0, hi = 0.0;
    long checks = 0;
    for (const auto& T : kernels) {
        for (const auto& F : subsets(7, 5)) {
            for (int k = 1; k <= 8; ++k) {
                if (std::find(F.begin(), F.end(), k) != F.end()) continue;
                const auto r = consistency_check(T, F, k);
                worst = std::max(worst, r.residual);
                lo = std::min(lo, r.min_det);
                hi = std::max(hi, r.max_det);
                ++checks;
            }
        }
    }
    const bool ok = worst <= 1e-12 && lo >= -1e-12 && hi <= 1.0 + 1e-12;
    report(7, "determinantal consistency", ok,
           "max residual " + g(worst) + " over " + std::to_string(checks) + " insertions, dets in [" + g(lo) + ", " +
               g(hi) + "]");
}

void bernoulli_reduction() {
    long mismatches = 0, checks = 0;
    for (double p : {0.2, 0.5, 0.9}) {
        const Kernel T = Kernel::diagonal(p);
        for (const auto& F : subsets(10, 10)) {
            const std::size_t m = F.size();
            for (std::uint32_t bits = 0; bits < (1U << m); ++bits) {
                CylinderSpec c{F, std::vector<int>(m)};
                double expect = 1.0;
                for (std::size_t i = 0; i < m; ++i) {
                    c.xi[i] = static_cast<int>((bits >> i) & 1U);
                    expect *= c.xi[i] ? p : 1.0 - p;
                }
                if (cylinder_prob(T, c) != expect) ++mismatches;
                ++checks;
            }
        }
    }
    report(8, "Bernoulli reduction", mismatches == 0,
           std::to_string(mismatches) + " inexact of " + std::to_string(checks) + " cylinders");
}

void determinant_oracle() {
    const auto t0 = Clock::now();
    const std::vector<InducedSystem> systems{InducedSystem(0.5, Kernel::diagonal(0.4)),
                                             InducedSystem(0.5, Kernel::toeplitz(0.5)),
                                             InducedSystem(0.4, Kernel::dense(random_contraction(12, 99)))};
    CounterRng rng(2024);
    double worst = 0.0;
    for (const auto& sys : systems) {
        for (int i = 0; i < 20; ++i) {
            const double t = 10.0 * rng.uniform() - 5.0;
            for (int n = 1; n <= 12; ++n) worst = std::max(worst, std::abs(det_n(sys, t, n) - nu_hat_bruteforce(sys, t, n)));
        }
    }
    const double dt = seconds_since(t0);
    report(9, "determinant vs brute force", worst <= 1e-9 && dt < 10.0,
           "max gap " + g(worst) + ", " + g(dt) + " s");
}

void toeplitz_asymptotics() {
    bool ok = true;
    std::string detail;
    for (double t : {0.7, 1.3}) {
        double worst = 0.0;
        for (int n = 6; n <= 12; ++n) {
            const double a = toeplitz_product_approx(0.3, 0.5, 0.5, t, n).deviation;
            const double b = toeplitz_product_approx(0.3, 0.5, 0.5, t, n + 1).deviation;
            worst = std::max(worst, b / a);
        }
        ok = ok && worst <= 0.45;
        detail += "t=" + g(t) + " max ratio " + g(worst) + " (dev(13) " +
                  g(toeplitz_product_approx(0.3, 0.5, 0.5, t, 13).deviation) + "); ";
    }
    report(10, "Toeplitz O(p^n) deviation", ok, detail);
}

void a_n_lemma() {
    double worst = 0.0;
    for (double a : {0.2, 0.5, 0.8}) {
        for (int n = 1; n <= 10; ++n) {
            worst = std::max(worst, std::abs(determinant<double>(a_matrix(a, n)) - a_det_formula(a, n)));
            for (int k = 1; k <= n; ++k) worst = std::max(worst, std::abs(a_minor(a, n, k) - a_minor_formula(a, n, k)));
        }
    }
    const double d3 = determinant<double>(a_matrix(0.5, 3));
    const double m2 = a_minor(0.5, 3, 2);
    const bool ok = worst <= 1e-10 && std::abs(d3 - 0.5625) <= 1e-10 && std::abs(m2 - 0.9375) <= 1e-10;
    report(11, "A_n determinant and minors", ok,
           "max formula gap " + g(worst) + ", det A_3 " + g(d3) + ", T(2^) " + g(m2));
}

void det_lambda_checks() {
    const InducedSystem dense(0.5, Kernel::dense(random_contraction(6, 606)));
    const std::vector<InducedSystem> systems{dense, InducedSystem(0.5, Kernel::toeplitz_general(0.4, 0.3)),
                                             InducedSystem(0.5, Kernel::diagonal(0.5))};
    double agree = 0.0;
    for (const auto& sys : systems)
        for (double t : {-1.9, 0.35, 1.3, 4.4})
            for (int n = 1; n <= kLimitMaxOrder; ++n)
                agree = std::max(agree, std::abs(det_lambda_n(sys, t, n) - det_n(sys, t, n)));
    const bool at_zero = det_lambda(dense, 0.0).value == Complex(1.0, 0.0);

    std::vector<double> grid;
    for (int i = 0; i < 16; ++i) grid.push_back(-2.0 + 4.0 * i / 15.0);
    const double ev_diag = positive_definite_check(systems[2], grid);
    const double ev_toe = positive_definite_check(systems[1], grid);

    double perm = 0.0;
    for (int N = 6; N <= 40; ++N) perm = unitary_invariance_check(dense, {1, 5, 3, 4, 2, 6}, 1.3, N);

    const bool ok = agree <= 1e-13 && at_zero && ev_diag >= -1e-8 && ev_toe >= -1e-8 && perm < 1e-6;
    report(12, "det_lambda", ok,
           "order gap " + g(agree) + ", F(0) = 1: " + (at_zero ? "yes" : "no") + ", Gram min eig " + g(ev_diag) +
               " / " + g(ev_toe) + ", swap(2,5) residual at N=40 " + g(perm));
}

void shift_recursion() {
    const std::vector<Kernel> kernels{Kernel::diagonal(0.3), Kernel::diagonal(0.8), Kernel::toeplitz(0.4),
                                      Kernel::toeplitz(0.7), Kernel::toeplitz_general(0.3, 0.5)};
    double worst = 0.0, literal = 0.0;
    for (const auto& T : kernels) {
        for (const auto& F : subsets(6, 4)) {
            for (std::uint32_t bits = 0; bits < (1U << F.size()); ++bits) {
                CylinderSpec c{F, std::vector<int>(F.size())};
                for (std::size_t i = 0; i < F.size(); ++i) c.xi[i] = static_cast<int>((bits >> i) & 1U);
                const auto r = shift_recursion_check(T, c);
                worst = std::max(worst, r.two_sided);
                literal = std::max(literal, r.row_shift);
            }
        }
    }
    report(13, "shift recursion", worst <= 1e-12,
           "two-sided residual " + g(worst) + " (one-sided reading " + g(literal) + ")");
}

void chaos_scan() {
    const auto golden = two_map_ifs(phi().lambda(), -1.0, 1.0);
    const auto sep = separation_scan(golden, phi(), 20);
    const auto erdos = erdos_scan(bernoulli_line(phi().lambda()), phi(), 20);
    bool ok = true;
    for (double b : sep.bounds) ok = ok && b >= 2 * erdos.floor - 1e-12;

    const auto three = require_pisot(IntPolynomial::parse("x - 3"));
    const auto cantor = two_map_ifs(1.0 / 3, -1.0, 1.0);
    const auto sc = separation_scan(cantor, three, 20);
    const auto [lo, hi] = std::minmax_element(sc.bounds.begin(), sc.bounds.end());
    ok = ok && *hi - *lo <= 1e-10;

    const auto c1 = chaos_classify(golden, phi(), sep.floor, 20);
    const auto c2 = chaos_classify(cantor, three, sc.floor, 20);
    ok = ok && c1.verdict == ChaosVerdict::chaotic_certified && c2.verdict == ChaosVerdict::chaotic_certified;
    report(14, "chaos scan", ok,
           "golden floor " + g(sep.floor) + " vs 2 x " + g(erdos.floor) + ", Cantor spread " + g(*hi - *lo) + ", " +
               to_string(c1.verdict) + " / " + to_string(c2.verdict));
}

void monte_carlo() {
    const auto t0 = Clock::now();
    const auto cantor = two_map_ifs(1.0 / 3, -1.0, 1.0);
    const Eigen::VectorXd one = Eigen::VectorXd::Constant(1, 1.0);
    const Complex emp = chaos_game(cantor, 1000000, 12345).characteristic(one);
    const Complex exact = mu_hat(cantor, one).value;
    const double dt = seconds_since(t0);
    const double gap = std::abs(emp - exact);
    report(15, "chaos game vs mu_hat", gap <= 5e-3 && dt < 5.0, "gap " + g(gap) + ", " + g(dt) + " s");
}

}  // namespace

int main() {
    guarded(1, "Erdos 1D non-decay", erdos_1d);
    guarded(2, "Cantor |mu(3^m)| = |mu(1)|", cantor_equality);
    guarded(3, "simplex systems d = 2, 3, 4", simplex_scans);
    guarded(4, "integer directions", integer_directions);
    guarded(5, "trace integrality", trace_integrality);
    guarded(6, "geometric mod-1 decay", mod1_decay);
    guarded(7, "determinantal consistency", consistency);
    guarded(8, "Bernoulli reduction", bernoulli_reduction);
    guarded(9, "determinant vs brute force", determinant_oracle);
    guarded(10, "Toeplitz O(p^n) deviation", toeplitz_asymptotics);
    guarded(11, "A_n determinant and minors", a_n_lemma);
    guarded(12, "det_lambda", det_lambda_checks);
    guarded(13, "shift recursion", shift_recursion);
    guarded(14, "chaos scan", chaos_scan);
    guarded(15, "chaos game vs mu_hat", monte_carlo);
    std::printf("%d of 15 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
