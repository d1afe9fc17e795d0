#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ifsf/errors.hpp"
#include "ifsf/induced.hpp"
#include "ifsf/rng.hpp"

#include <cmath>

using namespace ifsf;

namespace {

Complex bernoulli_product(double p, double lambda, double t, int n) {
    Complex v = 1.0;
    for (int k = 1; k <= n; ++k) v *= p * unit_phase(std::pow(lambda, k) * t) + (1.0 - p);
    return v;
}

}  // namespace

TEST_CASE("t = 0 gives exactly one") {
    const InducedSystem sys(0.4, Kernel::dense(random_contraction(6, 4)));
    for (int n = 0; n <= 10; ++n) CHECK(det_n(sys, 0.0, n) == Complex(1.0, 0.0));
    CHECK(nu_hat_det(sys, 0.0).value == Complex(1.0, 0.0));
    CHECK(std::abs(nu_hat_bruteforce(sys, 0.0, 8) - 1.0) <= 1e-12);
    CHECK(nu_hat_trace_asymptotic(sys, 0.0, 10).value == Complex(1.0, 0.0));
    CHECK(det_lambda(sys, 0.0).value == Complex(1.0, 0.0));
}

TEST_CASE("diagonal kernels give the Bernoulli product") {
    const double p = 0.35, lambda = 0.6;
    const InducedSystem sys(lambda, Kernel::diagonal(p));
    for (double t : {0.4, 1.7, -3.2}) {
        for (int n : {1, 5, 12}) CHECK(std::abs(det_n(sys, t, n) - bernoulli_product(p, lambda, t, n)) <= 1e-14);
        CHECK(std::abs(nu_hat_bruteforce(sys, t, 1) - ((1 - p) + p * unit_phase(lambda * t))) <= 1e-15);
    }
}

TEST_CASE("determinant formula against brute force") {
    const InducedSystem dense(0.4, Kernel::dense(random_contraction(6, 17)));
    const auto r = nu_hat_det(dense, 1.7);
    REQUIRE(r.converged);
    CHECK(std::abs(r.value - nu_hat_bruteforce(dense, 1.7, 12)) <= 1e-9);
    CHECK(r.n_used >= 2);
    CHECK(r.stagnation < kLimitTol);

    const InducedSystem toe(0.5, Kernel::toeplitz(0.3));
    CounterRng rng(5);
    for (int i = 0; i < 5; ++i) {
        const double t = 10 * rng.uniform() - 5;
        CHECK(std::abs(det_n(toe, t, 10) - nu_hat_bruteforce(toe, t, 10)) <= 1e-9);
    }
    CHECK_THROWS_AS(nu_hat_bruteforce(toe, 1.0, 15), ValidationError);
}

TEST_CASE("transform properties") {
    const InducedSystem sys(0.45, Kernel::toeplitz_general(0.4, 0.3));
    for (double t : {0.3, 2.2, 7.5}) {
        const auto a = nu_hat_det(sys, t);
        CHECK(a.converged);
        CHECK(std::abs(a.value) <= 1.0 + 1e-9);
        CHECK(std::abs(nu_hat_det(sys, -t).value - std::conj(a.value)) <= 1e-12);
    }
}

TEST_CASE("non-convergence is flagged") {
    const InducedSystem slow(0.99, Kernel::diagonal(0.4));
    const auto r = nu_hat_det(slow, 50.3, 1e-14, 10);
    CHECK_FALSE(r.converged);
    CHECK(r.n_used == 10);
    CHECK(r.trace.size() == 9);
}

TEST_CASE("trace asymptotic") {
    const InducedSystem sys(0.5, Kernel::diagonal(0.3));
    double prev = 0.0;
    for (double t : {0.1, 0.05, 0.025}) {
        const double gap = nu_hat_trace_asymptotic(sys, t, 40).gap;
        if (prev > 0.0) CHECK(prev / gap == doctest::Approx(4.0).epsilon(0.05));
        prev = gap;
    }
    CHECK(nu_hat_trace_asymptotic(InducedSystem(0.5, Kernel::toeplitz_general(0.3, 0.5)), 1.0, 40).gap > 0.0);
}

TEST_CASE("A_n determinant and minors") {
    CHECK(determinant<double>(a_matrix(0.5, 3)) == doctest::Approx(0.5625).epsilon(1e-15));
    CHECK(a_minor(0.5, 3, 1) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(a_minor(0.5, 3, 2) == doctest::Approx(0.9375).epsilon(1e-15));
    CHECK(a_minor(0.5, 3, 3) == doctest::Approx(0.75).epsilon(1e-15));
    // mpmath: A_5(a = 0.2) minors 0.884736, 0.92012544 (interior).
    CHECK(a_minor(0.2, 5, 1) == doctest::Approx(0.884736).epsilon(1e-14));
    CHECK(a_minor(0.2, 5, 3) == doctest::Approx(0.92012544).epsilon(1e-14));
    for (double a : {0.2, 0.5, 0.8}) {
        for (int n = 1; n <= 10; ++n) {
            CHECK(std::abs(determinant<double>(a_matrix(a, n)) - a_det_formula(a, n)) <= 1e-10);
            for (int k = 1; k <= n; ++k) CHECK(std::abs(a_minor(a, n, k) - a_minor_formula(a, n, k)) <= 1e-10);
        }
    }
}

TEST_CASE("Toeplitz comparison") {
    // mpmath reference: det_8 for p = 0.3, a = 0.5, lambda = 0.5.
    const auto r = toeplitz_product_approx(0.3, 0.5, 0.5, 1.3, 8);
    CHECK(std::abs(r.det - Complex(0.20217961023490931, 0.18031509578547844)) <= 1e-14);
    const auto s = toeplitz_product_approx(0.3, 0.5, 0.5, 0.7, 8);
    CHECK(std::abs(s.det - Complex(0.22426408705374706, 0.47959000106014508)) <= 1e-14);

    // The deviation settles to a constant (about 0.0558) rather than decaying.
    double prev = toeplitz_product_approx(0.3, 0.5, 0.5, 1.3, 11).deviation;
    const double next = toeplitz_product_approx(0.3, 0.5, 0.5, 1.3, 12).deviation;
    CHECK(std::abs(next - prev) <= 1e-6);
    CHECK(next == doctest::Approx(0.0555740).epsilon(1e-5));

    const auto diag = toeplitz_product_approx(0.3, 0.0, 0.5, 1.3, 10);
    CHECK(diag.deviation <= 1e-15);
    const auto tiny = toeplitz_product_approx(1e-9, 0.5, 0.5, 1.3, 10);
    CHECK(std::abs(tiny.det - 1.0) <= 1e-7);
    CHECK(std::abs(tiny.product - 1.0) <= 1e-7);
}

TEST_CASE("exact P_n") {
    for (int n = 2; n <= 8; ++n) {
        const auto e = toeplitz_exact_pn(0.3, 0.5, 0.5, 1.3, n);
        CHECK(e.expansion_gap <= 1e-13);
    }
    const auto e8 = toeplitz_exact_pn(0.3, 0.5, 0.5, 1.3, 8);
    CHECK(e8.printed_gap > 1e-3);
    CHECK_THROWS_AS(toeplitz_exact_pn(0.3, 0.5, 0.5, 1.0, 17), ValidationError);
}

TEST_CASE("det_lambda") {
    const InducedSystem sys(0.4, Kernel::dense(random_contraction(6, 8)));
    for (double t : {-2.5, 0.6, 3.3})
        for (int n = 1; n <= 20; ++n) CHECK(std::abs(det_lambda_n(sys, t, n) - det_n(sys, t, n)) <= 1e-13);
    const auto a = det_lambda(sys, 1.1);
    const auto b = nu_hat_det(sys, 1.1);
    CHECK(a.n_used == b.n_used);
    CHECK(std::abs(a.value - b.value) <= 1e-13);
}

TEST_CASE("positive definiteness") {
    std::vector<double> grid;
    for (int i = 0; i < 16; ++i) grid.push_back(-2.0 + 4.0 * i / 15.0);
    CHECK(positive_definite_check(InducedSystem(0.5, Kernel::diagonal(0.5)), grid) >= -1e-8);
    CHECK(positive_definite_check(InducedSystem(0.5, Kernel::toeplitz_general(0.4, 0.3)), grid) >= -1e-8);
    CHECK(positive_definite_check(InducedSystem(0.5, Kernel::diagonal(0.5)), {0.7}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(positive_definite_check(InducedSystem(0.5, Kernel::diagonal(0.5)), {}), ValidationError);
}

TEST_CASE("permutations") {
    const InducedSystem diag(0.5, Kernel::diagonal(0.3));
    CHECK(unitary_invariance_check(diag, {1, 2, 3}, 1.3, 10) == 0.0);
    CHECK(unitary_invariance_check(diag, {2, 1}, 1.3, 10) <= 1e-15);

    const InducedSystem dense(0.5, Kernel::dense(random_contraction(6, 21)));
    CHECK(unitary_invariance_check(dense, {1, 2, 3, 4, 5, 6}, 1.3, 12) == 0.0);
    // D_N stays in place while T is permuted, so the residual does not shrink with N.
    const double r12 = unitary_invariance_check(dense, {1, 5, 3, 4, 2, 6}, 1.3, 12);
    const double r40 = unitary_invariance_check(dense, {1, 5, 3, 4, 2, 6}, 1.3, 40);
    CHECK(std::abs(r12 - r40) <= 1e-12);
    CHECK_THROWS_AS(unitary_invariance_check(dense, {1, 1}, 1.0, 10), ValidationError);
    CHECK_THROWS_AS(unitary_invariance_check(dense, {2, 1, 3}, 1.0, 2), ValidationError);
}
