#include "ifsf/chaos.hpp"

#include "ifsf/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace ifsf {

namespace {

void require_line_system(const AffineIFS& ifs) {
    if (ifs.dim() != 1) throw ValidationError("expected a one-dimensional system");
}

}  // namespace

TvLowerBound tv_lower_bound(const AffineIFS& ifs, double t, const std::vector<double>& xi_grid, double tol) {
    require_line_system(ifs);
    if (xi_grid.empty()) throw ValidationError("tv_lower_bound: empty frequency grid");
    TvLowerBound out;
    out.t = t;
    out.witness_xi = xi_grid.front();
    for (double xi : xi_grid) {
        if (xi == 0.0) throw ValidationError("tv_lower_bound: grid frequencies must be nonzero");
        const double gap = std::abs(1.0 - unit_phase(t * xi));
        if (gap == 0.0) continue;
        const double b = gap * std::abs(mu_hat(ifs, Eigen::VectorXd::Constant(1, xi), tol).value);
        if (b > out.bound) {
            out.bound = b;
            out.witness_xi = xi;
        }
    }
    return out;
}

DigitLine line_of(const AffineIFS& ifs) {
    require_line_system(ifs);
    DigitLine l;
    l.lambda = ifs.scalar_lambda();
    l.weights = ifs.weights();
    for (const auto& b : ifs.digits()) l.digits.push_back(b(0));
    return l;
}

SeparationScan separation_scan(const AffineIFS& ifs, const PisotContext& ctx, long n_max, double tol) {
    const DigitLine line = line_of(ifs);
    if (n_max < 0) throw ValidationError("separation_scan: n_max must be non-negative");
    SeparationScan out;
    out.floor = std::numeric_limits<double>::infinity();
    for (long n = 0; n <= n_max; ++n) {
        const SplitEvaluation e = mu_hat_at_alpha_k(line, ctx, n, tol);
        out.ns.push_back(n);
        out.ts.push_back(0.5 * std::pow(line.lambda, static_cast<double>(n)));
        out.witnesses.push_back(std::pow(ctx.alpha(), static_cast<double>(n)));
        out.bounds.push_back(2.0 * std::abs(e.split.value));
        out.floor = std::min(out.floor, out.bounds.back());
    }
    return out;
}

std::string to_string(ChaosVerdict v) {
    return v == ChaosVerdict::chaotic_certified ? "chaotic-certified" : "no-evidence";
}

ChaosClassification chaos_classify(const AffineIFS& ifs, const std::optional<PisotContext>& ctx, double eps,
                                   long n_max, double tol) {
    require_line_system(ifs);
    if (!(eps > 0.0)) throw ValidationError("chaos_classify: eps must be positive");
    if (ifs.size() != 2) throw ValidationError("chaos_classify: expected a two-map system");
    ChaosClassification out;
    if (!ctx) {
        out.reason = "no Pisot certificate for 1/lambda";
        return out;
    }
    if (std::abs(ifs.scalar_lambda() * ctx->alpha() - 1.0) > 1e-12) {
        out.reason = "lambda is not 1/alpha for the supplied context";
        return out;
    }
    const SeparationScan scan = separation_scan(ifs, *ctx, n_max, tol);
    out.floor = scan.floor;
    if (scan.floor >= eps) {
        out.verdict = ChaosVerdict::chaotic_certified;
        out.reason = "separation floor over t_n = lambda^n / 2 is at least eps";
    } else {
        out.reason = "separation floor below eps";
    }
    return out;
}

GradationEstimate alpha_gradation(const AffineIFS& ifs, const PisotContext& ctx, double exponent, long k_max,
                                  long n_max, double tol) {
    if (!(exponent >= 0.0)) throw ValidationError("alpha_gradation: exponent must be non-negative");
    if (k_max < 2) throw ValidationError("alpha_gradation: k_max must be at least 2");
    const DigitLine line = line_of(ifs);
    std::vector<double> mods;
    for (long n = 0; n <= n_max; ++n) mods.push_back(std::abs(mu_hat_at_alpha_k(line, ctx, n, tol).split.value));

    GradationEstimate out;
    out.infimum = std::numeric_limits<double>::infinity();
    for (long k = 2; k <= k_max; ++k) {
        const double w = std::pow(static_cast<double>(k), exponent) * 2.0 *
                         std::sin(std::numbers::pi / static_cast<double>(k));
        for (long n = 0; n <= n_max; ++n) {
            const double v = w * mods[static_cast<std::size_t>(n)];
            if (v < out.infimum) {
                out.infimum = v;
                out.k_at = k;
                out.n_at = n;
            }
        }
    }
    return out;
}

}  // namespace ifsf
