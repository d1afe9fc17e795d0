#pragma once

// Fourier lower bounds on ||mu - T_t mu|| and the chaos classification of
// one-dimensional two-map systems.

#include <optional>
#include <string>
#include <vector>

#include "ifsf/algebraic.hpp"
#include "ifsf/fourier.hpp"
#include "ifsf/ifs.hpp"

namespace ifsf {

struct TvLowerBound {
    double t = 0.0;
    double witness_xi = 0.0;
    double bound = 0.0;
};

/// max over the grid of |1 - e(t xi)| |mu_hat(xi)|, a lower bound for the total
/// variation of mu - T_t mu. One-dimensional systems.
TvLowerBound tv_lower_bound(const AffineIFS& ifs, double t, const std::vector<double>& xi_grid,
                            double tol = kDefaultProductTol);

/// The digit line of a scalar one-dimensional system.
DigitLine line_of(const AffineIFS& ifs);

struct SeparationScan {
    std::vector<long> ns;
    std::vector<double> ts;         // lambda^n / 2
    std::vector<double> witnesses;  // alpha^n
    std::vector<double> bounds;     // 2 |mu_hat(alpha^n)|
    double floor = 0.0;
};

SeparationScan separation_scan(const AffineIFS& ifs, const PisotContext& ctx, long n_max,
                               double tol = kDefaultProductTol);

enum class ChaosVerdict { chaotic_certified, no_evidence };

std::string to_string(ChaosVerdict v);

struct ChaosClassification {
    ChaosVerdict verdict = ChaosVerdict::no_evidence;
    double floor = 0.0;
    std::string reason;
};

/// chaotic_certified iff a Pisot context is available and the separation floor
/// over n <= n_max is at least eps. Never concludes "not chaotic".
ChaosClassification chaos_classify(const AffineIFS& ifs, const std::optional<PisotContext>& ctx, double eps,
                                   long n_max, double tol = kDefaultProductTol);

struct GradationEstimate {
    double infimum = 0.0;
    long k_at = 0;
    long n_at = 0;
};

/// inf over 2 <= k <= k_max, 0 <= n <= n_max of k^exponent 2 sin(pi / k) |mu_hat(alpha^n)|.
GradationEstimate alpha_gradation(const AffineIFS& ifs, const PisotContext& ctx, double exponent, long k_max,
                                  long n_max, double tol = kDefaultProductTol);

}  // namespace ifsf
