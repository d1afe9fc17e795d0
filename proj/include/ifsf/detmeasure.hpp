#pragma once

// Determinantal measures on {0,1}^N: mu_T(G(xi)) = det W(xi).

#include <Eigen/Dense>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ifsf {

enum class KernelVariant { diagonal, toeplitz, toeplitz_general, dense };

std::string to_string(KernelVariant v);

inline constexpr int kSpectralSpotOrder = 24;
inline constexpr double kSpectralSlack = 1e-10;

/// Symmetric contraction T on l^2(N), indices from 1.
class Kernel {
public:
    /// p I
    static Kernel diagonal(double p);
    /// ((1 - a) / (1 + a)) a^{|i-j|}
    static Kernel toeplitz(double a);
    /// p a^{|i-j|}
    static Kernel toeplitz_general(double p, double a);
    /// Finite symmetric matrix, zero outside its n x n support.
    static Kernel dense(Eigen::MatrixXd m);

    KernelVariant variant() const { return variant_; }
    double p() const { return p_; }
    double a() const { return a_; }
    const Eigen::MatrixXd& matrix() const { return matrix_; }
    /// Size of the support for dense kernels, -1 for the infinite variants.
    int support() const;

    double entry(int i, int j) const;
    /// T restricted to rows and columns F (zero-extended past a dense support).
    Eigen::MatrixXd block(const std::vector<int>& F) const;
    /// Leading n x n block T_{F_n}.
    Eigen::MatrixXd leading(int n) const;

    /// Throws KernelInvalid unless the leading n x n block has spectrum in
    /// [-kSpectralSlack, 1 + kSpectralSlack].
    void check_spectrum(int n) const;

    static Kernel from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

private:
    Kernel(KernelVariant v, double p, double a, Eigen::MatrixXd m);

    KernelVariant variant_;
    double p_ = 0.0;
    double a_ = 0.0;
    Eigen::MatrixXd matrix_;
};

/// Q diag(u) Q^t with Q orthogonal and u uniform in [0, 1]; deterministic per seed.
Eigen::MatrixXd random_contraction(int n, std::uint64_t seed);

struct CylinderSpec {
    std::vector<int> F;   // strictly increasing, entries >= 1
    std::vector<int> xi;  // one bit per index

    void validate() const;
    static CylinderSpec from_json(const nlohmann::json& j);
};

/// Rows where xi_i = 1 are T_{i,.}; rows where xi_i = 0 are delta_{i,.} - T_{i,.}.
/// Dense kernels require F inside the support unless zero_extend is set.
Eigen::MatrixXd w_matrix(const Kernel& T, const CylinderSpec& cyl, bool zero_extend = false);

/// det W(xi) before clamping.
double cylinder_det(const Kernel& T, const CylinderSpec& cyl);

/// det W(xi), with values in [-1e-12, 0) clamped to 0. Throws KernelInvalid
/// outside [-1e-12, 1 + 1e-12].
double cylinder_prob(const Kernel& T, const CylinderSpec& cyl);

struct ConsistencyReport {
    double residual = 0.0;  // max_xi |P(xi+) + P(xi-) - P(xi)|
    double min_det = 1.0;   // over every determinant evaluated, before clamping
    double max_det = 0.0;
    int cylinders = 0;
};

/// Additivity when index k (not in F) is added with both bit values.
ConsistencyReport consistency_check(const Kernel& T, const std::vector<int>& F, int k);

struct ShiftRecursionReport {
    double two_sided = 0.0;   // first row and lower-right block against 2 W' with T'_{ij} = T_{i+1,j+1}
    double row_shift = 0.0;   // lower-right block against 2 W' with T'_{ij} = T_{i+1,j}
    double coupling = 0.0;    // max |entry| of the lower-left column, outside both blocks
};

/// Compares W(sigma_0 xi) + W(sigma_1 xi) with the block form [1 0; * 2W'(xi)],
/// where sigma_b prepends the letter b.
ShiftRecursionReport shift_recursion_check(const Kernel& T, const CylinderSpec& cyl);

/// Exact chain-rule sample of the first n coordinates (n <= 24).
std::vector<int> sample_configuration(const Kernel& T, int n, std::uint64_t seed);

}  // namespace ifsf
