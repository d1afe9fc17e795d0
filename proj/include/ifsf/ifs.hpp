#pragma once

// Affine iterated function systems tau_b(x) = A^{-1}(x + b) with weights p_b.

#include <Eigen/Dense>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ifsf/linalg.hpp"

namespace ifsf {

class AffineIFS {
public:
    /// Validates: A square, invertible and expansive (|eigenvalue| > 1 + 1e-8),
    /// at least two digits of matching dimension, p_b > 0 and sum p = 1 within 1e-12.
    AffineIFS(Eigen::MatrixXd A, std::vector<Eigen::VectorXd> digits, std::vector<double> weights);

    int dim() const { return static_cast<int>(A_.rows()); }
    int size() const { return static_cast<int>(digits_.size()); }
    const Eigen::MatrixXd& A() const { return A_; }
    const Eigen::MatrixXd& A_inverse() const { return A_inv_; }
    const std::vector<Eigen::VectorXd>& digits() const { return digits_; }
    const std::vector<double>& weights() const { return weights_; }
    double max_digit_norm() const { return max_digit_norm_; }

    /// True when A = (1/lambda) I; lambda is then the contraction ratio.
    bool is_scalar() const;
    double scalar_lambda() const;

    /// Bound on sum_{j>=1} ||(A^t)^{-j}|| (spectral norms); A^t and A share singular values.
    double inverse_power_sum() const { return inverse_power_sum_; }
    /// Radius of a ball around 0 containing the attractor.
    double attractor_radius() const { return max_digit_norm_ * inverse_power_sum_; }

    Eigen::VectorXd apply(int b, const Eigen::VectorXd& x) const;

    static AffineIFS from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

private:
    Eigen::MatrixXd A_;
    Eigen::MatrixXd A_inv_;
    std::vector<Eigen::VectorXd> digits_;
    std::vector<double> weights_;
    double max_digit_norm_ = 0.0;
    double inverse_power_sum_ = 0.0;
};

/// (lambda^{-1} I, {0, e_1, ..., e_d}, uniform).
AffineIFS standard_simplex_ifs(int d, double lambda);

/// One-dimensional tau_i(x) = lambda (x + b_i) with weights (1 - p1, p1).
AffineIFS two_map_ifs(double lambda, double b0, double b1, double p1 = 0.5);

/// Finite 0/1 word; letter k (1-based) multiplies lambda^k.
struct SymbolWord {
    std::vector<int> letters;
};

enum class WordTail { zeros, ones };

struct EncodedPoint {
    double value = 0.0;
    double truncation_error = 0.0;  // bound on |pi(omega) - value| over all tails
};

/// pi_lambda(omega) = sum_k omega_k lambda^k for a finite word with the given
/// tail appended analytically. Letters must be 0 or 1.
EncodedPoint encode(double lambda, const SymbolWord& word, WordTail tail = WordTail::zeros);

/// Coding map of a one-dimensional binary system {0, b} with A = 1/lambda:
/// pi(omega) = b sum_k omega_k lambda^k, which intertwines the shifts with tau_0, tau_1.
EncodedPoint encode(const AffineIFS& ifs, const SymbolWord& word, WordTail tail = WordTail::zeros);

/// Right shift sigma_b: prepends the letter b.
SymbolWord shift(int b, const SymbolWord& word);

struct EmpiricalMeasure {
    int dim = 0;
    std::vector<Eigen::VectorXd> samples;
    std::uint64_t seed = 0;

    /// (1/n) sum_x e(xi . x)
    Complex characteristic(const Eigen::VectorXd& xi) const;
    void write_csv(std::ostream& out) const;
};

inline constexpr int kChaosBurnIn = 64;

/// n points of a single random orbit started at 0 after kChaosBurnIn steps.
EmpiricalMeasure chaos_game(const AffineIFS& ifs, std::size_t n, std::uint64_t seed);

/// Same A, digits b + A t.
AffineIFS translated_ifs(const AffineIFS& ifs, const Eigen::VectorXd& t);

/// Shift s with mu_translated = T_s mu for translated_ifs(ifs, t):
/// s = (I - A^{-1})^{-1} t.
Eigen::VectorXd invariant_measure_shift(const AffineIFS& ifs, const Eigen::VectorXd& t);

}  // namespace ifsf
