#include "ifsf/ifs.hpp"

#include "ifsf/errors.hpp"
#include "ifsf/rng.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

namespace ifsf {

namespace {

double spectral_norm(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
}

}  // namespace

AffineIFS::AffineIFS(Eigen::MatrixXd A, std::vector<Eigen::VectorXd> digits, std::vector<double> weights)
    : A_(std::move(A)), digits_(std::move(digits)), weights_(std::move(weights)) {
    const auto d = A_.rows();
    if (d < 1 || A_.cols() != d) throw ValidationError("ifs: A must be a non-empty square matrix");
    if (digits_.size() < 2) throw ValidationError("ifs: need at least two digits");
    if (weights_.size() != digits_.size()) throw ValidationError("ifs: one weight per digit required");
    for (const auto& b : digits_) {
        if (b.size() != d) throw ValidationError("ifs: digit dimension does not match A");
        max_digit_norm_ = std::max(max_digit_norm_, b.norm());
    }
    double total = 0.0;
    for (double p : weights_) {
        if (!(p > 0.0)) throw ValidationError("ifs: weights must be positive");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ValidationError("ifs: weights must sum to 1");

    Eigen::EigenSolver<Eigen::MatrixXd> eig(A_, false);
    if (eig.info() != Eigen::Success) throw NumericError("ifs: eigenvalues of A failed");
    for (Eigen::Index i = 0; i < d; ++i) {
        if (!(std::abs(eig.eigenvalues()(i)) > 1.0 + 1e-8))
            throw ValidationError("ifs: A is not expansive (eigenvalue modulus " + std::to_string(std::abs(eig.eigenvalues()(i))) + ")");
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A_);
    if (!lu.isInvertible()) throw ValidationError("ifs: A is singular");
    A_inv_ = lu.inverse();

    // sum_{j>=1} ||M^j|| <= (sum_{s=1}^{m} ||M^s||) / (1 - ||M^m||) once ||M^m|| < 1.
    Eigen::MatrixXd power = A_inv_;
    double head = 0.0;
    for (int m = 1; m <= 4096; ++m) {
        const double norm = spectral_norm(power);
        head += norm;
        if (norm < 1.0) {
            inverse_power_sum_ = head / (1.0 - norm);
            return;
        }
        power = power * A_inv_;
    }
    throw NumericError("ifs: powers of A^{-1} do not contract");
}

bool AffineIFS::is_scalar() const {
    const Eigen::MatrixXd scalar = A_(0, 0) * Eigen::MatrixXd::Identity(A_.rows(), A_.cols());
    return A_ == scalar;
}

double AffineIFS::scalar_lambda() const {
    if (!is_scalar()) throw ValidationError("ifs: A is not a scalar matrix");
    return 1.0 / A_(0, 0);
}

Eigen::VectorXd AffineIFS::apply(int b, const Eigen::VectorXd& x) const {
    return A_inv_ * (x + digits_.at(static_cast<std::size_t>(b)));
}

AffineIFS AffineIFS::from_json(const nlohmann::json& j) {
    try {
        const int d = j.at("dim").get<int>();
        if (d < 1) throw ValidationError("ifs: dim must be >= 1");
        const auto a = j.at("A").get<std::vector<double>>();
        if (static_cast<int>(a.size()) != d * d) throw ValidationError("ifs: A must have dim*dim entries (row-major)");
        Eigen::MatrixXd A(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) A(r, c) = a[static_cast<std::size_t>(r * d + c)];
        std::vector<Eigen::VectorXd> digits;
        for (const auto& b : j.at("B")) {
            std::vector<double> v = b.is_array() ? b.get<std::vector<double>>() : std::vector<double>{b.get<double>()};
            digits.push_back(Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
        }
        auto p = j.at("p").get<std::vector<double>>();
        return AffineIFS(std::move(A), std::move(digits), std::move(p));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("ifs: malformed spec: ") + e.what());
    }
}

nlohmann::json AffineIFS::to_json() const {
    nlohmann::json j;
    j["dim"] = dim();
    std::vector<double> a;
    for (int r = 0; r < dim(); ++r)
        for (int c = 0; c < dim(); ++c) a.push_back(A_(r, c));
    j["A"] = a;
    j["B"] = nlohmann::json::array();
    for (const auto& b : digits_) j["B"].push_back(std::vector<double>(b.data(), b.data() + b.size()));
    j["p"] = weights_;
    return j;
}

AffineIFS standard_simplex_ifs(int d, double lambda) {
    if (d < 1) throw ValidationError("simplex ifs: d must be >= 1");
    if (!(lambda > 0.0 && lambda < 1.0)) throw ValidationError("simplex ifs: lambda must lie in (0, 1)");
    std::vector<Eigen::VectorXd> digits{Eigen::VectorXd::Zero(d)};
    for (int i = 0; i < d; ++i) digits.push_back(Eigen::VectorXd::Unit(d, i));
    return AffineIFS(Eigen::MatrixXd::Identity(d, d) / lambda, std::move(digits),
                     std::vector<double>(static_cast<std::size_t>(d + 1), 1.0 / (d + 1)));
}

AffineIFS two_map_ifs(double lambda, double b0, double b1, double p1) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw ValidationError("two-map ifs: lambda must lie in (0, 1)");
    Eigen::MatrixXd A(1, 1);
    A(0, 0) = 1.0 / lambda;
    std::vector<Eigen::VectorXd> digits{Eigen::VectorXd::Constant(1, b0), Eigen::VectorXd::Constant(1, b1)};
    return AffineIFS(std::move(A), std::move(digits), {1.0 - p1, p1});
}

EncodedPoint encode(double lambda, const SymbolWord& word, WordTail tail) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw ValidationError("encode: lambda must lie in (0, 1)");
    // Horner from the last letter: v = lambda (w_1 + lambda (w_2 + ...)).
    const std::size_t len = word.letters.size();
    const double tail_sum = std::pow(lambda, static_cast<double>(len + 1)) / (1.0 - lambda);
    double value = tail == WordTail::ones ? tail_sum : 0.0;
    for (std::size_t i = len; i-- > 0;) {
        const int letter = word.letters[i];
        if (letter != 0 && letter != 1) throw ValidationError("encode: letters must be 0 or 1");
        value = lambda * (letter + value);
    }
    return {value, tail == WordTail::ones ? 0.0 : tail_sum};
}

EncodedPoint encode(const AffineIFS& ifs, const SymbolWord& word, WordTail tail) {
    if (ifs.dim() != 1 || ifs.size() != 2 || ifs.digits()[0](0) != 0.0)
        throw ValidationError("encode: need a one-dimensional two-map system with digits {0, b}");
    const double b = ifs.digits()[1](0);
    auto point = encode(ifs.scalar_lambda(), word, tail);
    point.value *= b;
    point.truncation_error *= std::abs(b);
    return point;
}

SymbolWord shift(int b, const SymbolWord& word) {
    SymbolWord out;
    out.letters.reserve(word.letters.size() + 1);
    out.letters.push_back(b);
    out.letters.insert(out.letters.end(), word.letters.begin(), word.letters.end());
    return out;
}

Complex EmpiricalMeasure::characteristic(const Eigen::VectorXd& xi) const {
    if (samples.empty()) throw ValidationError("empirical measure: no samples");
    Complex acc = 0.0;
    for (const auto& x : samples) acc += unit_phase(xi.dot(x));
    return acc / static_cast<double>(samples.size());
}

void EmpiricalMeasure::write_csv(std::ostream& out) const {
    for (int i = 0; i < dim; ++i) out << (i ? "," : "") << "x_" << (i + 1);
    out << "\n";
    char buf[40];
    for (const auto& x : samples) {
        for (int i = 0; i < dim; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", x(i));
            out << (i ? "," : "") << buf;
        }
        out << "\n";
    }
}

EmpiricalMeasure chaos_game(const AffineIFS& ifs, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ValidationError("chaos_game: sample count must be >= 1");
    std::vector<double> cumulative(ifs.weights().size());
    std::partial_sum(ifs.weights().begin(), ifs.weights().end(), cumulative.begin());

    CounterRng rng(seed);
    auto pick = [&] {
        const double u = rng.uniform() * cumulative.back();
        std::size_t b = 0;
        while (b + 1 < cumulative.size() && u >= cumulative[b]) ++b;
        return static_cast<int>(b);
    };

    EmpiricalMeasure out;
    out.dim = ifs.dim();
    out.seed = seed;
    out.samples.reserve(n);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(ifs.dim());
    for (int i = 0; i < kChaosBurnIn; ++i) x = ifs.apply(pick(), x);
    for (std::size_t i = 0; i < n; ++i) {
        x = ifs.apply(pick(), x);
        out.samples.push_back(x);
    }
    return out;
}

AffineIFS translated_ifs(const AffineIFS& ifs, const Eigen::VectorXd& t) {
    if (t.size() != ifs.dim()) throw ValidationError("translated_ifs: dimension mismatch");
    std::vector<Eigen::VectorXd> digits;
    const Eigen::VectorXd At = ifs.A() * t;
    for (const auto& b : ifs.digits()) digits.push_back(b + At);
    return AffineIFS(ifs.A(), std::move(digits), ifs.weights());
}

Eigen::VectorXd invariant_measure_shift(const AffineIFS& ifs, const Eigen::VectorXd& t) {
    if (t.size() != ifs.dim()) throw ValidationError("invariant_measure_shift: dimension mismatch");
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(ifs.dim(), ifs.dim()) - ifs.A_inverse();
    return m.fullPivLu().solve(t);
}

}  // namespace ifsf
