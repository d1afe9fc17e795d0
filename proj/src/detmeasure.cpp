#include "ifsf/detmeasure.hpp"

#include "ifsf/errors.hpp"
#include "ifsf/linalg.hpp"
#include "ifsf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace ifsf {

namespace {

constexpr double kClampBand = 1e-12;
constexpr int kMaxSampleOrder = 24;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string to_string(KernelVariant v) {
    switch (v) {
        case KernelVariant::diagonal: return "diagonal";
        case KernelVariant::toeplitz: return "toeplitz";
        case KernelVariant::toeplitz_general: return "toeplitz_general";
        case KernelVariant::dense: return "dense";
    }
    return "unknown";
}

Kernel::Kernel(KernelVariant v, double p, double a, Eigen::MatrixXd m)
    : variant_(v), p_(p), a_(a), matrix_(std::move(m)) {}

Kernel Kernel::diagonal(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw KernelInvalid("diagonal kernel: p must lie in [0, 1]");
    return Kernel(KernelVariant::diagonal, p, 0.0, {});
}

Kernel Kernel::toeplitz(double a) {
    if (!(a >= 0.0 && a < 1.0)) throw KernelInvalid("toeplitz kernel: a must lie in [0, 1)");
    return Kernel(KernelVariant::toeplitz, (1.0 - a) / (1.0 + a), a, {});
}

Kernel Kernel::toeplitz_general(double p, double a) {
    if (!(p >= 0.0 && p <= 1.0)) throw KernelInvalid("toeplitz kernel: p must lie in [0, 1]");
    if (!(a >= 0.0 && a < 1.0)) throw KernelInvalid("toeplitz kernel: a must lie in [0, 1)");
    Kernel k(KernelVariant::toeplitz_general, p, a, {});
    k.check_spectrum(kSpectralSpotOrder);
    return k;
}

Kernel Kernel::dense(Eigen::MatrixXd m) {
    if (m.rows() == 0 || m.rows() != m.cols()) throw KernelInvalid("dense kernel: need a nonempty square matrix");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw KernelInvalid("dense kernel: matrix is not symmetric");
    m = 0.5 * (m + m.transpose()).eval();
    Kernel k(KernelVariant::dense, 0.0, 0.0, std::move(m));
    k.check_spectrum(static_cast<int>(k.matrix_.rows()));
    return k;
}

int Kernel::support() const {
    return variant_ == KernelVariant::dense ? static_cast<int>(matrix_.rows()) : -1;
}

double Kernel::entry(int i, int j) const {
    if (i < 1 || j < 1) throw ValidationError("kernel indices start at 1");
    switch (variant_) {
        case KernelVariant::diagonal: return i == j ? p_ : 0.0;
        case KernelVariant::toeplitz:
        case KernelVariant::toeplitz_general: return p_ * std::pow(a_, std::abs(i - j));
        case KernelVariant::dense:
            if (i > matrix_.rows() || j > matrix_.rows()) return 0.0;
            return matrix_(i - 1, j - 1);
    }
    return 0.0;
}

Eigen::MatrixXd Kernel::block(const std::vector<int>& F) const {
    const auto n = static_cast<Eigen::Index>(F.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) m(r, c) = entry(F[r], F[c]);
    return m;
}

Eigen::MatrixXd Kernel::leading(int n) const {
    std::vector<int> F(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) F[i] = i + 1;
    return block(F);
}

void Kernel::check_spectrum(int n) const {
    if (n <= 0) return;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(leading(n), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo < -kSpectralSlack || hi > 1.0 + kSpectralSlack) {
        throw KernelInvalid(to_string(variant_) + " kernel (p = " + fmt(p_) + ", a = " + fmt(a_) +
                            ") has spectrum [" + fmt(lo) + ", " + fmt(hi) + "] outside [0, 1] at order " +
                            std::to_string(n));
    }
}

Kernel Kernel::from_json(const nlohmann::json& j) {
    try {
        const std::string v = j.at("variant").get<std::string>();
        if (v == "diagonal") return diagonal(j.at("p").get<double>());
        if (v == "toeplitz") return toeplitz(j.at("a").get<double>());
        if (v == "toeplitz_general") return toeplitz_general(j.at("p").get<double>(), j.at("a").get<double>());
        if (v == "dense") {
            const auto rows = j.at("matrix").get<std::vector<std::vector<double>>>();
            Eigen::MatrixXd m(rows.size(), rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (rows[r].size() != rows.size()) throw ValidationError("dense kernel: matrix must be square");
                for (std::size_t c = 0; c < rows.size(); ++c) m(r, c) = rows[r][c];
            }
            return dense(std::move(m));
        }
        throw ValidationError("unknown kernel variant '" + v + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("kernel spec: ") + e.what());
    }
}

nlohmann::json Kernel::to_json() const {
    nlohmann::json j{{"variant", to_string(variant_)}};
    switch (variant_) {
        case KernelVariant::diagonal: j["p"] = p_; break;
        case KernelVariant::toeplitz: j["a"] = a_; break;
        case KernelVariant::toeplitz_general:
            j["p"] = p_;
            j["a"] = a_;
            break;
        case KernelVariant::dense: {
            std::vector<std::vector<double>> rows(matrix_.rows(), std::vector<double>(matrix_.cols()));
            for (Eigen::Index r = 0; r < matrix_.rows(); ++r)
                for (Eigen::Index c = 0; c < matrix_.cols(); ++c) rows[r][c] = matrix_(r, c);
            j["matrix"] = rows;
            break;
        }
    }
    return j;
}

Eigen::MatrixXd random_contraction(int n, std::uint64_t seed) {
    if (n < 1) throw ValidationError("random_contraction: n must be positive");
    CounterRng rng(seed);
    Eigen::MatrixXd g(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) g(r, c) = 2.0 * rng.uniform() - 1.0;
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u(i) = rng.uniform();
    Eigen::MatrixXd m = q * u.asDiagonal() * q.transpose();
    return 0.5 * (m + m.transpose());
}

void CylinderSpec::validate() const {
    if (F.size() != xi.size()) throw ValidationError("cylinder: F and xi differ in length");
    for (std::size_t i = 0; i < F.size(); ++i) {
        if (F[i] < 1) throw ValidationError("cylinder: indices start at 1");
        if (i > 0 && F[i] <= F[i - 1]) throw ValidationError("cylinder: F must be strictly increasing");
        if (xi[i] != 0 && xi[i] != 1) throw ValidationError("cylinder: xi entries must be 0 or 1");
    }
}

CylinderSpec CylinderSpec::from_json(const nlohmann::json& j) {
    CylinderSpec c;
    try {
        c.F = j.at("F").get<std::vector<int>>();
        c.xi = j.at("xi").get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("cylinder spec: ") + e.what());
    }
    c.validate();
    return c;
}

Eigen::MatrixXd w_matrix(const Kernel& T, const CylinderSpec& cyl, bool zero_extend) {
    cyl.validate();
    if (!zero_extend && T.support() >= 0 && !cyl.F.empty() && cyl.F.back() > T.support())
        throw ValidationError("cylinder index " + std::to_string(cyl.F.back()) + " lies outside the kernel support " +
                              std::to_string(T.support()));
    const auto n = static_cast<Eigen::Index>(cyl.F.size());
    Eigen::MatrixXd w(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            const double t = T.entry(cyl.F[r], cyl.F[c]);
            w(r, c) = cyl.xi[r] == 1 ? t : (r == c ? 1.0 : 0.0) - t;
        }
    }
    return w;
}

double cylinder_det(const Kernel& T, const CylinderSpec& cyl) { return determinant<double>(w_matrix(T, cyl)); }

double cylinder_prob(const Kernel& T, const CylinderSpec& cyl) {
    const double d = cylinder_det(T, cyl);
    if (d < -kClampBand || d > 1.0 + kClampBand)
        throw KernelInvalid("cylinder determinant " + fmt(d) + " outside [0, 1]: kernel spectrum is not in [0, 1]");
    return d < 0.0 ? 0.0 : d;
}

ConsistencyReport consistency_check(const Kernel& T, const std::vector<int>& F, int k) {
    if (std::find(F.begin(), F.end(), k) != F.end()) throw ValidationError("consistency_check: k already in F");
    if (k < 1) throw ValidationError("consistency_check: indices start at 1");
    std::vector<int> G = F;
    G.push_back(k);
    std::sort(G.begin(), G.end());
    const auto pos = static_cast<std::size_t>(std::find(G.begin(), G.end(), k) - G.begin());

    ConsistencyReport rep;
    auto det = [&](const CylinderSpec& c) {
        const double d = cylinder_det(T, c);
        rep.min_det = std::min(rep.min_det, d);
        rep.max_det = std::max(rep.max_det, d);
        ++rep.cylinders;
        return d;
    };
    const std::size_t m = F.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        CylinderSpec base{F, std::vector<int>(m)};
        for (std::size_t i = 0; i < m; ++i) base.xi[i] = static_cast<int>((mask >> i) & 1U);
        CylinderSpec plus{G, {}}, minus{G, {}};
        plus.xi = base.xi;
        plus.xi.insert(plus.xi.begin() + static_cast<std::ptrdiff_t>(pos), 1);
        minus.xi = base.xi;
        minus.xi.insert(minus.xi.begin() + static_cast<std::ptrdiff_t>(pos), 0);
        rep.residual = std::max(rep.residual, std::abs(det(plus) + det(minus) - det(base)));
    }
    return rep;
}

ShiftRecursionReport shift_recursion_check(const Kernel& T, const CylinderSpec& cyl) {
    cyl.validate();
    CylinderSpec s0, s1;
    s0.F.push_back(1);
    for (int f : cyl.F) s0.F.push_back(f + 1);
    s1.F = s0.F;
    s0.xi.push_back(0);
    s1.xi.push_back(1);
    s0.xi.insert(s0.xi.end(), cyl.xi.begin(), cyl.xi.end());
    s1.xi.insert(s1.xi.end(), cyl.xi.begin(), cyl.xi.end());
    const Eigen::MatrixXd sum = w_matrix(T, s0) + w_matrix(T, s1);

    const auto n = static_cast<Eigen::Index>(cyl.F.size());
    Eigen::MatrixXd two_sided(n, n), row_shift(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            const double delta = r == c ? 1.0 : 0.0;
            const double t2 = T.entry(cyl.F[r] + 1, cyl.F[c] + 1);
            const double t1 = T.entry(cyl.F[r] + 1, cyl.F[c]);
            two_sided(r, c) = 2.0 * (cyl.xi[r] == 1 ? t2 : delta - t2);
            row_shift(r, c) = 2.0 * (cyl.xi[r] == 1 ? t1 : delta - t1);
        }
    }

    ShiftRecursionReport rep;
    Eigen::RowVectorXd first = Eigen::RowVectorXd::Zero(n + 1);
    first(0) = 1.0;
    const double head = (sum.row(0) - first).cwiseAbs().maxCoeff();
    if (n == 0) {
        rep.two_sided = head;
        rep.row_shift = head;
        return rep;
    }
    const Eigen::MatrixXd lower = sum.bottomRightCorner(n, n);
    rep.two_sided = std::max(head, (lower - two_sided).cwiseAbs().maxCoeff());
    rep.row_shift = std::max(head, (lower - row_shift).cwiseAbs().maxCoeff());
    rep.coupling = sum.bottomLeftCorner(n, 1).cwiseAbs().maxCoeff();
    return rep;
}

std::vector<int> sample_configuration(const Kernel& T, int n, std::uint64_t seed) {
    if (n < 0 || n > kMaxSampleOrder) throw ValidationError("sample_configuration: n must lie in [0, 24]");
    CounterRng rng(seed);
    CylinderSpec prefix;
    double mass = 1.0;
    for (int i = 1; i <= n; ++i) {
        prefix.F.push_back(i);
        prefix.xi.push_back(1);
        const double joint = cylinder_prob(T, prefix);
        const double cond = mass > 0.0 ? joint / mass : 0.0;
        if (cond < -1e-9 || cond > 1.0 + 1e-9)
            throw NumericError("sample_configuration: conditional probability " + fmt(cond) + " at index " +
                               std::to_string(i), {cond});
        if (rng.uniform() < cond) {
            mass = joint;
        } else {
            prefix.xi.back() = 0;
            mass = mass - joint;
        }
    }
    return prefix.xi;
}

}  // namespace ifsf
