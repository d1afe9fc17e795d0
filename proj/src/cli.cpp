#include "ifsf/cli.hpp"

#include "ifsf/algebraic.hpp"
#include "ifsf/chaos.hpp"
#include "ifsf/detmeasure.hpp"
#include "ifsf/errors.hpp"
#include "ifsf/fourier.hpp"
#include "ifsf/ifs.hpp"
#include "ifsf/induced.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace ifsf {

using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> parse_grid(const std::string& text) {
    double a = 0.0, b = 0.0;
    long n = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof())
        throw ValidationError("grid must look like a:b:n, got '" + text + "'");
    if (n < 1 || n > 100000) throw ValidationError("grid point count must lie in [1, 100000]");
    std::vector<double> g(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) g[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

namespace {

class Csv {
public:
    explicit Csv(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    template <typename... Cells>
    void row(const Cells&... cells) {
        std::vector<std::string> r{cell(cells)...};
        if (r.size() != columns_.size()) throw std::logic_error("csv row width mismatch");
        rows_.push_back(std::move(r));
    }

    std::string str() const {
        std::string s;
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
            s += "\n";
        };
        line(columns_);
        for (const auto& r : rows_) line(r);
        return s;
    }

private:
    static std::string cell(double x) { return format_double(x); }
    static std::string cell(const std::string& x) { return x; }
    static std::string cell(const char* x) { return x; }
    static std::string cell(bool x) { return x ? "1" : "0"; }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(long x) { return std::to_string(x); }

    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

struct Outcome {
    explicit Outcome(std::vector<std::string> columns) : csv(std::move(columns)) {}

    Csv csv;
    json results = json::object();
    std::string summary;
};

void write_atomic(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ValidationError("cannot write output file " + path.string());
        f << text;
        if (!f) throw ValidationError("cannot write output file " + path.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw ValidationError("cannot move output into place at " + path.string() + ": " + ec.message());
}

json load_spec(const std::string& spec) {
    if (spec.empty()) throw ValidationError("--spec is required");
    std::string text = spec;
    const auto first = spec.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || spec[first] != '{') {
        std::ifstream f(spec);
        if (!f) throw ValidationError("cannot read spec file " + spec);
        std::stringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    try {
        json j = json::parse(text);
        if (!j.is_object()) throw ValidationError("spec must be a JSON object");
        return j;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed spec: ") + e.what());
    }
}

template <typename T>
T field(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("spec field '") + key + "': " + e.what());
    }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? field<T>(j, key) : fallback;
}

std::string poly_text(const json& j, const char* key = "poly") {
    if (!j.contains(key)) throw ValidationError(std::string("spec field '") + key + "' is required");
    const json& v = j.at(key);
    return v.is_string() ? v.get<std::string>() : v.dump();
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
    return s;
}

double tol_of(const RunConfig& c, double fallback) {
    const double t = c.tol.value_or(fallback);
    if (!(t > 0.0)) throw ValidationError("--tol must be positive");
    return t;
}

long kmax_of(const RunConfig& c, long fallback) {
    const long k = c.kmax.value_or(fallback);
    if (k < 0) throw ValidationError("--kmax must be non-negative");
    return k;
}

std::vector<double> grid_of(const RunConfig& c, const char* fallback) {
    return parse_grid(c.grid.empty() ? std::string(fallback) : c.grid);
}

Outcome pisot_certify(const RunConfig&, const json& spec) {
    const auto p = IntPolynomial::parse(poly_text(spec));
    const auto cert = certify_pisot(p);
    Outcome o({"index", "re", "im", "modulus", "residual", "dominant"});
    for (std::size_t i = 0; i < cert.roots.roots.size(); ++i) {
        const auto z = cert.roots.roots[i];
        o.csv.row(static_cast<long>(i), z.real(), z.imag(), std::abs(z), cert.roots.residuals[i],
                  static_cast<int>(i) == cert.roots.dominant);
    }
    o.results = {{"polynomial", p.to_string()}, {"verdict", to_string(cert.verdict)}, {"reason", cert.reason}};
    if (cert.context) {
        o.results["alpha"] = cert.context->alpha();
        o.results["conjugate_max"] = cert.context->conjugate_max();
    }
    o.summary = to_string(cert.verdict) + (cert.reason.empty() ? "" : ": " + cert.reason);
    return o;
}

Outcome pisot_trace(const RunConfig& c, const json& spec) {
    const PisotContext ctx = require_pisot(IntPolynomial::parse(poly_text(spec)));
    const long kmax = kmax_of(c, 40);
    Outcome o({"k", "trace", "dist", "offset"});
    for (long k = 0; k <= kmax; ++k) {
        const auto m = ctx.alpha_pow_mod1(k);
        o.csv.row(k, ctx.trace(k).str(), m.value, m.offset);
    }
    o.results = {{"alpha", ctx.alpha()}, {"conjugate_max", ctx.conjugate_max()}, {"kmax", kmax}};
    o.summary = "s_" + std::to_string(kmax) + " = " + ctx.trace(kmax).str();
    return o;
}

Outcome ifs_transform(const RunConfig& c, const json& spec) {
    const AffineIFS ifs = AffineIFS::from_json(field<json>(spec, "ifs"));
    Eigen::VectorXd dir = Eigen::VectorXd::Ones(ifs.dim());
    if (spec.contains("direction")) {
        const auto d = field<std::vector<double>>(spec, "direction");
        if (static_cast<int>(d.size()) != ifs.dim()) throw ValidationError("direction dimension mismatch");
        dir = Eigen::Map<const Eigen::VectorXd>(d.data(), ifs.dim());
    }
    const double tol = tol_of(c, kDefaultProductTol);
    Outcome o({"xi", "re", "im", "abs", "depth", "tail_bound"});
    for (double s : grid_of(c, "0:4:41")) {
        const Eigen::VectorXd xi = s * dir;
        const ProductEvaluation e = c.depth ? mu_hat_at_depth(ifs, xi, *c.depth) : mu_hat(ifs, xi, tol);
        o.csv.row(s, e.value.real(), e.value.imag(), std::abs(e.value), e.depth, e.tail_bound);
    }
    o.results = {{"ifs", ifs.to_json()}, {"direction", std::vector<double>(dir.data(), dir.data() + dir.size())}};
    o.summary = "evaluated mu_hat on the grid";
    return o;
}

DigitLine scan_line(const json& spec, double lambda) {
    const std::string system = field_or<std::string>(spec, "system", "bernoulli");
    if (system == "bernoulli") return bernoulli_line(lambda);
    if (system == "simplex") return simplex_line(field_or<int>(spec, "d", 2), lambda);
    if (system == "direction") {
        const auto w = field<std::vector<double>>(spec, "direction");
        if (w.size() != 2) throw ValidationError("direction must have two entries");
        return direction_line(lambda, w[0], w[1]);
    }
    throw ValidationError("unknown system '" + system + "' (bernoulli, simplex, direction)");
}

json scan_json(const ErdosScan& s) {
    json j{{"floor", s.floor}, {"tail_bound", s.tail_bound}, {"max_split_residual", s.max_residual},
           {"certified", s.certified}};
    if (s.certified) {
        j["theta"] = s.theta;
        j["theta_N"] = s.theta_N;
        j["N"] = s.N;
        j["head_constant"] = s.head_constant;
        j["theta_product"] = s.theta_product;
        j["tail_floor"] = s.tail_floor;
        j["certified_bound"] = s.certified_bound;
    } else {
        j["experimental"] = true;
    }
    return j;
}

void scan_rows(Csv& csv, const ErdosScan& s, const std::vector<double>* extra = nullptr) {
    for (std::size_t i = 0; i < s.ks.size(); ++i) {
        const Complex v = s.values[i];
        if (extra) {
            csv.row(s.ks[i], v.real(), v.imag(), s.abs_values[i], s.split_residuals[i], s.depths[i], (*extra)[i]);
        } else {
            csv.row(s.ks[i], v.real(), v.imag(), s.abs_values[i], s.split_residuals[i], s.depths[i]);
        }
    }
}

Outcome erdos(const RunConfig& c, const json& spec) {
    const PisotContext ctx = require_pisot(IntPolynomial::parse(poly_text(spec)));
    const DigitLine line = scan_line(spec, ctx.lambda());
    const ErdosScan s = erdos_scan(line, ctx, kmax_of(c, 40), tol_of(c, kDefaultProductTol));
    Outcome o({"k", "re", "im", "abs", "split_residual", "depth"});
    scan_rows(o.csv, s);
    o.results = scan_json(s);
    o.results["alpha"] = ctx.alpha();
    o.summary = "floor " + format_double(s.floor);
    return o;
}

Outcome pisot_matrix(const RunConfig& c, const json& spec) {
    const PisotContext ctx = require_pisot(IntPolynomial::parse(poly_text(spec)));
    const auto r = pisot_matrix_scan(ctx, field_or<double>(spec, "b", 0.7), field_or<double>(spec, "c", 2.0),
                                     kmax_of(c, 25), tol_of(c, kDefaultProductTol));
    Outcome o({"k", "re", "im", "abs", "split_residual", "depth", "general_residual"});
    scan_rows(o.csv, r.scan, &r.general_residuals);
    o.results = scan_json(r.scan);
    o.results["reduction_residual"] = r.reduction_residual;
    o.results["max_general_residual"] = r.max_general_residual;
    o.results["ifs"] = r.ifs.to_json();
    o.summary = "floor " + format_double(r.scan.floor);
    return o;
}

Outcome det_cylinder(const RunConfig&, const json& spec) {
    const Kernel T = Kernel::from_json(field<json>(spec, "kernel"));
    const CylinderSpec cyl = CylinderSpec::from_json(field<json>(spec, "cylinder"));
    const double p = cylinder_prob(T, cyl);
    Outcome o({"F", "xi", "probability"});
    o.csv.row(join(cyl.F), join(cyl.xi), p);
    o.results = {{"probability", p}, {"kernel", T.to_json()}};
    o.summary = format_double(p);
    return o;
}

Outcome det_consistency(const RunConfig&, const json& spec) {
    const Kernel T = Kernel::from_json(field<json>(spec, "kernel"));
    int max_index = field_or<int>(spec, "max_index", 7);
    const int max_size = field_or<int>(spec, "max_size", 3);
    if (T.support() >= 0) max_index = std::min(max_index, T.support());
    if (max_index < 1 || max_index > 16 || max_size < 0) throw ValidationError("need 1 <= max_index <= 16, max_size >= 0");

    Outcome o({"F", "k", "residual", "min_det", "max_det"});
    double worst = 0.0;
    long checks = 0;
    for (std::uint32_t mask = 0; mask < (1U << max_index); ++mask) {
        std::vector<int> F;
        for (int i = 0; i < max_index; ++i)
            if ((mask >> i) & 1U) F.push_back(i + 1);
        if (static_cast<int>(F.size()) > max_size) continue;
        for (int k = 1; k <= max_index; ++k) {
            if ((mask >> (k - 1)) & 1U) continue;
            const auto r = consistency_check(T, F, k);
            o.csv.row(join(F), k, r.residual, r.min_det, r.max_det);
            worst = std::max(worst, r.residual);
            ++checks;
        }
    }
    o.results = {{"max_residual", worst}, {"checks", checks}, {"kernel", T.to_json()}};
    o.summary = "max residual " + format_double(worst) + " over " + std::to_string(checks) + " insertions";
    return o;
}

InducedSystem induced_system(const json& spec) {
    return InducedSystem(field<double>(spec, "lambda"), Kernel::from_json(field<json>(spec, "kernel")));
}

Outcome induced_transform(const RunConfig& c, const json& spec) {
    const InducedSystem sys = induced_system(spec);
    const double tol = tol_of(c, kLimitTol);
    const int n_max = c.depth.value_or(kLimitMaxOrder);
    Outcome o({"t", "re", "im", "abs", "n_used", "stagnation", "converged"});
    long unconverged = 0;
    for (double t : grid_of(c, "-2:2:41")) {
        const auto r = nu_hat_det(sys, t, tol, n_max);
        if (!r.converged) ++unconverged;
        o.csv.row(t, r.value.real(), r.value.imag(), std::abs(r.value), r.n_used, r.stagnation, r.converged);
    }
    o.results = {{"kernel", sys.kernel.to_json()}, {"lambda", sys.lambda}, {"unconverged", unconverged}};
    o.summary = unconverged ? std::to_string(unconverged) + " grid points did not converge" : "all grid points converged";
    return o;
}

Outcome toeplitz_compare(const RunConfig& c, const json& spec) {
    const double p = field<double>(spec, "p"), a = field<double>(spec, "a");
    const double lambda = field<double>(spec, "lambda"), t = field<double>(spec, "t");
    const long n_max = kmax_of(c, 12);
    if (n_max < 1) throw ValidationError("--kmax must be at least 1");
    Outcome o({"n", "det_re", "det_im", "product_re", "product_im", "deviation", "ratio", "printed_gap",
                   "expansion_gap"});
    double prev = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const auto r = toeplitz_product_approx(p, a, lambda, t, n);
        const double ratio = n > 1 && prev > 0.0 ? r.deviation / prev : std::numeric_limits<double>::quiet_NaN();
        double printed = std::numeric_limits<double>::quiet_NaN(), expansion = printed;
        if (n <= 16) {
            const auto e = toeplitz_exact_pn(p, a, lambda, t, n);
            printed = e.printed_gap;
            expansion = e.expansion_gap;
        }
        o.csv.row(static_cast<long>(n), r.det.real(), r.det.imag(), r.product.real(), r.product.imag(), r.deviation,
                  ratio, printed, expansion);
        prev = r.deviation;
    }
    o.results = {{"p", p}, {"a", a}, {"lambda", lambda}, {"t", t}};
    o.summary = "compared orders 1.." + std::to_string(n_max);
    return o;
}

Outcome det_lambda_cmd(const RunConfig& c, const json& spec) {
    const InducedSystem sys = induced_system(spec);
    const double tol = tol_of(c, kLimitTol);
    const int n_max = c.depth.value_or(kLimitMaxOrder);
    Outcome o({"t", "re", "im", "abs", "n_used", "stagnation", "converged", "nu_hat_gap"});
    const auto grid = grid_of(c, "-2:2:16");
    for (double t : grid) {
        const auto r = det_lambda(sys, t, tol, n_max);
        const double gap = std::abs(r.value - det_n(sys, t, r.n_used));
        o.csv.row(t, r.value.real(), r.value.imag(), std::abs(r.value), r.n_used, r.stagnation, r.converged, gap);
    }
    o.results = {{"kernel", sys.kernel.to_json()}, {"lambda", sys.lambda}};
    if (grid.size() <= 64) {
        const double ev = positive_definite_check(sys, grid, tol);
        o.results["gram_min_eigenvalue"] = ev;
        o.summary = "Gram min eigenvalue " + format_double(ev);
    } else {
        o.summary = "grid too large for the Gram check";
    }
    return o;
}

Outcome chaos_scan(const RunConfig& c, const json& spec) {
    const auto cert = certify_pisot(IntPolynomial::parse(poly_text(spec)));
    std::optional<PisotContext> ctx = cert.context;
    const double lambda = ctx ? ctx->lambda() : field<double>(spec, "lambda");
    const auto digits = field_or<std::vector<double>>(spec, "digits", {-1.0, 1.0});
    if (digits.size() != 2) throw ValidationError("chaos-scan expects two digits");
    const AffineIFS ifs = two_map_ifs(lambda, digits[0], digits[1], field_or<double>(spec, "p", 0.5));
    const long n_max = kmax_of(c, 20);

    Outcome o({"n", "t_n", "witness_xi", "bound"});
    if (ctx) {
        const auto s = separation_scan(ifs, *ctx, n_max, tol_of(c, kDefaultProductTol));
        for (std::size_t i = 0; i < s.ns.size(); ++i) o.csv.row(s.ns[i], s.ts[i], s.witnesses[i], s.bounds[i]);
        o.results["floor"] = s.floor;
    }
    const double eps = field_or<double>(spec, "eps", 1e-6);
    const auto cls = chaos_classify(ifs, ctx, eps, n_max, tol_of(c, kDefaultProductTol));
    o.results["verdict"] = to_string(cls.verdict);
    o.results["reason"] = cls.reason;
    o.results["eps"] = eps;
    o.summary = to_string(cls.verdict);
    return o;
}

using Handler = std::function<Outcome(const RunConfig&, const json&)>;

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> table{
        {"pisot-certify", pisot_certify},
        {"pisot-trace", pisot_trace},
        {"ifs-transform", ifs_transform},
        {"erdos-scan", erdos},
        {"pisot-matrix-scan", pisot_matrix},
        {"det-cylinder", det_cylinder},
        {"det-consistency", det_consistency},
        {"induced-transform", induced_transform},
        {"toeplitz-compare", toeplitz_compare},
        {"det-lambda", det_lambda_cmd},
        {"chaos-scan", chaos_scan},
    };
    return table;
}

json config_json(const RunConfig& c) {
    json j{{"subcommand", c.subcommand}, {"spec", c.spec}, {"out", c.out}, {"seed", c.seed}, {"grid", c.grid}};
    j["tol"] = c.tol ? json(*c.tol) : json(nullptr);
    j["depth"] = c.depth ? json(*c.depth) : json(nullptr);
    j["kmax"] = c.kmax ? json(*c.kmax) : json(nullptr);
    return j;
}

std::filesystem::path output_base(const RunConfig& c) {
    if (!c.out.empty()) return c.out;
    const char* dir = std::getenv("IFSF_OUT_DIR");
    return std::filesystem::path(dir && *dir ? dir : ".") / c.subcommand;
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, _] : handlers()) v.push_back(name);
        return v;
    }();
    return names;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    try {
        const auto it = handlers().find(config.subcommand);
        if (it == handlers().end()) throw ValidationError("unknown subcommand '" + config.subcommand + "'");
        const json spec = load_spec(config.spec);
        Outcome o = it->second(config, spec);

        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json header{{"version", kVersion}, {"config", config_json(config)}, {"spec", spec},
                    {"results", o.results}, {"wall_time_s", wall}};
        const auto base = output_base(config);
        if (base.has_parent_path() && !std::filesystem::is_directory(base.parent_path()))
            throw ValidationError("output directory " + base.parent_path().string() + " does not exist");
        auto csv_path = base, json_path = base;
        csv_path += ".csv";
        json_path += ".json";
        write_atomic(csv_path, o.csv.str());
        write_atomic(json_path, header.dump(2) + "\n");
        out << o.summary << "\n";
        return 0;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace ifsf
