#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ifsf {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    std::string subcommand;
    std::string spec;  // path to a JSON file, or the JSON text itself
    std::string out;   // artifact basename; defaults to $IFSF_OUT_DIR/<subcommand>
    std::optional<double> tol;
    std::optional<int> depth;
    std::optional<long> kmax;
    std::uint64_t seed = 0;
    std::string grid;  // "a:b:n"
};

const std::vector<std::string>& subcommands();

/// Runs one subcommand, writing <out>.csv and <out>.json. Returns 0 on success,
/// 2 on invalid input, 3 on numerical failure. Diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// "%.17g"
std::string format_double(double x);

/// n evenly spaced points from "a:b:n".
std::vector<double> parse_grid(const std::string& text);

}  // namespace ifsf
