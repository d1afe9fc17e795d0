#include "ifsf/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
    ifsf::RunConfig config;
    std::string names;
    for (const auto& s : ifsf::subcommands()) names += (names.empty() ? "" : ", ") + s;

    CLI::App app{"Fourier transforms of IFS and determinantal measures.\n"
                 "Each run writes <out>.csv and <out>.json. Without --out the basename is\n"
                 "$IFSF_OUT_DIR/<subcommand> (or ./<subcommand>)."};
    app.add_option("subcommand", config.subcommand, "One of: " + names)->required();
    app.add_option("--spec", config.spec, "JSON spec: a file path or inline JSON text")->required();
    app.add_option("--out", config.out, "Artifact basename");
    app.add_option("--tol", config.tol, "Tolerance for products and limits");
    app.add_option("--depth", config.depth, "Fixed product depth (ifs-transform) or max order (limits)");
    app.add_option("--kmax", config.kmax, "Largest k or n scanned");
    app.add_option("--seed", config.seed, "Seed recorded in the header");
    app.add_option("--grid", config.grid, "Frequency or t grid a:b:n");
    CLI11_PARSE(app, argc, argv);

    return ifsf::run(config, std::cout, std::cerr);
}
