#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phl/commands.hpp"
#include "phl/parallel.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Cyclic Higgs bundles, para-complex harmonic maps and their developing maps"};
    app.require_subcommand(1);

    phl::CommandOptions options;
    std::string out;
    double tol = 0.0;
    unsigned threads = 0;
    std::size_t probe = 0;
    std::vector<CLI::Option*> tol_options;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", options.config, "run configuration (INI)")->required();
        sub->add_option("--out", out, "output directory (overrides report.out)");
        tol_options.push_back(sub->add_option("--tol", tol, "solver tolerance (overrides solver.tol)"));
        sub->add_option("--threads", threads, "worker threads (default: PHL_THREADS, then all cores)");
        sub->add_flag("--corrupt", options.corrupt, "negate one connection entry (negative control)");
    };
    for (const auto& [name, help] : {std::pair{"solve", "solve the Hitchin system"},
                                     std::pair{"verify", "run every invariant check on the solution"},
                                     std::pair{"immerse", "integrate the frame along the path"},
                                     std::pair{"seq", "harmonic sequence and isotropic order"},
                                     std::pair{"gauss", "Gauss map residuals"}}) {
        add_common(app.add_subcommand(name, help));
    }
    CLI::App* devmap = app.add_subcommand("devmap", "developing map of the Fuchsian case (m = 1)");
    add_common(devmap);
    devmap->add_flag("--check-anchor", options.check_anchor, "check the anchor value of the section");
    CLI::Option* probe_option =
        devmap->add_option("--probe-injectivity", probe, "number of low-discrepancy samples for the collision probe");

    CLI::App* moduli = app.add_subcommand("moduli", "dimensions of the moduli strata");
    moduli->add_option("m", options.m, "rank parameter")->required();
    moduli->add_option("g", options.genus, "genus")->required();
    moduli->add_option("d", options.degree, "degree")->required();
    moduli->add_flag("--json", options.json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : phl::exit_validation;
    }

    const CLI::App* sub = app.get_subcommands().front();
    if (!out.empty()) options.out = out;
    for (const CLI::Option* opt : tol_options) {
        if (opt->count() > 0) options.tol = tol;
    }
    if (probe_option->count() > 0) options.probe_injectivity = probe;
    if (threads > 0) phl::set_worker_count(threads);

    return phl::run_command(sub->get_name(), options, std::cout, std::cerr);
}
