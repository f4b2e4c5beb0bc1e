#include <iostream>

#include <CLI11.hpp>

#include "outflow/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Compressible outflow solver and stability audits"};
    app.require_subcommand(0, 1);
    bool reference = false;
    app.add_flag("--config-reference", reference, "Print every configuration key with its default and exit");

    outflow::CommandOptions opt;
    std::uint64_t seed = 0;
    const char* descriptions[][2] = {
        {"profile", "Solve the planar profile; writes profile.csv and profile_fit.json"},
        {"evolve", "Time-evolve the configured initial state; writes snapshots and diagnostics.csv"},
        {"steady", "March to a stationary state; writes the stationary snapshot and certificate.json"},
        {"verify", "Run the property audits; writes verify.json"},
        {"report", "Summarise diagnostics.csv from a previous evolve run; writes report.json"},
    };
    for (auto& d : descriptions) {
        CLI::App* sub = app.add_subcommand(d[0], d[1]);
        sub->add_option("--config", opt.config_path, "Run configuration (JSON)")->required();
        sub->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--seed", seed, "Seed for random initial perturbations (overrides the config)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    if (reference) {
        std::cout << outflow::config_reference();
        return 0;
    }
    const auto subs = app.get_subcommands();
    if (subs.empty()) {
        std::cerr << app.help();
        return 1;
    }
    CLI::App* sub = subs.front();
    if (sub->count("--seed") > 0) opt.seed = seed;
    return outflow::run_command(sub->get_name(), opt, std::cout, std::cerr);
}
