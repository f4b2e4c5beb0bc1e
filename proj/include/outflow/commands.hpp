#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "outflow/background.hpp"
#include "outflow/errors.hpp"
#include "outflow/run_config.hpp"

namespace outflow {

// Everything a run derives from its configuration before time stepping.
struct RunSetup {
    RunConfig config;
    PlanarProfile profile;
    FlattenedGrid grid;
    Extension extension;
    BackgroundState background;
    FlowProblem problem;
    double beta = 0.0;
};

std::unique_ptr<RunSetup> build_setup(const RunConfig& cfg);
FieldState initial_state(const RunSetup& s);

nlohmann::json error_json(const Error& e);

struct CommandOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
};

// Runs one subcommand (profile, evolve, steady, verify, report) and returns the process exit code.
// Errors are written as JSON to `err` and to <out>/error.json.
int run_command(const std::string& name, const CommandOptions& opt, std::ostream& log, std::ostream& err);

}  // namespace outflow
