#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "outflow/commands.hpp"
#include "outflow/run_config.hpp"
#include "outflow/snapshot_io.hpp"

using namespace outflow;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("outflow_cli_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

json small_1d() {
    return json::parse(R"({
      "schema_version": 1,
      "far_field": {"rho": 3.0, "u": -2.0, "theta": 1.0},
      "planar_boundary": {"u_b": -1.99, "theta_b": 1.0},
      "grid": {"n1": 51, "length": 10.0},
      "profile": {"tol": 1e-4},
      "solver": {"cfl": 0.8, "convection": "upwind2", "t_end": 2.0, "snapshot_dt": 0.5},
      "initial": {"bumps": [{"field": "u1", "amplitude": 1e-3, "center": 2.0, "width": 1.0}],
                  "noise_amplitude": 1e-5}
    })");
}

std::string write_config(const fs::path& dir, const json& j, const std::string& name = "config.json") {
    const fs::path p = dir / name;
    std::ofstream(p) << j.dump(2);
    return p.string();
}

int run(const std::string& cmd, const std::string& cfg, const fs::path& out, json* error = nullptr) {
    std::ostringstream log, err;
    const int rc = run_command(cmd, {cfg, out.string(), std::nullopt}, log, err);
    if (error && !err.str().empty()) *error = json::parse(err.str());
    return rc;
}

}  // namespace

TEST_CASE("config parsing rejects unknown keys, wrong types and schema versions") {
    json j = small_1d();
    j["grid"]["nodes"] = 10;
    try {
        parse_config(j);
        FAIL("expected unknown_key");
    } catch (const ConfigError& e) {
        CHECK(e.kind() == "unknown_key");
        CHECK(std::string(e.what()).find("nodes") != std::string::npos);
    }
    j = small_1d();
    j["grid"]["n1"] = "many";
    try {
        parse_config(j);
        FAIL("expected type_mismatch");
    } catch (const ConfigError& e) {
        CHECK(e.kind() == "type_mismatch");
    }
    j = small_1d();
    j["schema_version"] = 99;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = small_1d();
    j["solver"]["cfl"] = 1.5;
    CHECK_THROWS_AS(parse_config(j).validate(), ConfigError);
}

TEST_CASE("config round-trips through its resolved form") {
    const RunConfig a = parse_config(small_1d());
    const json resolved = to_json(a);
    const RunConfig b = parse_config(resolved);
    CHECK(to_json(b) == resolved);
    CHECK(b.grid.n1 == 51);
    CHECK(b.solver.convection == Convection::upwind2);
    CHECK(b.initial.bumps.size() == 1);
    CHECK_FALSE(b.diagnostics.beta.has_value());
}

TEST_CASE("config file errors") {
    TempDir d("files");
    CHECK_THROWS_AS(load_config((d.path / "missing.json").string()), ConfigError);
    std::ofstream(d.path / "bad.json") << "{ not json";
    try {
        load_config((d.path / "bad.json").string());
        FAIL("expected invalid_json");
    } catch (const ConfigError& e) {
        CHECK(e.kind() == "invalid_json");
    }
}

TEST_CASE("config reference lists every section") {
    const std::string ref = config_reference();
    for (const char* key : {"far_field.rho", "grid.n1", "solver.cfl", "diagnostics.beta", "shape.modes", "seed"})
        CHECK(ref.find(key) != std::string::npos);
}

TEST_CASE("profile command: flat and canonical data") {
    TempDir d("profile");
    json flat = small_1d();
    flat["planar_boundary"] = {{"u_b", -2.0}, {"theta_b", 1.0}};
    REQUIRE(run("profile", write_config(d.path, flat), d.path / "flat") == 0);
    const json ff = json::parse(slurp(d.path / "flat" / "profile_fit.json"));
    CHECK(ff["fit_present"] == false);
    CHECK(ff["alpha_fit"].is_null());
    CHECK(ff["schema_version"] == output_schema_version);

    json canon = small_1d();
    canon["far_field"]["rho"] = 1.0;
    canon["grid"] = {{"n1", 401}, {"length", 40.0}};
    REQUIRE(run("profile", write_config(d.path, canon), d.path / "canon") == 0);
    const json cf = json::parse(slurp(d.path / "canon" / "profile_fit.json"));
    CHECK(cf["fit_present"] == true);
    CHECK(cf["alpha_fit"].get<double>() > 0);
    const std::string csv = slurp(d.path / "canon" / "profile.csv");
    CHECK(csv.substr(0, csv.find('\n')).find("x") == 0);
    CHECK(fs::exists(d.path / "canon" / "config_resolved.json"));
}

TEST_CASE("subsonic far field exits with a domain error") {
    TempDir d("subsonic");
    json j = small_1d();
    j["far_field"]["u"] = -1.0;
    j["planar_boundary"]["u_b"] = -0.99;
    json err;
    CHECK(run("profile", write_config(d.path, j), d.path / "out", &err) == 2);
    CHECK(err["error"]["kind"] == "subsonic_far_field");
    CHECK(err["schema_version"] == output_schema_version);
    CHECK(fs::exists(d.path / "out" / "error.json"));
}

TEST_CASE("missing config and unknown command exit with a config error") {
    TempDir d("missing");
    json err;
    CHECK(run("evolve", (d.path / "nope.json").string(), d.path / "out", &err) == 1);
    CHECK(err["error"]["kind"] == "missing_config");
    CHECK(run("launch", write_config(d.path, small_1d()), d.path / "out") == 1);
}

TEST_CASE("evolve is deterministic for a fixed seed") {
    TempDir d("evolve");
    const std::string cfg = write_config(d.path, small_1d());
    REQUIRE(run("evolve", cfg, d.path / "a") == 0);
    REQUIRE(run("evolve", cfg, d.path / "b") == 0);
    const std::string a = slurp(d.path / "a" / "diagnostics.csv");
    CHECK(a == slurp(d.path / "b" / "diagnostics.csv"));
    CHECK(slurp(d.path / "a" / "evolve_summary.json") == slurp(d.path / "b" / "evolve_summary.json"));
    CHECK(slurp(d.path / "a" / "snapshots" / "snap_00004.bin") == slurp(d.path / "b" / "snapshots" / "snap_00004.bin"));
    CHECK(std::count(a.begin(), a.end(), '\n') == 6);

    std::ostringstream log, err;
    REQUIRE(run_command("evolve", {cfg, (d.path / "c").string(), 7}, log, err) == 0);
    CHECK(slurp(d.path / "c" / "diagnostics.csv") != a);
    CHECK(json::parse(slurp(d.path / "c" / "config_resolved.json"))["seed"] == 7);

    const FieldState last = read_snapshot((d.path / "a" / "snapshots" / "snap_00004").string());
    CHECK(last.t == doctest::Approx(2.0));

    REQUIRE(run("report", cfg, d.path / "a") == 0);
    const json rep = json::parse(slurp(d.path / "a" / "report.json"));
    CHECK(rep["schema_version"] == output_schema_version);
}

TEST_CASE("constant-state evolve gives a flat diagnostics series") {
    TempDir d("flat");
    json j = small_1d();
    j["planar_boundary"] = {{"u_b", -2.0}, {"theta_b", 1.0}};
    j["initial"] = {{"base", "far_field"}};
    REQUIRE(run("evolve", write_config(d.path, j), d.path / "out") == 0);
    std::istringstream csv(slurp(d.path / "out" / "diagnostics.csv"));
    std::string line;
    std::getline(csv, line);
    while (std::getline(csv, line)) {
        const std::string norm = line.substr(line.find(',') + 1, line.find(',', line.find(',') + 1) - line.find(',') - 1);
        CHECK(std::stod(norm) == 0.0);
    }
}

TEST_CASE("blow-up exits 3 and leaves the last good snapshot") {
    TempDir d("blowup");
    json j = small_1d();
    j["solver"]["fixed_dt"] = 0.5;
    j["initial"]["bumps"][0]["amplitude"] = 0.5;
    json err;
    CHECK(run("evolve", write_config(d.path, j), d.path / "out", &err) == 3);
    CHECK(err["error"]["kind"] == "blow_up");
    const std::string last = err["error"]["last_snapshot"];
    CHECK(fs::exists(last + ".bin"));
    CHECK(fs::exists(last + ".hdr"));
}

TEST_CASE("flat steady run certifies zero residuals") {
    TempDir d("steady");
    json j = small_1d();
    j["planar_boundary"] = {{"u_b", -2.0}, {"theta_b", 1.0}};
    j["initial"] = {{"base", "far_field"}};
    REQUIRE(run("steady", write_config(d.path, j), d.path / "out") == 0);
    const json cert = json::parse(slurp(d.path / "out" / "certificate.json"));
    CHECK(cert["converged"] == true);
    CHECK(cert["residual_order2"]["total"] == 0.0);
    CHECK(cert["residual_order4"]["total"].get<double>() <= 1e-12);
    CHECK(fs::exists(d.path / "out" / "stationary.bin"));
}
