#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "boltzlab/cli/config.hpp"
#include "boltzlab/cli/experiments.hpp"
#include "boltzlab/cli/run.hpp"

using namespace boltzlab;
using namespace boltzlab::cli;

namespace {

RunConfig parse(const std::string& text) { return parse_config(text); }

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream is(p);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("boltzlab_test_cli_" + name);
    std::filesystem::remove_all(p);
    return p;
}

Json small_sweep() {
    return Json::parse(R"({"command": "viscosity-sweep",
        "grid": {"d": 1, "mode": "inhomogeneous", "n_x": 25, "x_extent": 5, "n_v": 25, "v_extent": 4},
        "viscosity-sweep": {"viscosities": [0.1, 0.01, 0.001], "delta": 0.25, "time_panels": 2}})");
}

}  // namespace

TEST_CASE("minimal collide config is completed with defaults") {
    const auto cfg = parse(R"({"command": "collide", "grid": {"d": 2, "n_v": 17}})");
    CHECK(cfg.command == "collide");
    CHECK(cfg.grid["d"] == 2);
    CHECK(cfg.grid["n_v"] == 17);
    CHECK(cfg.grid["mode"] == "homogeneous");
    CHECK(cfg.params["tolerance"].get<double>() == 0.01);
    CHECK(cfg.seed == 1);
    const auto g = grid_from(cfg.grid);
    CHECK(g.d() == 2);
    CHECK(g.n_v() == 17);
}

TEST_CASE("effective config reparses to itself") {
    const auto cfg = parse(R"({"command": "continue-global", "grid": {"d": 2, "n_v": 13, "v_extent": 5}})");
    const auto again = parse_config(cfg.effective());
    CHECK(again.effective() == cfg.effective());
}

TEST_CASE("misspelled keys are rejected with a suggestion") {
    const auto e = error_of(R"({"command": "solve-local", "grid": {"d": 2, "n_v": 13},
                               "solve-local": {"viscocity": 0.01}})");
    CHECK(e.find("viscocity") != std::string::npos);
    CHECK(e.find("did you mean 'viscosity'") != std::string::npos);
    CHECK(error_of(R"({"command": "colide"})").find("did you mean 'collide'") != std::string::npos);
    CHECK(error_of(R"({"command": "collide", "grid": {"d": 2, "nv": 17}})").find("'n_v'") != std::string::npos);
}

TEST_CASE("the step rule is enforced with its bound quoted") {
    const auto e = error_of(R"({"command": "continue-global", "grid": {"d": 2, "n_v": 13},
                               "continue-global": {"T": 2, "delta0": 0.2}})");
    CHECK(e.find("delta0") != std::string::npos);
    CHECK(e.find("step rule") != std::string::npos);
    CHECK(error_of(R"({"command": "continue-global", "grid": {"d": 2, "n_v": 13},
                       "continue-global": {"T": 2, "delta0": 0.1111111111111111}})") == "");
}

TEST_CASE("type, range and structure errors name the key") {
    CHECK(error_of(R"({"command": "collide", "grid": {"d": "two"}})").find("grid.d") != std::string::npos);
    CHECK(error_of(R"({"command": "collide", "grid": {"d": 4}})").find("grid.d") != std::string::npos);
    CHECK(error_of(R"({"command": "collide", "grid": {"d": 2, "n_v": 16}})").find("n_v") != std::string::npos);
    CHECK(error_of(R"({"command": "collide", "threads": 0, "grid": {"d": 2}})").find("threads") != std::string::npos);
    CHECK(error_of(R"({"command": "collide"})").find("grid") != std::string::npos);
    CHECK(error_of("{not json").find("JSON") != std::string::npos);
    CHECK(error_of(R"({"command": "entropy", "entropy": {"s": 7, "cutoffs": [5, 4]}})") != "");
}

TEST_CASE("edit distance") {
    CHECK(edit_distance("viscocity", "viscosity") == 1);
    CHECK(edit_distance("", "abc") == 3);
    CHECK(edit_distance("kitten", "sitting") == 3);
}

TEST_CASE("Rng is deterministic and uniform in [0, 1)") {
    Rng a(42), b(42);
    double sum = 0;
    for (int i = 0; i < 10000; ++i) {
        const double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    CHECK(sum / 10000 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("output directory precedence: flag, environment, config") {
    RunConfig cfg;
    cfg.output_dir = "from_config";
    ::unsetenv("BOLTZLAB_OUT");
    CHECK(resolve_output_dir(std::nullopt, cfg) == "from_config");
    ::setenv("BOLTZLAB_OUT", "from_env", 1);
    CHECK(resolve_output_dir(std::nullopt, cfg) == "from_env");
    CHECK(resolve_output_dir(std::string("from_flag"), cfg) == "from_flag");
    ::unsetenv("BOLTZLAB_OUT");
}

TEST_CASE("a run writes config echo, CSVs and a manifest with 17-digit values") {
    const auto dir = scratch("entropy");
    const auto cfg = parse(R"({"command": "entropy", "seed": 5})");
    const auto r = run(cfg, dir.string());
    CHECK(r.status == kExitPass);
    const auto m = Json::parse(read_file(dir / "manifest.json"));
    CHECK(m["command"] == "entropy");
    CHECK(m["seed"] == 5);
    CHECK(m["status"] == "pass");
    CHECK(m["wall_time_s"].get<double>() >= 0.0);
    CHECK(m["config"] == cfg.effective());
    CHECK(!m["assertions"].empty());
    CHECK(Json::parse(read_file(dir / "config.json")) == cfg.effective());
    REQUIRE(!m["files"].empty());
    for (const auto& f : m["files"]) {
        const auto text = read_file(dir / f.get<std::string>());
        std::istringstream is(text);
        std::string line;
        std::getline(is, line);
        CHECK(!line.empty());
        while (std::getline(is, line)) {
            std::istringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ',')) {
                char* end = nullptr;
                const double x = std::strtod(cell.c_str(), &end);
                if (end == cell.c_str() || *end != '\0' || !std::isfinite(x)) continue;
                CHECK(format_double(x) == cell);
            }
        }
    }
}

TEST_CASE("exit codes: assertion failure is 1, experiment-level config error is 2") {
    const auto fail = run(parse(R"({"command": "moment-bound"})"), scratch("moment").string());
    CHECK(fail.status == kExitFail);
    CHECK(fail.manifest["status"] == "fail");

    auto j = small_sweep();
    j["grid"]["d"] = 2;
    j["grid"]["n_x"] = 5;
    j["grid"]["n_v"] = 5;
    j["viscosity-sweep"]["oracle"] = true;
    j["viscosity-sweep"]["collisions"] = true;
    const auto err = run(parse_config(j), scratch("oracle").string());
    CHECK(err.status == kExitConfig);
    CHECK(!err.error.empty());
    CHECK(err.manifest["error"] == err.error);
}

TEST_CASE("CSV output is byte-identical across worker counts") {
    auto j = small_sweep();
    j["threads"] = 1;
    const auto a = run(parse_config(j), scratch("t1").string());
    j["threads"] = 4;
    const auto b = run(parse_config(j), scratch("t4").string());
    REQUIRE(a.output.files.size() == b.output.files.size());
    REQUIRE(!a.output.files.empty());
    for (std::size_t i = 0; i < a.output.files.size(); ++i) CHECK(a.output.files[i] == b.output.files[i]);
}

TEST_CASE("cli_main parses the command line") {
    const auto dir = scratch("main");
    std::filesystem::create_directories(dir);
    const auto path = (dir / "cfg.json").string();
    save_text(path, R"({"command": "entropy"})");
    const auto out = (dir / "out").string();
    {
        const char* argv[] = {"boltzlab", "entropy", "--config", path.c_str(), "--out", out.c_str(), "--threads", "2"};
        CHECK(cli_main(8, const_cast<char**>(argv)) == kExitPass);
        CHECK(std::filesystem::exists(std::filesystem::path(out) / "manifest.json"));
    }
    {
        const char* argv[] = {"boltzlab", "collide", "--config", path.c_str(), "--out", out.c_str()};
        CHECK(cli_main(6, const_cast<char**>(argv)) == kExitConfig);
    }
    {
        const std::string bad = (dir / "bad.json").string();
        save_text(bad, R"({"command": "solve-local", "grid": {"d": 2}, "solve-local": {"viscocity": 1}})");
        const char* argv[] = {"boltzlab", "solve-local", "--config", bad.c_str(), "--out", out.c_str()};
        CHECK(cli_main(6, const_cast<char**>(argv)) == kExitConfig);
        const auto m = Json::parse(read_file(std::filesystem::path(out) / "manifest.json"));
        CHECK(m["error"].get<std::string>().find("did you mean 'viscosity'") != std::string::npos);
    }
    {
        const char* argv[] = {"boltzlab", "entropy"};
        CHECK(cli_main(2, const_cast<char**>(argv)) == kExitConfig);
    }
}
