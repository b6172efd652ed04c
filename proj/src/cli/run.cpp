#include "boltzlab/cli/run.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "boltzlab/parallel.hpp"

namespace boltzlab::cli {

namespace {

Json assertion_json(const Assertion& a) {
    return Json{{"name", a.name},     {"pass", a.pass},     {"value", a.value},
                {"limit", a.limit},   {"detail", a.detail}, {"informational", a.informational}};
}

void write_manifest(const std::string& dir, const Json& m) {
    std::filesystem::create_directories(dir);
    save_text((std::filesystem::path(dir) / "manifest.json").string(), dump_json(m));
}

}  // namespace

std::string resolve_output_dir(const std::optional<std::string>& flag, const RunConfig& cfg) {
    if (flag && !flag->empty()) return *flag;
    if (const char* env = std::getenv("BOLTZLAB_OUT"); env && *env) return env;
    return cfg.output_dir;
}

RunResult run(const RunConfig& cfg, const std::string& out_dir) {
    RunResult res;
    res.out_dir = out_dir;
    set_worker_count(cfg.threads);
    Json m = Json::object();
    m["command"] = cfg.command;
    m["config"] = cfg.effective();
    m["seed"] = cfg.seed;
    m["threads"] = cfg.threads;

    std::filesystem::create_directories(out_dir);
    save_text((std::filesystem::path(out_dir) / "config.json").string(), dump_json(cfg.effective()));

    const auto t0 = std::chrono::steady_clock::now();
    try {
        res.output = run_experiment(cfg);
        res.status = res.output.all_pass() ? kExitPass : kExitFail;
    } catch (const ConfigError& e) {
        res.status = kExitConfig;
        res.error = e.what();
    } catch (const std::exception& e) {
        res.status = kExitFail;
        res.error = e.what();
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Json files = Json::array();
    for (const auto& [name, text] : res.output.files) {
        save_text((std::filesystem::path(out_dir) / name).string(), text);
        files.push_back(name);
    }
    Json as = Json::array();
    for (const auto& a : res.output.assertions) as.push_back(assertion_json(a));
    m["wall_time_s"] = wall;
    m["status"] = res.status == kExitPass ? "pass" : (res.error.empty() ? "fail" : "error");
    m["exit_code"] = res.status;
    m["error"] = res.error;
    m["assertions"] = as;
    m["files"] = files;
    m["summary"] = res.output.summary;
    res.manifest = m;
    write_manifest(out_dir, m);
    return res;
}

int cli_main(int argc, char** argv) {
    CLI::App app{"boltzlab: numerical experiments for the Boltzmann equation"};
    app.require_subcommand(1, 1);
    std::string config_path;
    std::optional<std::string> out;
    std::optional<int> threads;
    for (const auto& name : command_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out, "output directory (overrides BOLTZLAB_OUT and output_dir)");
        sub->add_option("--threads", threads, "worker count (overrides the config)")->check(CLI::Range(1, 256));
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    RunConfig cfg;
    try {
        std::ifstream is(config_path);
        if (!is) throw ConfigError("cannot open config file '" + config_path + "'");
        std::ostringstream ss;
        ss << is.rdbuf();
        cfg = parse_config(ss.str());
        if (cfg.command != command)
            throw ConfigError("key 'command' is '" + cfg.command + "' but the command line asks for '" + command + "'");
        if (threads) cfg.threads = *threads;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        RunConfig stub;
        stub.command = command;
        const std::string dir = resolve_output_dir(out, stub);
        if (out || std::getenv("BOLTZLAB_OUT")) {
            Json m{{"command", command}, {"status", "error"}, {"exit_code", kExitConfig}, {"error", e.what()}};
            try {
                write_manifest(dir, m);
            } catch (const std::exception&) {
            }
        }
        return kExitConfig;
    }

    const std::string dir = resolve_output_dir(out, cfg);
    RunResult r;
    try {
        r = run(cfg, dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    for (const auto& a : r.output.assertions)
        std::cout << (a.informational ? "INFO " : (a.pass ? "PASS " : "FAIL ")) << a.name << " value=" << format_double(a.value)
                  << " limit=" << format_double(a.limit) << (a.detail.empty() ? "" : " (" + a.detail + ")") << "\n";
    if (!r.error.empty()) std::cerr << (r.status == kExitConfig ? "configuration error: " : "error: ") << r.error << "\n";
    std::cout << "status=" << r.manifest.at("status").get<std::string>() << " output=" << dir << "\n";
    return r.status;
}

}  // namespace boltzlab::cli
