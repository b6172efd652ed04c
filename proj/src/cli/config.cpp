#include "boltzlab/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace boltzlab::cli {

namespace {

enum class Kind { integer, number, boolean, string, number_list, string_list };

using Check = std::function<std::string(const Json&)>;

struct Field {
    std::string key;
    Kind kind;
    Json def;
    Check check;
};

using Schema = std::vector<Field>;

std::string describe(Kind k) {
    switch (k) {
        case Kind::integer: return "an integer";
        case Kind::number: return "a number";
        case Kind::boolean: return "a boolean";
        case Kind::string: return "a string";
        case Kind::number_list: return "an array of numbers";
        case Kind::string_list: return "an array of strings";
    }
    return "a value";
}

bool has_kind(const Json& v, Kind k) {
    switch (k) {
        case Kind::integer: return v.is_number_integer();
        case Kind::number: return v.is_number();
        case Kind::boolean: return v.is_boolean();
        case Kind::string: return v.is_string();
        case Kind::number_list:
            return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_number(); });
        case Kind::string_list:
            return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_string(); });
    }
    return false;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

Check range(double lo, double hi, bool open_lo = false) {
    return [=](const Json& v) -> std::string {
        const double x = v.get<double>();
        if (!std::isfinite(x) || (open_lo ? x <= lo : x < lo) || x > hi)
            return "must lie in " + std::string(open_lo ? "(" : "[") + fmt(lo) + ", " + fmt(hi) + "]";
        return "";
    };
}

Check positive(double hi = std::numeric_limits<double>::max()) { return range(0.0, hi, true); }

Check each_positive(std::size_t min_len = 1) {
    return [=](const Json& v) -> std::string {
        if (v.size() < min_len) return "needs at least " + std::to_string(min_len) + " entries";
        for (const auto& e : v)
            if (!(e.get<double>() > 0.0) || !std::isfinite(e.get<double>())) return "entries must be positive";
        return "";
    };
}

Check one_of(std::vector<std::string> allowed) {
    return [allowed](const Json& v) -> std::string {
        const auto s = v.get<std::string>();
        if (std::find(allowed.begin(), allowed.end(), s) != allowed.end()) return "";
        std::string msg = "must be one of";
        for (const auto& a : allowed) msg += " '" + a + "'";
        return msg;
    };
}

Check subset_of(std::vector<std::string> allowed) {
    return [allowed](const Json& v) -> std::string {
        for (const auto& e : v) {
            const auto s = e.get<std::string>();
            if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
                std::string msg = "unknown entry '" + s + "'; allowed:";
                for (const auto& a : allowed) msg += " '" + a + "'";
                return msg;
            }
        }
        return "";
    };
}

std::string suggestion(const std::string& key, const std::vector<std::string>& known) {
    std::string best;
    int bd = std::numeric_limits<int>::max();
    for (const auto& k : known) {
        const int dd = edit_distance(key, k);
        if (dd < bd) {
            bd = dd;
            best = k;
        }
    }
    const int limit = std::max<int>(2, static_cast<int>(key.size()) / 3);
    if (!best.empty() && bd <= limit) return "; did you mean '" + best + "'?";
    return "";
}

std::string path_of(const std::string& block, const std::string& key) { return block.empty() ? key : block + "." + key; }

Json normalize(const Json& in, const Schema& schema, const std::string& block) {
    if (!in.is_object()) throw ConfigError("block '" + block + "' must be an object");
    std::vector<std::string> known;
    for (const auto& f : schema) known.push_back(f.key);
    for (auto it = in.begin(); it != in.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ConfigError("unknown key '" + path_of(block, it.key()) + "'" + suggestion(it.key(), known));
    Json out = Json::object();
    for (const auto& f : schema) {
        Json v = in.contains(f.key) ? in.at(f.key) : f.def;
        if (!has_kind(v, f.kind))
            throw ConfigError("key '" + path_of(block, f.key) + "' must be " + describe(f.kind));
        if (f.kind == Kind::number) v = v.get<double>();
        if (f.kind == Kind::number_list) {
            Json a = Json::array();
            for (const auto& e : v) a.push_back(e.get<double>());
            v = a;
        }
        if (f.check) {
            const std::string err = f.check(v);
            if (!err.empty()) throw ConfigError("key '" + path_of(block, f.key) + "' " + err);
        }
        out[f.key] = v;
    }
    return out;
}

bool uses_grid(const std::string& cmd) {
    return cmd == "collide" || cmd == "taylor-check" || cmd == "solve-local" || cmd == "viscosity-sweep" ||
           cmd == "continue-global" || cmd == "singular-demo";
}

Schema grid_schema(const std::string& cmd) {
    const bool inhom = cmd == "viscosity-sweep" || cmd == "singular-demo";
    int d = 2, n_v = 25, n_x = 1;
    double ve = 6.0, xe = 0.0;
    if (cmd == "collide") d = 3, n_v = 21, ve = 5.0;
    if (cmd == "taylor-check") n_v = 33, ve = 5.0;
    if (inhom) d = 1, n_x = 97, xe = 6.0, n_v = 65, ve = 4.0;
    return {
        {"d", Kind::integer, d, range(1, 3)},
        {"mode", Kind::string, inhom ? "inhomogeneous" : "homogeneous", one_of({"homogeneous", "inhomogeneous"})},
        {"n_x", Kind::integer, n_x, range(1, 4097)},
        {"x_extent", Kind::number, xe, range(0.0, 1e6)},
        {"n_v", Kind::integer, n_v, range(3, 4097)},
        {"v_extent", Kind::number, ve, positive()},
    };
}

Schema local_fields(double nu, double delta) {
    return {
        {"viscosity", Kind::number, nu, range(0.0, 1e3)},
        {"delta", Kind::number, delta, positive(1.0)},
        {"tol", Kind::number, 1e-8, positive(1.0)},
        {"max_iter", Kind::integer, 40, range(1, 10000)},
        {"representation", Kind::string, "parametrix", one_of({"parametrix", "gaussian-split", "transport-exact"})},
        {"kernel", Kind::string, "oracle", one_of({"oracle", "levy"})},
        {"levy_order", Kind::integer, 3, range(0, 8)},
        {"time_panels", Kind::integer, 16, range(1, 4096)},
        {"s", Kind::number, 7.0, positive(100.0)},
        {"collisions", Kind::boolean, true, nullptr},
        {"sphere_nodes", Kind::integer, 0, range(0, 1024)},
        {"interpolation", Kind::string, "cubic_bspline", one_of({"cubic_bspline", "multilinear"})},
        {"gauss_hermite_nodes", Kind::integer, 6, range(1, 20)},
        {"levy_validity", Kind::number, 0.05, positive()},
    };
}

Schema concat(Schema a, const Schema& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Schema block_schema(const std::string& cmd) {
    if (cmd == "collide")
        return {
            {"checks", Kind::string_list, Json::array(),
             subset_of({"maxwellian", "moments", "refinement", "h-theorem"})},
            {"sphere_nodes", Kind::integer, 0, range(0, 1024)},
            {"interpolation", Kind::string, "cubic_bspline", one_of({"cubic_bspline", "multilinear"})},
            {"vstar_extent", Kind::number, 0.0, range(0.0, 1e6)},
            {"samples", Kind::integer, 5, range(1, 1000)},
            {"h_samples", Kind::integer, 20, range(1, 1000)},
            {"tolerance", Kind::number, 0.01, positive()},
            {"refinement_coarse_n_v", Kind::integer, 0, range(0, 4097)},
            {"refinement_ratio_limit", Kind::number, 0.65, positive()},
            {"h_refined_n_v", Kind::integer, 0, range(0, 4097)},
            {"maxwellian_a", Kind::number, 1.0, positive()},
            {"maxwellian_c", Kind::number, 1.0, positive()},
            {"maxwellian_b", Kind::number_list, Json::array(), nullptr},
            {"perturbation", Kind::number, 0.3, range(0.0, 0.99)},
        };
    if (cmd == "taylor-check")
        return {
            {"data", Kind::string, "bump", one_of({"bump", "maxwellian", "random"})},
            {"n_theta", Kind::integer, 8, range(1, 64)},
            {"sphere_nodes", Kind::integer, 0, range(0, 1024)},
            {"tolerance", Kind::number, 0.05, positive()},
        };
    if (cmd == "kernel-check")
        return {
            {"d", Kind::integer, 1, range(1, 3)},
            {"viscosity", Kind::number, 0.1, positive()},
            {"levy_order", Kind::integer, 3, range(0, 8)},
            {"levy_probes", Kind::integer, 20, range(1, 10000)},
            {"levy_tau", Kind::number, 0.2, positive()},
            {"levy_speed", Kind::number, 0.7, range(0.0, 100.0)},
            {"levy_offset", Kind::number, 0.5, range(0.0, 100.0)},
            {"levy_tolerance", Kind::number, 0.05, positive()},
            {"validity", Kind::number, 0.05, positive()},
            {"mc_paths", Kind::integer, 100000, range(100, 1e8)},
            {"mc_steps", Kind::integer, 200, range(1, 1e6)},
            {"mc_tau", Kind::number, 0.2, positive()},
            {"mc_start", Kind::number_list, Json::array({0.0, 0.5}), nullptr},
            {"mc_sigmas", Kind::number, 3.0, positive()},
            {"adjoint_probes", Kind::integer, 20, range(1, 10000)},
            {"adjoint_tolerance", Kind::number, 1e-12, positive()},
            {"fit_viscosity", Kind::number, 0.1, positive()},
            {"fit_taus", Kind::number_list, Json::array({0.005, 0.01, 0.02}), each_positive()},
            {"fit_speeds", Kind::number_list, Json::array({0.0, 0.5, 1.0, 2.0, 3.0}), nullptr},
            {"calibration_speed", Kind::number, 1.0, positive()},
            {"fit_levy", Kind::boolean, true, nullptr},
        };
    if (cmd == "moment-bound")
        return {
            {"lipschitz", Kind::number, 1.0, positive()},
            {"viscosity", Kind::number, 0.01, positive()},
            {"delta0", Kind::number, 0.2, positive()},
            {"m", Kind::integer, 6, range(1, 23)},
            {"halvings", Kind::integer, 4, range(1, 30)},
            {"k_max", Kind::integer, 12, range(1, 23)},
        };
    if (cmd == "solve-local")
        return concat(local_fields(1e-2, 0.5),
                      {
                          {"data", Kind::string, "bump", one_of({"bump", "maxwellian", "smooth", "singular"})},
                          {"alpha0", Kind::number, 1.0, positive()},
                          {"target_ratio", Kind::number, 0.5, positive(1.0)},
                          {"max_halvings", Kind::integer, 8, range(0, 60)},
                          {"compare_viscosities", Kind::number_list, Json::array({1e-1, 1e-2, 1e-3}), nullptr},
                          {"agreement", Kind::number, 0.2, positive()},
                          {"positivity_tol", Kind::number, 1e-6, positive()},
                      });
    if (cmd == "viscosity-sweep")
        return concat(local_fields(1e-2, 0.5),
                      {
                          {"viscosities", Kind::number_list, Json::array({1e-1, 1e-2, 1e-3, 1e-4}), each_positive(2)},
                          {"data", Kind::string, "smooth", one_of({"smooth", "singular"})},
                          {"alpha0", Kind::number, 1.0, positive()},
                          {"oracle", Kind::boolean, true, nullptr},
                          {"oracle_tolerance", Kind::number, 0.02, positive()},
                          {"min_exponent", Kind::number, 0.5, range(-100.0, 100.0)},
                      });
    if (cmd == "continue-global")
        return concat(local_fields(1e-2, 0.5),
                      {
                          {"T", Kind::number, 2.0, positive(1e6)},
                          {"delta0", Kind::number, 1.0 / 9.0, positive(1.0)},
                          {"bound_constant", Kind::number, 0.0, range(0.0, 1e300)},
                          {"positivity_tol", Kind::number, 1e-6, positive()},
                          {"data", Kind::string, "bump", one_of({"bump", "maxwellian", "smooth", "singular"})},
                          {"alpha0", Kind::number, 1.0, positive()},
                      });
    if (cmd == "entropy")
        return {
            {"s", Kind::number, 7.0, positive(1e3)},
            {"d", Kind::integer, 3, range(1, 3)},
            {"cutoffs", Kind::number_list, Json::array({5.0, 10.0, 20.0, 40.0}), each_positive(2)},
            {"compare_s", Kind::number, 20.0, range(0.0, 1e3)},
            {"radial_panels_per_unit", Kind::integer, 8, range(1, 1000)},
            {"radial_order", Kind::integer, 8, range(1, 64)},
            {"angular_nodes", Kind::integer, 48, range(1, 1024)},
            {"grid_n", Kind::integer, 9, range(3, 65)},
            {"grid_extent", Kind::number, 3.0, positive()},
            {"random_pairs", Kind::integer, 20, range(1, 10000)},
        };
    if (cmd == "singular-demo")
        return concat(local_fields(1e-2, 0.5),
                      {
                          {"alpha0", Kind::number, 1.0, positive()},
                          {"viscosities", Kind::number_list, Json::array({1e-1, 1e-2, 1e-3}), each_positive(3)},
                          {"cauchy_factor", Kind::number, 2.0, range(1.0, 1e6)},
                      });
    throw ConfigError("unknown command '" + cmd + "'");
}

void cross_checks(const std::string& cmd, const Json& grid, Json& p) {
    if (!grid.is_null()) {
        const bool inhom = grid.at("mode") == "inhomogeneous";
        if (inhom && (grid.at("n_x").get<int>() < 3 || !(grid.at("x_extent").get<double>() > 0.0)))
            throw ConfigError("key 'grid.n_x' must be at least 3 and 'grid.x_extent' positive on an inhomogeneous grid");
        if ((cmd == "collide" || cmd == "taylor-check") && inhom)
            throw ConfigError("key 'grid.mode' must be 'homogeneous' for " + cmd);
        if ((cmd == "viscosity-sweep" || cmd == "singular-demo") && !inhom)
            throw ConfigError("key 'grid.mode' must be 'inhomogeneous' for " + cmd + " (the oracle is free transport)");
        if (cmd == "taylor-check" && grid.at("d").get<int>() < 2)
            throw ConfigError("key 'grid.d' must be 2 or 3 for taylor-check");
        if (cmd == "collide" && grid.at("d").get<int>() < 2)
            throw ConfigError("key 'grid.d' must be 2 or 3 for collide");
        if (inhom && grid.at("d").get<int>() > 2)
            throw ConfigError("key 'grid.d' must be 1 or 2 on an inhomogeneous grid (phase space has at most 4 axes here)");
    }
    if (cmd == "collide") {
        // The H-theorem pass refines the grid to 2n-1 and is only cheap in d = 2.
        if (p.at("checks").empty())
            p["checks"] = grid.at("d").get<int>() == 2
                              ? Json::array({"maxwellian", "moments", "refinement", "h-theorem"})
                              : Json::array({"maxwellian", "moments", "refinement"});
        const auto& b = p.at("maxwellian_b");
        const int d = grid.at("d").get<int>();
        if (b.empty()) p["maxwellian_b"] = Json(std::vector<double>(static_cast<std::size_t>(d), 0.0));
        else if (static_cast<int>(b.size()) != d)
            throw ConfigError("key 'collide.maxwellian_b' must have grid.d = " + std::to_string(d) + " entries");
    }
    if (cmd == "kernel-check" && static_cast<int>(p.at("mc_start").size()) != 2 * p.at("d").get<int>())
        throw ConfigError("key 'kernel-check.mc_start' must have 2d entries (position then velocity)");
    if (cmd == "continue-global") {
        const double T = p.at("T").get<double>(), d0 = p.at("delta0").get<double>();
        const double rule = 1.0 / ((1.0 + T) * (1.0 + T));
        if (!(d0 > 0.0 && d0 < 1.0) || d0 > rule * (1.0 + 1e-12)) {
            std::ostringstream os;
            os.precision(17);
            os << "key 'continue-global.delta0' = " << d0 << " violates the step rule 0 < delta0 <= 1/(1+T)^2 = "
               << rule << " for T = " << T;
            throw ConfigError(os.str());
        }
    }
    if (cmd == "moment-bound" && p.at("k_max").get<int>() < 2)
        throw ConfigError("key 'moment-bound.k_max' must be at least 2 (R_1 and R_2 are checked)");
    if (cmd == "entropy") {
        const auto& c = p.at("cutoffs");
        for (std::size_t i = 1; i < c.size(); ++i)
            if (!(c[i].get<double>() > c[i - 1].get<double>()))
                throw ConfigError("key 'entropy.cutoffs' must be strictly increasing");
        if (!(p.at("s").get<double>() > 2.0 * p.at("d").get<int>()))
            throw ConfigError("key 'entropy.s' must exceed 2d so that the profile is integrable");
    }
    if (p.contains("compare_viscosities"))
        for (const auto& e : p.at("compare_viscosities"))
            if (!(e.get<double>() > 0.0)) throw ConfigError("key 'solve-local.compare_viscosities' entries must be positive");
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"collide",        "taylor-check",    "kernel-check",
                                                "moment-bound",   "solve-local",     "viscosity-sweep",
                                                "continue-global", "entropy",        "singular-demo"};
    return names;
}

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

Json RunConfig::effective() const {
    Json j = Json::object();
    j["command"] = command;
    j["seed"] = seed;
    j["threads"] = threads;
    j["output_dir"] = output_dir;
    if (!grid.is_null()) j["grid"] = grid;
    j[command] = params;
    return j;
}

RunConfig parse_config(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc);
}

RunConfig parse_config(const Json& doc) {
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    if (!doc.contains("command")) throw ConfigError("missing required key 'command'");
    if (!doc.at("command").is_string()) throw ConfigError("key 'command' must be a string");
    RunConfig rc;
    rc.command = doc.at("command").get<std::string>();
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), rc.command) == names.end())
        throw ConfigError("key 'command' has unknown value '" + rc.command + "'" + suggestion(rc.command, names));

    const bool needs_grid = uses_grid(rc.command);
    std::vector<std::string> known{"command", "seed", "threads", "output_dir", rc.command};
    if (needs_grid) known.push_back("grid");
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
            std::string extra;
            if (it.key() == "grid") extra = " (command '" + rc.command + "' does not use a grid)";
            else if (std::find(names.begin(), names.end(), it.key()) != names.end())
                extra = " (parameter block of another command)";
            throw ConfigError("unknown key '" + it.key() + "'" + (extra.empty() ? suggestion(it.key(), known) : extra));
        }

    const Json top = normalize(
        Json{{"seed", doc.value("seed", Json(1))}, {"threads", doc.value("threads", Json(1))},
             {"output_dir", doc.value("output_dir", Json("out"))}},
        {{"seed", Kind::integer, 1, range(0.0, 9.0e15)},
         {"threads", Kind::integer, 1, range(1, 256)},
         {"output_dir", Kind::string, "out", [](const Json& v) { return v.get<std::string>().empty() ? "must not be empty" : ""; }}},
        "");
    rc.seed = top.at("seed").get<std::uint64_t>();
    rc.threads = top.at("threads").get<int>();
    rc.output_dir = top.at("output_dir").get<std::string>();

    if (needs_grid) {
        if (!doc.contains("grid")) throw ConfigError("missing required block 'grid' for command '" + rc.command + "'");
        rc.grid = normalize(doc.at("grid"), grid_schema(rc.command), "grid");
        try {
            grid_from(rc.grid);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("key 'grid': ") + e.what());
        }
    }
    rc.params = normalize(doc.contains(rc.command) ? doc.at(rc.command) : Json::object(), block_schema(rc.command),
                          rc.command);
    cross_checks(rc.command, rc.grid, rc.params);
    return rc;
}

PhaseGrid grid_from(const Json& g) {
    const int d = g.at("d").get<int>();
    if (g.at("mode") == "homogeneous") return PhaseGrid::homogeneous(d, g.at("n_v").get<int>(), g.at("v_extent").get<double>());
    return PhaseGrid::inhomogeneous(d, g.at("n_x").get<int>(), g.at("x_extent").get<double>(), g.at("n_v").get<int>(),
                                    g.at("v_extent").get<double>());
}

}  // namespace boltzlab::cli
