#include "igeo/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace igeo {

using nlohmann::json;

std::vector<double> TauGrid::materialize(double def_start, double def_end,
                                         std::size_t def_points, bool def_log) const {
    const double t0 = start.value_or(def_start);
    const double t1 = end.value_or(def_end);
    const std::size_t n = grid_points.value_or(def_points);
    const bool log_spaced = log_grid.value_or(def_log);

    if (!(t1 > t0))
        throw ConfigError("tau.end must exceed tau.start (got start=" + std::to_string(t0) +
                          ", end=" + std::to_string(t1) + ")");
    if (!(t0 >= 0.0))
        throw ConfigError("tau.start must be >= 0");
    if (n < 2)
        throw ConfigError("tau.grid_points must be >= 2");
    if (log_spaced && !(t0 > 0.0))
        throw ConfigError("tau.start must be positive for a log grid");

    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(n - 1);
        grid[i] = log_spaced ? t0 * std::pow(t1 / t0, f) : t0 + f * (t1 - t0);
    }
    grid.front() = t0;
    grid.back() = t1;
    return grid;
}

ModelParams RunConfig::model() const { return ModelParams(l, r, lambda, xi); }

std::size_t SweepSpec::grid_size() const {
    return r.values.size() * lambda.values.size() * xi.values.size() * l.size();
}

namespace {

// Strict parse: reject duplicate keys via the SAX-adjacent callback.
json parse_strict(const std::string& text, const std::string& origin) {
    std::vector<std::set<std::string>> key_stack;
    std::vector<std::string> duplicates;

    json::parser_callback_t cb = [&](int /*depth*/, json::parse_event_t event, json& parsed) {
        if (event == json::parse_event_t::object_start) {
            key_stack.emplace_back();
        } else if (event == json::parse_event_t::object_end) {
            key_stack.pop_back();
        } else if (event == json::parse_event_t::key) {
            const std::string key = parsed.get<std::string>();
            if (!key_stack.empty() && !key_stack.back().insert(key).second)
                duplicates.push_back(key);
        }
        return true;
    };

    json j;
    try {
        j = json::parse(text, cb);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": parse error at byte " + std::to_string(e.byte) + ": " +
                          e.what());
    }
    if (!duplicates.empty()) {
        std::string msg = origin + ": duplicate key(s):";
        for (const auto& k : duplicates)
            msg += " " + k;
        throw ConfigError(msg);
    }
    if (!j.is_object())
        throw ConfigError(origin + ": top-level value must be an object");
    return j;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& origin, const std::string& scope) {
    std::vector<std::string> offenders;
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key()))
            offenders.push_back(it.key());
    if (!offenders.empty()) {
        std::string msg = origin + ": unknown key(s) in " + scope + ":";
        for (const auto& k : offenders)
            msg += " " + k;
        throw ConfigError(msg);
    }
}

double get_number(const json& j, const std::string& field, const std::string& origin) {
    if (!j.is_number())
        throw ConfigError(origin + ": " + field + " must be a number");
    return j.get<double>();
}

std::vector<double> get_number_list(const json& j, const std::string& field,
                                    const std::string& origin) {
    if (!j.is_array() || j.empty())
        throw ConfigError(origin + ": " + field + " must be a non-empty array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j)
        out.push_back(get_number(v, field, origin));
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SweepAxis parse_axis(const json& j, const std::string& field, const std::string& origin) {
    SweepAxis axis;
    if (j.is_array()) {
        axis.values = get_number_list(j, field, origin);
        return axis;
    }
    if (!j.is_object())
        throw ConfigError(origin + ": " + field + " must be an array or a {min,max,count} range");
    reject_unknown_keys(j, {"min", "max", "count"}, origin, field);
    if (!j.contains("min") || !j.contains("max") || !j.contains("count"))
        throw ConfigError(origin + ": " + field + " range needs min, max and count");
    const double lo = get_number(j.at("min"), field + ".min", origin);
    const double hi = get_number(j.at("max"), field + ".max", origin);
    const auto count = j.at("count");
    if (!count.is_number_unsigned() || count.get<std::size_t>() < 1)
        throw ConfigError(origin + ": " + field + ".count must be a positive integer");
    const std::size_t n = count.get<std::size_t>();
    if (n == 1) {
        axis.values = {lo};
        return axis;
    }
    if (!(hi > lo))
        throw ConfigError(origin + ": " + field + ".max must exceed min");
    axis.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        axis.values[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return axis;
}

} // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
    const json j = parse_strict(text, origin);
    reject_unknown_keys(j,
                        {"l", "r", "lambda", "xi", "tau", "tolerances", "density_mode", "output",
                         "seed"},
                        origin, "config");

    RunConfig cfg;

    if (j.contains("l")) {
        if (!j.at("l").is_number_unsigned() || j.at("l").get<std::size_t>() < 1)
            throw ConfigError(origin + ": l must be a positive integer");
        cfg.l = j.at("l").get<std::size_t>();
    }
    if (j.contains("r"))
        cfg.r = get_number_list(j.at("r"), "r", origin);
    if (j.contains("lambda"))
        cfg.lambda = get_number_list(j.at("lambda"), "lambda", origin);
    if (j.contains("xi"))
        cfg.xi = get_number_list(j.at("xi"), "xi", origin);

    // Length-1 vectors broadcast to l blocks.
    auto broadcast = [&](std::vector<double>& v, const char* name) {
        if (v.size() == 1 && cfg.l > 1)
            v.assign(cfg.l, v[0]);
        if (v.size() != cfg.l)
            throw ConfigError(origin + ": " + name + " has " + std::to_string(v.size()) +
                              " entries, expected l = " + std::to_string(cfg.l));
    };
    broadcast(cfg.r, "r");
    broadcast(cfg.lambda, "lambda");
    broadcast(cfg.xi, "xi");

    for (std::size_t k = 0; k < cfg.l; ++k) {
        if (!(cfg.r[k] > 0.0 && cfg.r[k] < 1.0))
            throw ConfigError(origin + ": r[" + std::to_string(k) + "] outside (0,1)");
        if (!(cfg.lambda[k] > 0.0))
            throw ConfigError(origin + ": lambda[" + std::to_string(k) + "] must be positive");
        if (!(cfg.xi[k] > 0.0))
            throw ConfigError(origin + ": xi[" + std::to_string(k) + "] must be positive");
    }

    if (j.contains("tau")) {
        const json& t = j.at("tau");
        if (!t.is_object())
            throw ConfigError(origin + ": tau must be an object");
        reject_unknown_keys(t, {"start", "end", "grid_points", "log_grid"}, origin, "tau");
        if (t.contains("start"))
            cfg.tau.start = get_number(t.at("start"), "tau.start", origin);
        if (t.contains("end"))
            cfg.tau.end = get_number(t.at("end"), "tau.end", origin);
        if (t.contains("grid_points")) {
            if (!t.at("grid_points").is_number_unsigned())
                throw ConfigError(origin + ": tau.grid_points must be a non-negative integer");
            cfg.tau.grid_points = t.at("grid_points").get<std::size_t>();
            if (*cfg.tau.grid_points < 2)
                throw ConfigError(origin + ": tau.grid_points must be >= 2");
        }
        if (t.contains("log_grid")) {
            if (!t.at("log_grid").is_boolean())
                throw ConfigError(origin + ": tau.log_grid must be a boolean");
            cfg.tau.log_grid = t.at("log_grid").get<bool>();
        }
        if (cfg.tau.start && cfg.tau.end && !(*cfg.tau.end > *cfg.tau.start))
            throw ConfigError(origin + ": tau.end must exceed tau.start");
    }

    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        if (!t.is_object())
            throw ConfigError(origin + ": tolerances must be an object");
        reject_unknown_keys(t, {"ode_rel", "ode_abs", "quadrature_abs", "fd_step"}, origin,
                            "tolerances");
        auto tol = [&](const char* name, double& slot) {
            if (t.contains(name)) {
                slot = get_number(t.at(name), std::string("tolerances.") + name, origin);
                if (!(slot > 0.0))
                    throw ConfigError(origin + ": tolerances." + name + " must be positive");
            }
        };
        tol("ode_rel", cfg.tolerances.ode_rel);
        tol("ode_abs", cfg.tolerances.ode_abs);
        tol("quadrature_abs", cfg.tolerances.quadrature_abs);
        tol("fd_step", cfg.tolerances.fd_step);
    }

    if (j.contains("density_mode")) {
        const auto& m = j.at("density_mode");
        if (!m.is_string())
            throw ConfigError(origin + ": density_mode must be a string");
        const std::string s = m.get<std::string>();
        if (s == "paper")
            cfg.density_mode = DensityMode::Paper;
        else if (s == "determinant")
            cfg.density_mode = DensityMode::Determinant;
        else
            throw ConfigError(origin + ": density_mode must be \"paper\" or \"determinant\"");
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        if (!o.is_object())
            throw ConfigError(origin + ": output must be an object");
        reject_unknown_keys(o, {"directory", "formats"}, origin, "output");
        if (o.contains("directory")) {
            if (!o.at("directory").is_string())
                throw ConfigError(origin + ": output.directory must be a string");
            cfg.output.directory = o.at("directory").get<std::string>();
        }
        if (o.contains("formats")) {
            if (!o.at("formats").is_array())
                throw ConfigError(origin + ": output.formats must be an array");
            cfg.output.csv = cfg.output.json = cfg.output.gnuplot = false;
            for (const auto& f : o.at("formats")) {
                const std::string s = f.is_string() ? f.get<std::string>() : "";
                if (s == "csv")
                    cfg.output.csv = true;
                else if (s == "json")
                    cfg.output.json = true;
                else if (s == "gnuplot-data")
                    cfg.output.gnuplot = true;
                else
                    throw ConfigError(origin + ": output.formats entries must be csv, json or "
                                               "gnuplot-data");
            }
        }
    }

    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned())
            throw ConfigError(origin + ": seed must be a non-negative integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }

    return cfg;
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path), path); }

SweepSpec parse_sweep_spec(const std::string& text, const std::string& origin) {
    const json j = parse_strict(text, origin);
    reject_unknown_keys(j, {"r", "lambda", "xi", "l", "ige_at_tau", "allow_large"}, origin,
                        "sweep spec");

    SweepSpec spec;
    if (j.contains("r"))
        spec.r = parse_axis(j.at("r"), "r", origin);
    if (j.contains("lambda"))
        spec.lambda = parse_axis(j.at("lambda"), "lambda", origin);
    if (j.contains("xi"))
        spec.xi = parse_axis(j.at("xi"), "xi", origin);
    if (j.contains("l")) {
        if (!j.at("l").is_array() || j.at("l").empty())
            throw ConfigError(origin + ": l must be a non-empty array of positive integers");
        spec.l.clear();
        for (const auto& v : j.at("l")) {
            if (!v.is_number_unsigned() || v.get<std::size_t>() < 1)
                throw ConfigError(origin + ": l entries must be positive integers");
            spec.l.push_back(v.get<std::size_t>());
        }
    }
    if (j.contains("ige_at_tau")) {
        spec.ige_at_tau = get_number_list(j.at("ige_at_tau"), "ige_at_tau", origin);
        for (double t : spec.ige_at_tau)
            if (!(t > 0.0))
                throw ConfigError(origin + ": ige_at_tau entries must be positive");
    }
    if (j.contains("allow_large")) {
        if (!j.at("allow_large").is_boolean())
            throw ConfigError(origin + ": allow_large must be a boolean");
        spec.allow_large = j.at("allow_large").get<bool>();
    }

    for (double v : spec.r.values)
        if (!(v > 0.0 && v < 1.0))
            throw ConfigError(origin + ": sweep r values must lie in (0,1)");
    for (double v : spec.lambda.values)
        if (!(v > 0.0))
            throw ConfigError(origin + ": sweep lambda values must be positive");
    for (double v : spec.xi.values)
        if (!(v > 0.0))
            throw ConfigError(origin + ": sweep xi values must be positive");

    return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
    return parse_sweep_spec(read_file(path), path);
}

void apply_model_overrides(RunConfig& cfg, std::optional<std::size_t> l,
                           std::optional<std::vector<double>> r,
                           std::optional<std::vector<double>> lambda,
                           std::optional<std::vector<double>> xi) {
    if (l) {
        if (*l < 1)
            throw ConfigError("--l must be a positive integer");
        cfg.l = *l;
    }
    if (r)
        cfg.r = *r;
    if (lambda)
        cfg.lambda = *lambda;
    if (xi)
        cfg.xi = *xi;

    auto broadcast = [&](std::vector<double>& v, const char* name) {
        if (v.empty())
            throw ConfigError(std::string(name) + " must be non-empty");
        if (v.size() == 1 && cfg.l > 1)
            v.assign(cfg.l, v[0]);
        if (v.size() != cfg.l)
            throw ConfigError(std::string(name) + " has " + std::to_string(v.size()) +
                              " entries, expected l = " + std::to_string(cfg.l));
    };
    broadcast(cfg.r, "r");
    broadcast(cfg.lambda, "lambda");
    broadcast(cfg.xi, "xi");

    for (std::size_t k = 0; k < cfg.l; ++k) {
        if (!(cfg.r[k] > 0.0 && cfg.r[k] < 1.0))
            throw ConfigError("r[" + std::to_string(k) + "] outside (0,1)");
        if (!(cfg.lambda[k] > 0.0))
            throw ConfigError("lambda[" + std::to_string(k) + "] must be positive");
        if (!(cfg.xi[k] > 0.0))
            throw ConfigError("xi[" + std::to_string(k) + "] must be positive");
    }
}

void apply_tau_overrides(RunConfig& cfg, std::optional<double> start, std::optional<double> end,
                         std::optional<std::size_t> points, std::optional<bool> log_grid) {
    if (start)
        cfg.tau.start = *start;
    if (end)
        cfg.tau.end = *end;
    if (points) {
        if (*points < 2)
            throw ConfigError("--tau-points must be >= 2");
        cfg.tau.grid_points = *points;
    }
    if (log_grid)
        cfg.tau.log_grid = *log_grid;
    if (cfg.tau.start && cfg.tau.end && !(*cfg.tau.end > *cfg.tau.start))
        throw ConfigError("tau.end must exceed tau.start");
}

} // namespace igeo
