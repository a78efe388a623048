#include "exporate/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "exporate/errors.hpp"
#include "exporate/rng.hpp"

namespace exporate {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& ctx) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ConfigError(ctx + ": unknown field '" + it.key() + "'");
        }
    }
}

std::vector<double> get_grid(const json& j, const char* key) {
    if (!j.at(key).is_array()) throw ConfigError(std::string("config: '") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& e : j.at(key)) {
        if (!e.is_number()) throw ConfigError(std::string("config: '") + key + "' entries must be numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

} // namespace

bool ExperimentConfig::wants_format(const std::string& f) const {
    return std::find(formats.begin(), formats.end(), f) != formats.end();
}

SuiteConfig ExperimentConfig::suite_config() const {
    SuiteConfig sc;
    sc.suite = suite;
    sc.n_traj = n_traj;
    sc.eps_grid = eps_grid;
    sc.b_grid = b_grid;
    sc.gamma_grid = gamma_grid;
    sc.R_grid = R_grid;
    sc.gamma = gamma;
    sc.es_eps_grid = es_eps_grid;
    sc.checks = checks;
    sc.sim.max_entries = max_entries;
    return sc;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    reject_unknown(j,
                   {"seed", "out_dir", "formats", "suite", "n_traj", "max_entries", "processes",
                    "eps_grid", "b_grid", "gamma_grid", "R_grid", "gamma", "es_eps_grid",
                    "methods", "windows", "tolerances"},
                   "config");

    ExperimentConfig cfg;
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("formats")) {
        cfg.formats.clear();
        for (const auto& f : j.at("formats")) {
            const auto s = f.get<std::string>();
            if (s != "csv" && s != "json" && s != "svg") {
                throw ConfigError("config: unknown format '" + s + "'");
            }
            cfg.formats.push_back(s);
        }
    }
    if (j.contains("suite")) cfg.suite = j.at("suite").get<std::string>();
    if (j.contains("n_traj")) {
        if (!j.at("n_traj").is_number_unsigned() && !j.at("n_traj").is_number_integer()) {
            throw ConfigError("config: 'n_traj' must be an integer");
        }
        const auto n = j.at("n_traj").get<long long>();
        if (n < 1) throw ConfigError("config: 'n_traj' must be >= 1");
        cfg.n_traj = static_cast<std::size_t>(n);
    }
    if (j.contains("max_entries")) cfg.max_entries = j.at("max_entries").get<std::size_t>();

    if (!j.contains("processes") || !j.at("processes").is_array()) {
        throw ConfigError("config: 'processes' array is required");
    }
    std::size_t idx = 0;
    for (const auto& pj : j.at("processes")) {
        json spec_json = pj;
        if (!spec_json.is_object()) throw ConfigError("config: process entries must be objects");
        if (!spec_json.contains("seed")) {
            // Derived per-process seed, stable under config order.
            spec_json["seed"] = CounterRng::mix64(cfg.seed ^ (0x9E3779B97F4A7C15ULL * (idx + 1)));
        }
        try {
            cfg.processes.push_back(ProcessSpec::from_json(spec_json.dump()));
        } catch (const InvalidParamsError& e) {
            throw ConfigError("config: processes[" + std::to_string(idx) + "]: " + e.what());
        }
        ++idx;
    }

    if (j.contains("eps_grid")) cfg.eps_grid = get_grid(j, "eps_grid");
    if (j.contains("b_grid")) cfg.b_grid = get_grid(j, "b_grid");
    if (j.contains("gamma_grid")) cfg.gamma_grid = get_grid(j, "gamma_grid");
    if (j.contains("R_grid")) cfg.R_grid = get_grid(j, "R_grid");
    if (j.contains("es_eps_grid")) cfg.es_eps_grid = get_grid(j, "es_eps_grid");
    if (j.contains("gamma")) cfg.gamma = j.at("gamma").get<double>();

    if (j.contains("methods")) {
        const json& m = j.at("methods");
        reject_unknown(m, {"expectation", "trajectory"}, "config.methods");
        if (m.contains("expectation")) {
            cfg.expectation_methods.clear();
            if (m.at("expectation").is_string()) {
                cfg.expectation_methods.push_back(
                    rate_method_from_string(m.at("expectation").get<std::string>()));
            } else {
                for (const auto& s : m.at("expectation")) {
                    cfg.expectation_methods.push_back(
                        rate_method_from_string(s.get<std::string>()));
                }
            }
            if (cfg.expectation_methods.empty()) {
                throw ConfigError("config.methods: 'expectation' must name at least one method");
            }
            cfg.checks.a_opts.method = cfg.expectation_methods.front();
        }
        if (m.contains("trajectory")) {
            cfg.checks.traj_method =
                rate_method_from_string(m.at("trajectory").get<std::string>());
        }
    }
    if (j.contains("windows")) {
        const json& w = j.at("windows");
        reject_unknown(w, {"expectation", "trajectory", "risk", "growth"}, "config.windows");
        auto frac = [&](const char* key, double fallback) {
            if (!w.contains(key)) return fallback;
            const double v = w.at(key).get<double>();
            if (!(v > 0.0) || v > 1.0) {
                throw ConfigError(std::string("config.windows: '") + key + "' must be in (0,1]");
            }
            return v;
        };
        cfg.checks.a_opts.window_fraction = frac("expectation", cfg.checks.a_opts.window_fraction);
        cfg.checks.traj_window = frac("trajectory", cfg.checks.traj_window);
        cfg.checks.risk_opts.window_fraction = frac("risk", cfg.checks.risk_opts.window_fraction);
        cfg.checks.growth_window = frac("growth", cfg.checks.growth_window);
    }
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        reject_unknown(t,
                       {"rate", "hitting_ratio_rel", "risk_se_mult", "censored_fraction",
                        "vacuous_margin", "growth", "growth_fraction", "barrier", "rel_se_cap",
                        "es_ratio", "cprime_offset"},
                       "config.tolerances");
        auto num = [&](const char* key, double fallback) {
            return t.contains(key) ? t.at(key).get<double>() : fallback;
        };
        cfg.checks.rate_tol = num("rate", cfg.checks.rate_tol);
        cfg.checks.ratio_rel_tol = num("hitting_ratio_rel", cfg.checks.ratio_rel_tol);
        cfg.checks.se_mult = num("risk_se_mult", cfg.checks.se_mult);
        cfg.checks.censor_cap = num("censored_fraction", cfg.checks.censor_cap);
        cfg.checks.vacuous_margin = num("vacuous_margin", cfg.checks.vacuous_margin);
        cfg.checks.growth_tol = num("growth", cfg.checks.growth_tol);
        cfg.checks.growth_frac = num("growth_fraction", cfg.checks.growth_frac);
        cfg.checks.barrier_tol = num("barrier", cfg.checks.barrier_tol);
        cfg.checks.a_opts.rel_se_cap = num("rel_se_cap", cfg.checks.a_opts.rel_se_cap);
        cfg.checks.risk_opts.rel_se_cap = cfg.checks.a_opts.rel_se_cap;
        cfg.checks.es_ratio_tol = num("es_ratio", cfg.checks.es_ratio_tol);
        cfg.checks.cprime_offset = num("cprime_offset", cfg.checks.cprime_offset);
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string ExperimentConfig::to_json_text() const {
    json j;
    j["seed"] = seed;
    j["out_dir"] = out_dir;
    j["formats"] = formats;
    j["suite"] = suite;
    j["n_traj"] = n_traj;
    j["max_entries"] = max_entries;
    j["processes"] = json::array();
    for (const auto& p : processes) j["processes"].push_back(json::parse(p.to_json()));
    j["eps_grid"] = eps_grid;
    j["b_grid"] = b_grid;
    j["gamma_grid"] = gamma_grid;
    j["R_grid"] = R_grid;
    j["gamma"] = gamma;
    j["es_eps_grid"] = es_eps_grid;
    json methods;
    json ms = json::array();
    for (const auto m : expectation_methods) ms.push_back(to_string(m));
    methods["expectation"] = ms;
    methods["trajectory"] = to_string(checks.traj_method);
    j["methods"] = methods;
    j["windows"] = {{"expectation", checks.a_opts.window_fraction},
                    {"trajectory", checks.traj_window},
                    {"risk", checks.risk_opts.window_fraction},
                    {"growth", checks.growth_window}};
    j["tolerances"] = {{"rate", checks.rate_tol},
                       {"hitting_ratio_rel", checks.ratio_rel_tol},
                       {"risk_se_mult", checks.se_mult},
                       {"censored_fraction", checks.censor_cap},
                       {"vacuous_margin", checks.vacuous_margin},
                       {"growth", checks.growth_tol},
                       {"growth_fraction", checks.growth_frac},
                       {"barrier", checks.barrier_tol},
                       {"rel_se_cap", checks.a_opts.rel_se_cap},
                       {"es_ratio", checks.es_ratio_tol},
                       {"cprime_offset", checks.cprime_offset}};
    return j.dump(2) + "\n";
}

} // namespace exporate
