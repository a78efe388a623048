#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exporate/process.hpp"
#include "exporate/verdict.hpp"

namespace exporate {

/// One experiment: processes, grids, estimator settings, tolerances, output.
/// Parsed from a single strict-schema JSON document; unknown fields anywhere
/// are rejected before anything runs.
struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::vector<std::string> formats{"csv", "json", "svg"};
    std::string suite = "section2";
    std::size_t n_traj = 2000;
    std::size_t max_entries = 100'000'000;

    std::vector<ProcessSpec> processes;

    std::vector<double> eps_grid{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    std::vector<double> b_grid;
    std::vector<double> gamma_grid{-2.0, -1.0, -0.5};
    std::vector<double> R_grid;
    double gamma = -1.0;
    std::vector<double> es_eps_grid{1e-2, 1e-4, 1e-6};

    std::vector<RateMethod> expectation_methods{RateMethod::LogRegression,
                                                RateMethod::TailSupRoot};
    CheckOptions checks{};

    bool wants_format(const std::string& f) const;
    SuiteConfig suite_config() const;

    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig load(const std::string& path);
    std::string to_json_text() const;
};

} // namespace exporate
