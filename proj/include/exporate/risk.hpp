#pragma once

#include <cstddef>
#include <vector>

#include "exporate/batch.hpp"

namespace exporate {

/// Finite-horizon estimate of the risk-sensitive growth criterion
/// (1/t)(1/gamma) log E[W_t^gamma] for a risk-averse gamma < 0.
struct RiskEstimate {
    double gamma = -1.0;
    double c_hat = 0.0;          // tail-window minimum of the per-t curve
    std::size_t window_start = 0; // first t of the window (t >= 1)
    std::size_t window_len = 0;
    std::vector<double> curve;   // entry i is the value at t = i+1
    double standard_error = 0.0; // delete-one jackknife over trajectories
    bool unreliable_tail = false; // moment estimate dominated by few paths
};

struct RiskOptions {
    double window_fraction = 0.2;
    /// Relative-SE ceiling on the gamma-moment within the window; breaches
    /// set unreliable_tail.
    double rel_se_cap = 0.5;
    /// Jackknife needs a pass per trajectory over the window; disable for
    /// speed when the caller does not use the standard error.
    bool jackknife = true;
};

/// Negative-moment curves are computed in log space (log-sum-exp over
/// gamma * log W_t), so small-wealth paths cannot overflow the estimate.
RiskEstimate risk_criterion(const TrajectoryBatch& batch, double gamma,
                            const RiskOptions& opts = {});

struct LogGrowthSummary {
    std::vector<double> final_rate;    // per trajectory, (1/T) log W_T
    std::vector<double> tail_min_rate; // per trajectory, min of (1/t) log W_t over the window
    double mean_final = 0.0;
    std::size_t window_start = 0;
    std::size_t window_len = 0;
};

LogGrowthSummary log_growth_rates(const TrajectoryBatch& batch, double window_fraction = 0.2);

} // namespace exporate
