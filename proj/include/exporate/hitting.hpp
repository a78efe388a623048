#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exporate/batch.hpp"

namespace exporate {

/// Per-threshold first-passage statistics. Used for downward hitting times
/// tau_eps (X_t < eps), upward barrier times T_b (W_t > b), and envelope
/// stopping times H_R.
struct ThresholdHits {
    double threshold = 0.0;
    /// One entry per trajectory: hitting index, or -1 when censored at the
    /// horizon.
    std::vector<std::int64_t> sample;
    std::size_t censored_count = 0;
    /// Mean over uncensored trajectories (NaN when all are censored).
    double mean_uncensored = 0.0;
    /// Mean treating censored entries as the horizon; a lower bound on the
    /// true expectation.
    double mean_lower_bound = 0.0;
    /// mean_uncensored / |log eps| (or / log b for barriers); NaN when
    /// undefined.
    double ratio = 0.0;
    bool all_censored = false;
};

struct HittingSummary {
    enum class Direction { Down, Up, Envelope };
    Direction direction = Direction::Down;
    std::size_t n_traj = 0;
    std::size_t horizon = 0;
    std::vector<ThresholdHits> per_threshold;

    /// For envelope summaries: the double-tail-sum bound on E[H_R] computed
    /// from the empirical expectation curve (one per threshold R).
    std::vector<double> envelope_bounds;

    void write_csv(std::ostream& out) const;
    std::string to_json() const;
};

/// tau_eps = smallest t with X_t < eps (strict), per trajectory, censored at
/// the horizon. eps_grid must be strictly decreasing and positive.
HittingSummary hitting_times(const TrajectoryBatch& batch, const std::vector<double>& eps_grid);

/// H_R = smallest t from which the whole remaining path sits under R^t
/// (suffix maxima of X_i/R^i computed right to left; exact on the simulated
/// range, censored when even the final index violates the envelope).
/// Also carries the double_tail_sum(expectation_curve, R) bound.
HittingSummary envelope_time(const TrajectoryBatch& batch, double R);

/// Overload over a grid of R values.
HittingSummary envelope_times(const TrajectoryBatch& batch, const std::vector<double>& R_grid);

/// T_b = smallest t with W_t > b (strict). Requires a strictly positive
/// batch; b_grid must be strictly increasing. ratio = mean / log(b).
HittingSummary barrier_times(const TrajectoryBatch& batch, const std::vector<double>& b_grid);

/// Per-trajectory envelope times for one R, without the summary wrapper:
/// entry j is H_R of trajectory j or nullopt when censored.
std::vector<std::optional<std::size_t>> envelope_time_per_trajectory(const TrajectoryBatch& batch,
                                                                     double R);

} // namespace exporate
