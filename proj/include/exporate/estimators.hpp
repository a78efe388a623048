#pragma once

#include <cstddef>
#include <vector>

#include "exporate/batch.hpp"
#include "exporate/rates.hpp"
#include "exporate/sequence.hpp"

namespace exporate {

/// Sample mean over trajectories, per time index (fixed summation order).
FiniteSequence expectation_curve(const TrajectoryBatch& batch);

/// Per-t relative standard error of the sample mean: sd / (mean * sqrt(N)).
/// 0 where the column is constant, +inf where the mean is 0 but values vary.
std::vector<double> expectation_rel_se(const TrajectoryBatch& batch);

struct EstimateAOptions {
    RateMethod method = RateMethod::LogRegression;
    double window_fraction = 0.2;
    /// Relative-SE ceiling defining the reliable prefix of the empirical
    /// expectation curve.
    double rel_se_cap = 0.5;
    /// When set, the rate window is taken inside the reliable prefix; the
    /// truncation is recorded and UnreliableTail raised. When clear, the
    /// window sits on the raw curve and the flag just reports the breach.
    bool truncate_unreliable = true;
};

struct ExpectationRateEstimate {
    RateEstimate rate;
    bool unreliable_tail = false; // window touched curve entries with rel-SE > cap
    std::size_t usable_len = 0;   // length of the reliable prefix actually used
    std::size_t curve_len = 0;    // full curve length (horizon+1)
};

/// Rate of the empirical expectation curve. The deep tail of a heavy-tailed
/// mean estimate carries no signal (its relative standard error explodes),
/// so by default the window is clipped to the prefix where the curve is
/// statistically meaningful, and the clip is reported.
ExpectationRateEstimate estimate_A(const TrajectoryBatch& batch,
                                   const EstimateAOptions& opts = {});

struct TrajectoryRates {
    std::vector<RateEstimate> rates; // one per trajectory
    double max_rate = 0.0;           // finite-sample stand-in for the essential sup
    double mean_rate = 0.0;
};

/// Per-trajectory root-rate estimates over the same tail window.
TrajectoryRates trajectory_rates(const TrajectoryBatch& batch,
                                 RateMethod method = RateMethod::TailSupRoot,
                                 double window_fraction = 0.2);

struct TailProbEstimate {
    RateEstimate rate;
    FiniteSequence exceedance; // t -> empirical P[X_t >= eps]
    bool degenerate = false;   // curve identically 0 or 1 over the window
};

/// Rate of t -> empirical P[X_t >= eps]. A window that is identically 0
/// (or 1) yields rate 0 (or 1) with the degenerate flag set instead of an
/// error; empirical frequency 0 follows the log(0) = -inf convention.
TailProbEstimate tail_prob_rate(const TrajectoryBatch& batch, double eps,
                                RateMethod method = RateMethod::TailSupRoot,
                                double window_fraction = 0.2);

/// The empirical Markov inequality mean(X_t) >= eps * freq(X_t >= eps),
/// checked with identical left-to-right accumulation on both sides so the
/// comparison is exact on the sample (rounding is monotone). Returns true
/// when it holds for every t.
bool markov_identity_holds(const TrajectoryBatch& batch, double eps);

} // namespace exporate
