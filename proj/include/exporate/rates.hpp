#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "exporate/sequence.hpp"

namespace exporate {

enum class RateMethod {
    TailSupRoot,   // max over the tail window of x_t^(1/t)
    LogRegression, // exp(slope) of least-squares log x_t vs t over the window
};

std::string to_string(RateMethod m);
RateMethod rate_method_from_string(const std::string& s);

/// Point estimate of limsup_t x_t^(1/t) from a finite window.
struct RateEstimate {
    double rate = 0.0;          // >= 0, may be +inf
    std::size_t window_start = 0; // absolute time index of first window entry
    std::size_t window_len = 0;
    RateMethod method = RateMethod::TailSupRoot;
    double diagnostic = 0.0;    // max |x_t^(1/t) - rate| over usable window entries
    std::size_t skipped = 0;    // zero entries skipped by log-regression
};

/// Finite-horizon proxy of the limsup root rate over the trailing
/// `window_fraction` of the sequence. t = 0 never contributes a root; zero
/// entries contribute root 0 (tail-sup-root) or are skipped with a recorded
/// count (log-regression, which throws EmptyWindowError when nothing is left).
RateEstimate upper_rate(const FiniteSequence& seq, RateMethod method,
                        double window_fraction = 0.2);

/// M_R = max_t x_t / R^t over the sequence (t=0 term included). R > 0.
double envelope_constant(const FiniteSequence& seq, double R);

enum class SumMode {
    Direct,   // plain accumulation; throws OverflowError if any term or the
              // total leaves the representable range
    LogSpace, // log-sum-exp accumulation; immune to intermediate overflow
};

/// Sum_t x_t / R^t over the finite range.
double tail_sum(const FiniteSequence& seq, double R, SumMode mode = SumMode::Direct);

/// Sum_t Sum_{i>=t} x_i / R^i over the finite range, computed as the
/// equivalent single pass Sum_i (i+1-start) * x_i / R^i.
double double_tail_sum(const FiniteSequence& seq, double R, SumMode mode = SumMode::Direct);

/// Smallest index t with x_t < eps (strict), or nullopt if none in range.
std::optional<std::size_t> deterministic_hitting(const FiniteSequence& seq, double eps);

/// Per-R proxies of the equivalent boundedness/summability conditions.
struct EquivalenceRow {
    double R = 0.0;
    double sup_ratio = 0.0;              // sup_t x_t/R^t (= envelope_constant)
    double last_decile_mean_ratio = 0.0; // mean of x_t/R^t over the final 10%
    double tail_sum_value = 0.0;
    double double_tail_sum_value = 0.0;
    double trend_slope = 0.0;            // LS slope of log(x_t/R^t), final 20%
    bool increasing = false;             // trend_slope > trend_tol
};

struct EquivalenceReport {
    double claimed_bound = 0.0;   // the C under test
    RateEstimate observed_rate;   // tail-sup-root estimate of the sequence
    std::vector<EquivalenceRow> rows;
    bool consistent = true;
    std::vector<std::string> notes;
};

struct EquivalenceOptions {
    double rate_tolerance = 0.05; // slack allowed on observed_rate vs C
    double trend_tolerance = 0.01; // log-units per step
    double window_fraction = 0.2;
    SumMode sum_mode = SumMode::LogSpace;
};

/// Evaluates finite-horizon proxies of the rate characterisation for the
/// hypothesis "C bounds the root rate of seq", over a grid of R > C.
/// Reports trends, not truth values; `consistent` is evidence only.
EquivalenceReport check_equivalence(const FiniteSequence& seq, double C,
                                    const std::vector<double>& R_grid,
                                    const EquivalenceOptions& opts = {});

/// Smallest natural m with C^m <= eps, for C in (0,1). Guarded against the
/// usual log-ratio rounding at exact powers. Returns 0 when eps >= 1.
std::size_t smallest_power_at_most(double C, double eps);

} // namespace exporate
