#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "exporate/batch.hpp"
#include "exporate/estimators.hpp"
#include "exporate/hitting.hpp"
#include "exporate/risk.hpp"

namespace exporate {

enum class Applicability { Applicable, Vacuous, Unreliable };

std::string to_string(Applicability a);
Applicability applicability_from_string(const std::string& s);

/// Structured outcome of one theorem check. `pass` is meaningful only when
/// applicable, and then always equals lhs <= rhs + tolerance; vacuous and
/// unreliable verdicts carry the reason in `diagnostics` instead.
struct Verdict {
    std::string check_name;
    std::string inequality; // statement with substituted numbers
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    Applicability applicability = Applicability::Applicable;
    std::vector<std::string> diagnostics;

    /// Applicable and failed (the only state that should fail a suite).
    bool hard_fail() const { return applicability == Applicability::Applicable && !pass; }
};

/// Knobs shared by the checks. Defaults follow the desk-scale tolerances the
/// suites are calibrated for; everything is overridable per run.
struct CheckOptions {
    double rate_tol = 0.05;       // additive slack on rate comparisons
    double ratio_rel_tol = 0.05;  // relative slack on hitting-time ratios
    double se_mult = 2.0;         // resampling-SE multiplier on risk estimates
    double censor_cap = 0.01;     // max censored fraction for a usable threshold
    double vacuous_margin = 0.02; // rate checks need A < 1 - margin to apply
    double growth_tol = 0.01;     // theorem-3 growth slack on C_hat
    double growth_frac = 0.99;    // required fraction of compliant trajectories
    double barrier_tol = 1.0;     // additive slack on mean T_b/log b vs 1/C
    double barrier_c_margin = 0.005; // barrier sub-check needs C_hat above this
    double cprime_offset = 0.02;  // C' = estimate + offset for the pathwise bound
    double es_ratio_tol = 0.1;    // additive slack on -1/log A in the sublevel check

    EstimateAOptions a_opts{};    // expectation-rate estimator settings
    RateMethod traj_method = RateMethod::TailSupRoot;
    double traj_window = 0.2;
    RiskOptions risk_opts{};
    double growth_window = 0.2;
};

/// -1/log(A) with the conventions A<=0 -> 0 and A>=1 -> +inf.
double neg_inv_log(double a);

// --- individual checks ----------------------------------------------------

/// Trajectory rates are bounded by the expectation rate:
/// max per-trajectory rate <= estimate_A + tol.
Verdict check_theorem1(const TrajectoryBatch& batch, const CheckOptions& opts,
                       const std::string& label);

/// Same arithmetic read in the lower-bound direction: the empirical maximum
/// trajectory rate is a finite-sample stand-in for the essential supremum.
Verdict check_conclusion1(const TrajectoryBatch& batch, const CheckOptions& opts,
                          const std::string& label);

/// E[tau_eps] grows at most like |log eps| / |log A|; vacuous unless the
/// expectation rate sits clearly below 1. Also re-asserts the pathwise
/// envelope bound on every trajectory.
Verdict check_theorem2(const TrajectoryBatch& batch, const std::vector<double>& eps_grid,
                       const CheckOptions& opts, const std::string& label);

/// Rate of the exceedance frequencies P[X_t >= eps] is bounded by the
/// expectation rate; the empirical Markov identity is asserted exactly as a
/// sub-check.
Verdict check_e3_chain(const TrajectoryBatch& batch, const std::vector<double>& eps_grid,
                       const CheckOptions& opts, const std::string& label);

/// Envelope stopping times H_R are integrable for R above the rate: censored
/// fraction small and uncensored mean below the double-tail-sum bound.
Verdict check_lemma_hc(const TrajectoryBatch& batch, const std::vector<double>& R_grid,
                       const CheckOptions& opts, const std::string& label);

/// Pathwise first-passage bound tau_eps <= max{H_C', ceil(|log eps|/|log C'|)} + 1
/// on every trajectory with an uncensored H_C'. Exact on the data; lhs is the
/// violation count.
Verdict check_pathwise_envelope_bound(const TrajectoryBatch& batch, double c_prime,
                                      const std::vector<double>& eps_grid,
                                      const std::string& label);

/// Risk-sensitive criterion: (i) at least growth_frac of the trajectories
/// keep tail-min log-growth >= C_hat - growth_tol; (ii) mean T_b / log b at
/// the largest usable barrier stays below 1/C_hat + barrier_tol (vacuous when
/// C_hat is not positive).
struct Theorem3Verdicts {
    Verdict growth;
    Verdict barrier;
};
Theorem3Verdicts check_theorem3(const TrajectoryBatch& wealth, double gamma,
                                const std::vector<double>& b_grid, const CheckOptions& opts,
                                const std::string& label);

/// C_gamma is nondecreasing in gamma (within jackknife noise), and the linear
/// gamma->0- extrapolation stays below the mean empirical log-growth.
struct GammaMonotonicityVerdicts {
    Verdict monotone;
    Verdict limit; // gamma -> 0- extrapolation vs mean log-growth
    std::vector<RiskEstimate> estimates;
};
GammaMonotonicityVerdicts check_gamma_monotonicity(const TrajectoryBatch& wealth,
                                                   const std::vector<double>& gamma_grid,
                                                   const CheckOptions& opts,
                                                   const std::string& label);

/// Optimization hitting times: mean tau_eps <= (-1/log A + tol) * |log eps|
/// for thresholds eps relative to the initial objective value.
Verdict check_sublevel_hitting(const TrajectoryBatch& batch,
                               const std::vector<double>& eps_rel_grid, const CheckOptions& opts,
                               const std::string& label);

/// Two-sided band assertion |value - center| <= halfwidth, for suite
/// compositions that pin closed-form oracles.
Verdict check_value_in_band(const std::string& check_name, double value, double center,
                            double halfwidth, const std::string& detail);

/// Deterministic-geometric hitting indices match the ceiling formula
/// ceil(|log eps| / |log rho|) exactly, for every threshold and trajectory.
Verdict check_ceiling_exact(const TrajectoryBatch& batch, double rho,
                            const std::vector<double>& eps_grid, const std::string& label);

// --- suites ----------------------------------------------------------------

struct SuiteConfig {
    std::string suite = "section2"; // section2 | section3 | all
    std::size_t n_traj = 2000;
    std::vector<double> eps_grid{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    std::vector<double> b_grid{};
    std::vector<double> gamma_grid{-2.0, -1.0, -0.5};
    std::vector<double> R_grid{};
    double gamma = -1.0;
    std::vector<double> es_eps_grid{1e-2, 1e-4, 1e-6};
    CheckOptions checks{};
    SimulateOptions sim{};
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<Verdict> verdicts;

    bool all_applicable_pass() const;
    /// 0 = all applicable pass, 1 = any hard failure.
    int exit_code() const;

    std::string to_json() const;
    /// Parses and self-validates: an applicable verdict whose stored pass
    /// disagrees with lhs <= rhs + tolerance is rejected.
    static SuiteReport from_json(const std::string& text);

    void write_table(std::ostream& out) const;
};

/// Executes the configured checks over freshly simulated batches, in config
/// order. The report depends only on (specs, config), never on scheduling.
SuiteReport run_suite(const std::vector<ProcessSpec>& specs, const SuiteConfig& cfg);

} // namespace exporate
