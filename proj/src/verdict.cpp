#include "exporate/verdict.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "json.hpp"

#include "exporate/errors.hpp"
#include "exporate/rates.hpp"

namespace exporate {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

template <typename Fn>
Verdict guarded(const std::string& name, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        Verdict v;
        v.check_name = name;
        v.inequality = "(not evaluated)";
        v.lhs = kNaN;
        v.rhs = kNaN;
        v.applicability = Applicability::Unreliable;
        v.diagnostics.push_back(std::string("error: ") + e.what());
        return v;
    }
}

struct RateGate {
    ExpectationRateEstimate primary;  // configured method
    double hi = 0.0;                  // max over both methods; vacuousness gate
    std::string summary;
};

// Polynomially modulated curves fool one proxy or the other, so preconditions
// of the form "A < 1" are gated on the larger of the two estimates.
RateGate gated_estimate(const TrajectoryBatch& batch, const CheckOptions& opts) {
    RateGate g;
    g.primary = estimate_A(batch, opts.a_opts);
    g.hi = g.primary.rate.rate;
    EstimateAOptions other = opts.a_opts;
    other.method = opts.a_opts.method == RateMethod::TailSupRoot ? RateMethod::LogRegression
                                                                 : RateMethod::TailSupRoot;
    double other_rate = kNaN;
    try {
        const auto alt = estimate_A(batch, other);
        other_rate = alt.rate.rate;
        g.hi = std::max(g.hi, alt.rate.rate);
    } catch (const EmptyWindowError&) {
        // all-zero window: the alternate proxy has nothing to fit
    }
    g.summary = "estimate_A[" + to_string(opts.a_opts.method) + "]=" + fmt(g.primary.rate.rate) +
                " alt=" + fmt(other_rate) + " usable_len=" + std::to_string(g.primary.usable_len) +
                "/" + std::to_string(g.primary.curve_len) +
                (g.primary.unreliable_tail ? " [UnreliableTail]" : "");
    return g;
}

void push_estimate_diagnostics(Verdict& v, const RateGate& g, const std::string& label) {
    v.diagnostics.push_back("process=" + label);
    v.diagnostics.push_back(g.summary);
    v.diagnostics.push_back("a_window=" + fmt(0.0 + g.primary.rate.window_len) + "@" +
                            std::to_string(g.primary.rate.window_start) +
                            " diag=" + fmt(g.primary.rate.diagnostic));
}

struct PathwiseOutcome {
    std::size_t violations = 0;
    std::size_t censored_h = 0;
    std::size_t checked = 0;
    double c_prime = 0.0;
    bool skipped = false;
    std::string note;
};

PathwiseOutcome pathwise_envelope(const TrajectoryBatch& batch, double c_prime,
                                  const std::vector<double>& eps_grid) {
    PathwiseOutcome out;
    out.c_prime = c_prime;
    if (!(c_prime > 0.0) || c_prime >= 1.0 - 1e-9) {
        out.skipped = true;
        out.note = "pathwise bound skipped: C'=" + fmt(c_prime) + " not inside (0,1)";
        return out;
    }
    const auto hs = hitting_times(batch, eps_grid);
    const auto h_times = envelope_time_per_trajectory(batch, c_prime);
    const auto horizon = static_cast<std::int64_t>(batch.horizon());
    for (std::size_t j = 0; j < batch.n_traj(); ++j) {
        if (!h_times[j]) {
            ++out.censored_h;
            continue;
        }
        const auto h = static_cast<std::int64_t>(*h_times[j]);
        for (std::size_t k = 0; k < eps_grid.size(); ++k) {
            const auto m =
                static_cast<std::int64_t>(smallest_power_at_most(c_prime, eps_grid[k]));
            const std::int64_t bound = std::max(h, m) + 1;
            const std::int64_t tau = hs.per_threshold[k].sample[j];
            ++out.checked;
            if (tau < 0) {
                if (bound <= horizon) ++out.violations; // bound promises a hit we never saw
            } else if (tau > bound) {
                ++out.violations;
            }
        }
    }
    return out;
}

std::string pathwise_summary(const PathwiseOutcome& p) {
    if (p.skipped) return p.note;
    return "pathwise tauH bound: C'=" + fmt(p.c_prime) + " checked=" + std::to_string(p.checked) +
           " violations=" + std::to_string(p.violations) +
           " censored_H=" + std::to_string(p.censored_h);
}

} // namespace

std::string to_string(Applicability a) {
    switch (a) {
        case Applicability::Applicable: return "applicable";
        case Applicability::Vacuous: return "vacuous";
        case Applicability::Unreliable: return "unreliable";
    }
    return "unreliable";
}

Applicability applicability_from_string(const std::string& s) {
    if (s == "applicable") return Applicability::Applicable;
    if (s == "vacuous") return Applicability::Vacuous;
    if (s == "unreliable") return Applicability::Unreliable;
    throw ConfigError("unknown applicability: " + s);
}

double neg_inv_log(double a) {
    if (a <= 0.0) return 0.0;
    if (a >= 1.0) return kInf;
    return -1.0 / std::log(a);
}

Verdict check_theorem1(const TrajectoryBatch& batch, const CheckOptions& opts,
                       const std::string& label) {
    return guarded("theorem1", [&] {
        Verdict v;
        v.check_name = "theorem1";
        const RateGate g = gated_estimate(batch, opts);
        const TrajectoryRates tr = trajectory_rates(batch, opts.traj_method, opts.traj_window);

        v.lhs = tr.max_rate;
        v.rhs = g.primary.rate.rate;
        v.tolerance = opts.rate_tol;
        v.pass = v.lhs <= v.rhs + v.tolerance;
        v.inequality = "max_trajectory_rate " + fmt(v.lhs) + " <= estimate_A " + fmt(v.rhs) +
                       " + " + fmt(v.tolerance);
        push_estimate_diagnostics(v, g, label);

        std::size_t violating = 0;
        for (const auto& r : tr.rates) {
            if (r.rate > v.rhs + v.tolerance) ++violating;
        }
        v.diagnostics.push_back(
            "trajectory_rates[" + to_string(opts.traj_method) +
            "]: mean=" + fmt(tr.mean_rate) + " max=" + fmt(tr.max_rate) + " violating_fraction=" +
            fmt(static_cast<double>(violating) / static_cast<double>(tr.rates.size())));
        return v;
    });
}

Verdict check_conclusion1(const TrajectoryBatch& batch, const CheckOptions& opts,
                          const std::string& label) {
    Verdict v = check_theorem1(batch, opts, label);
    v.check_name = "conclusion1";
    v.inequality = "ess_sup_proxy(max_trajectory_rate) " + fmt(v.lhs) + " <= estimate_A " +
                   fmt(v.rhs) + " + " + fmt(v.tolerance);
    v.diagnostics.push_back("empirical max over trajectories is a lower proxy of the essential sup");
    return v;
}

Verdict check_theorem2(const TrajectoryBatch& batch, const std::vector<double>& eps_grid,
                       const CheckOptions& opts, const std::string& label) {
    return guarded("theorem2", [&] {
        Verdict v;
        v.check_name = "theorem2";
        const RateGate g = gated_estimate(batch, opts);
        push_estimate_diagnostics(v, g, label);

        if (g.hi >= 1.0 - opts.vacuous_margin) {
            v.applicability = Applicability::Vacuous;
            v.inequality = "(vacuous)";
            v.lhs = kNaN;
            v.rhs = kNaN;
            v.diagnostics.push_back("vacuous: A >= 1 - margin (gate " + fmt(g.hi) +
                                    " >= " + fmt(1.0 - opts.vacuous_margin) + ")");
            return v;
        }

        const HittingSummary hs = hitting_times(batch, eps_grid);
        std::ptrdiff_t chosen = -1;
        for (std::size_t k = eps_grid.size(); k-- > 0;) {
            const auto& th = hs.per_threshold[k];
            const double cf = static_cast<double>(th.censored_count) /
                              static_cast<double>(hs.n_traj);
            v.diagnostics.push_back("eps=" + fmt(th.threshold) + " censored_fraction=" + fmt(cf) +
                                    " ratio=" + fmt(th.ratio));
            if (chosen < 0 && cf <= opts.censor_cap) chosen = static_cast<std::ptrdiff_t>(k);
        }
        if (chosen < 0) {
            v.applicability = Applicability::Unreliable;
            v.inequality = "(not evaluated)";
            v.lhs = kNaN;
            v.rhs = kNaN;
            v.diagnostics.push_back("unreliable: every threshold exceeds the censoring cap " +
                                    fmt(opts.censor_cap));
            return v;
        }

        const auto& th = hs.per_threshold[static_cast<std::size_t>(chosen)];
        v.lhs = th.ratio;
        v.rhs = neg_inv_log(g.primary.rate.rate);
        v.tolerance = v.rhs * opts.ratio_rel_tol;
        v.pass = v.lhs <= v.rhs + v.tolerance;
        v.inequality = "mean_tau/|log eps| " + fmt(v.lhs) + " (eps=" + fmt(th.threshold) +
                       ") <= -1/log(A) " + fmt(v.rhs) + " + " + fmt(v.tolerance);

        // Trend of the ratio curve across the grid (limit diagnostics only).
        std::vector<double> xs, ys;
        for (const auto& t : hs.per_threshold) {
            if (!std::isnan(t.ratio)) {
                xs.push_back(std::fabs(std::log(t.threshold)));
                ys.push_back(t.ratio);
            }
        }
        if (xs.size() >= 2) {
            double sx = 0.0, sy = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                sx += xs[i];
                sy += ys[i];
            }
            const double mx = sx / static_cast<double>(xs.size());
            const double my = sy / static_cast<double>(xs.size());
            double sxx = 0.0, sxy = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                sxx += (xs[i] - mx) * (xs[i] - mx);
                sxy += (xs[i] - mx) * (ys[i] - my);
            }
            v.diagnostics.push_back("ratio_trend_slope=" + fmt(sxy / sxx) +
                                    " (per unit |log eps|; finite grid, limit not certified)");
        }

        const double c_prime = std::min(g.hi + opts.cprime_offset, 1.0 - 1e-9);
        const PathwiseOutcome pw = pathwise_envelope(batch, c_prime, eps_grid);
        v.diagnostics.push_back(pathwise_summary(pw));
        if (!pw.skipped && pw.violations > 0) {
            v.applicability = Applicability::Unreliable;
            v.diagnostics.push_back("unreliable: pathwise envelope bound violated");
        }
        return v;
    });
}

Verdict check_e3_chain(const TrajectoryBatch& batch, const std::vector<double>& eps_grid,
                       const CheckOptions& opts, const std::string& label) {
    return guarded("e3_chain", [&] {
        Verdict v;
        v.check_name = "e3_chain";
        const RateGate g = gated_estimate(batch, opts);
        push_estimate_diagnostics(v, g, label);

        double worst = 0.0;
        std::size_t usable = 0;
        for (const double eps : eps_grid) {
            const TailProbEstimate tp =
                tail_prob_rate(batch, eps, opts.traj_method, opts.a_opts.window_fraction);
            if (tp.degenerate && tp.rate.rate == 1.0) {
                v.diagnostics.push_back("eps=" + fmt(eps) +
                                        " skipped: exceedance curve degenerate at 1 over window");
                continue;
            }
            std::string note = tp.degenerate ? " (degenerate: all-zero window)" : "";
            v.diagnostics.push_back("eps=" + fmt(eps) + " tail_prob_rate=" + fmt(tp.rate.rate) +
                                    note);
            worst = std::max(worst, tp.rate.rate);
            ++usable;

            if (!markov_identity_holds(batch, eps)) {
                throw std::logic_error("empirical Markov identity violated at eps=" + fmt(eps));
            }
        }
        v.diagnostics.push_back("markov_identity=exact for all thresholds");
        if (usable == 0) {
            v.applicability = Applicability::Unreliable;
            v.inequality = "(not evaluated)";
            v.lhs = kNaN;
            v.rhs = kNaN;
            v.diagnostics.push_back("unreliable: every threshold degenerate at 1");
            return v;
        }
        v.lhs = worst;
        v.rhs = g.primary.rate.rate;
        v.tolerance = opts.rate_tol;
        v.pass = v.lhs <= v.rhs + v.tolerance;
        v.inequality = "max tail_prob_rate " + fmt(v.lhs) + " <= estimate_A " + fmt(v.rhs) + " + " +
                       fmt(v.tolerance);
        return v;
    });
}

Verdict check_lemma_hc(const TrajectoryBatch& batch, const std::vector<double>& R_grid,
                       const CheckOptions& opts, const std::string& label) {
    return guarded("lemma_hc", [&] {
        Verdict v;
        v.check_name = "lemma_hc";
        const RateGate g = gated_estimate(batch, opts);
        push_estimate_diagnostics(v, g, label);

        const HittingSummary hs = envelope_times(batch, R_grid);
        double worst_ratio = 0.0;
        std::size_t applicable = 0;
        bool censor_breach = false;
        for (std::size_t k = 0; k < R_grid.size(); ++k) {
            const auto& th = hs.per_threshold[k];
            const double bound = hs.envelope_bounds[k];
            if (R_grid[k] <= g.hi + opts.rate_tol) {
                v.diagnostics.push_back("R=" + fmt(R_grid[k]) +
                                        " unreliable: R inside rate (gate " + fmt(g.hi) + ")");
                continue;
            }
            const double cf =
                static_cast<double>(th.censored_count) / static_cast<double>(hs.n_traj);
            const double ratio = (bound > 0.0) ? th.mean_uncensored / bound
                                               : (th.mean_uncensored == 0.0 ? 0.0 : kInf);
            v.diagnostics.push_back("R=" + fmt(R_grid[k]) + " mean_H=" + fmt(th.mean_uncensored) +
                                    " bound=" + fmt(bound) + " censored_fraction=" + fmt(cf));
            if (cf > opts.censor_cap) censor_breach = true;
            if (!th.all_censored) worst_ratio = std::max(worst_ratio, ratio);
            ++applicable;
        }
        if (applicable == 0) {
            v.applicability = Applicability::Unreliable;
            v.inequality = "(not evaluated)";
            v.lhs = kNaN;
            v.rhs = kNaN;
            v.diagnostics.push_back("unreliable: R inside rate for every grid entry");
            return v;
        }
        v.lhs = worst_ratio;
        v.rhs = 1.0;
        v.tolerance = opts.ratio_rel_tol;
        v.pass = v.lhs <= v.rhs + v.tolerance;
        v.inequality = "max mean_H / double_tail_sum_bound " + fmt(v.lhs) + " <= 1 + " +
                       fmt(v.tolerance);
        if (censor_breach) {
            v.applicability = Applicability::Unreliable;
            v.diagnostics.push_back("unreliable: censored fraction above cap " +
                                    fmt(opts.censor_cap));
        }
        return v;
    });
}

Verdict check_pathwise_envelope_bound(const TrajectoryBatch& batch, double c_prime,
                                      const std::vector<double>& eps_grid,
                                      const std::string& label) {
    return guarded("pathwise_envelope_bound", [&] {
        Verdict v;
        v.check_name = "pathwise_envelope_bound";
        v.diagnostics.push_back("process=" + label);
        const PathwiseOutcome pw = pathwise_envelope(batch, c_prime, eps_grid);
        v.diagnostics.push_back(pathwise_summary(pw));
        if (pw.skipped) {
            v.applicability = Applicability::Vacuous;
            v.inequality = "(vacuous)";
            v.lhs = kNaN;
            v.rhs = kNaN;
            return v;
        }
        v.lhs = static_cast<double>(pw.violations);
        v.rhs = 0.0;
        v.tolerance = 0.0;
        v.pass = v.lhs <= v.rhs;
        v.inequality = "tauH violations " + fmt(v.lhs) + " <= 0 (C'=" + fmt(c_prime) + ")";
        return v;
    });
}

Theorem3Verdicts check_theorem3(const TrajectoryBatch& wealth, double gamma,
                                const std::vector<double>& b_grid, const CheckOptions& opts,
                                const std::string& label) {
    Theorem3Verdicts out;
    RiskEstimate risk;
    bool risk_ok = false;

    out.growth = guarded("theorem3_growth", [&] {
        Verdict v;
        v.check_name = "theorem3_growth";
        v.diagnostics.push_back("process=" + label);
        risk = risk_criterion(wealth, gamma, opts.risk_opts);
        risk_ok = true;
        const LogGrowthSummary growth = log_growth_rates(wealth, opts.growth_window);

        std::size_t compliant = 0;
        for (const double r : growth.tail_min_rate) {
            if (r >= risk.c_hat - opts.growth_tol) ++compliant;
        }
        const double frac =
            static_cast<double>(compliant) / static_cast<double>(growth.tail_min_rate.size());
        v.lhs = 1.0 - frac;
        v.rhs = 1.0 - opts.growth_frac;
        v.tolerance = 0.0;
        v.pass = v.lhs <= v.rhs;
        v.inequality = "fraction with tail-min log-growth < C_hat - " + fmt(opts.growth_tol) +
                       ": " + fmt(v.lhs) + " <= " + fmt(v.rhs);
        v.diagnostics.push_back("gamma=" + fmt(gamma) + " C_hat=" + fmt(risk.c_hat) +
                                " jackknife_se=" + fmt(risk.standard_error) +
                                (risk.unreliable_tail ? " [UnreliableTail]" : ""));
        v.diagnostics.push_back("mean_final_log_growth=" + fmt(growth.mean_final));
        return v;
    });

    out.barrier = guarded("theorem3_barrier", [&] {
        Verdict v;
        v.check_name = "theorem3_barrier";
        v.diagnostics.push_back("process=" + label);
        if (!risk_ok) {
            v.applicability = Applicability::Unreliable;
            v.inequality = "(not evaluated)";
            v.lhs = kNaN;
            v.rhs = kNaN;
            v.diagnostics.push_back("unreliable: risk criterion unavailable");
            return v;
        }
        v.diagnostics.push_back("gamma=" + fmt(gamma) + " C_hat=" + fmt(risk.c_hat));
        if (!(risk.c_hat > opts.barrier_c_margin)) {
            v.applicability = Applicability::Vacuous;
            v.inequality = "(vacuous)";
            v.lhs = kNaN;
            v.rhs = kNaN;
            v.diagnostics.push_back("vacuous: C_hat " + fmt(risk.c_hat) + " <= margin " +
                                    fmt(opts.barrier_c_margin));
            return v;
        }
        if (b_grid.empty()) {
            v.applicability = Applicability::Unreliable;
            v.inequality = "(not evaluated)";
            v.lhs = kNaN;
            v.rhs = kNaN;
            v.diagnostics.push_back("unreliable: no barrier grid configured");
            return v;
        }
        const HittingSummary bt = barrier_times(wealth, b_grid);
        std::ptrdiff_t chosen = -1;
        for (std::size_t k = b_grid.size(); k-- > 0;) {
            const auto& th = bt.per_threshold[k];
            const double cf =
                static_cast<double>(th.censored_count) / static_cast<double>(bt.n_traj);
            v.diagnostics.push_back("b=" + fmt(th.threshold) + " censored_fraction=" + fmt(cf) +
                                    " ratio=" + fmt(th.ratio));
            if (chosen < 0 && cf <= opts.censor_cap) chosen = static_cast<std::ptrdiff_t>(k);
        }
        if (chosen < 0) {
            v.applicability = Applicability::Unreliable;
            v.inequality = "(not evaluated)";
            v.lhs = kNaN;
            v.rhs = kNaN;
            v.diagnostics.push_back("unreliable: every barrier exceeds the censoring cap");
            return v;
        }
        const auto& th = bt.per_threshold[static_cast<std::size_t>(chosen)];
        v.lhs = th.ratio;
        v.rhs = 1.0 / risk.c_hat;
        v.tolerance = opts.barrier_tol;
        v.pass = v.lhs <= v.rhs + v.tolerance;
        v.inequality = "mean_T_b/log(b) " + fmt(v.lhs) + " (b=" + fmt(th.threshold) +
                       ") <= 1/C_hat " + fmt(v.rhs) + " + " + fmt(v.tolerance);
        return v;
    });

    return out;
}

GammaMonotonicityVerdicts check_gamma_monotonicity(const TrajectoryBatch& wealth,
                                                   const std::vector<double>& gamma_grid,
                                                   const CheckOptions& opts,
                                                   const std::string& label) {
    GammaMonotonicityVerdicts out;
    bool estimates_ok = false;

    out.monotone = guarded("gamma_monotonicity", [&] {
        Verdict v;
        v.check_name = "gamma_monotonicity";
        v.diagnostics.push_back("process=" + label);
        if (gamma_grid.size() < 2) throw InvalidParamsError("gamma grid needs >= 2 entries");
        for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
            if (!(gamma_grid[i] < 0.0)) throw InvalidParamsError("gamma grid must be < 0");
            if (i > 0 && !(gamma_grid[i] > gamma_grid[i - 1])) {
                throw InvalidParamsError("gamma grid must be strictly increasing");
            }
        }
        for (const double gamma : gamma_grid) {
            out.estimates.push_back(risk_criterion(wealth, gamma, opts.risk_opts));
            const auto& r = out.estimates.back();
            v.diagnostics.push_back("gamma=" + fmt(gamma) + " C_hat=" + fmt(r.c_hat) +
                                    " jackknife_se=" + fmt(r.standard_error) +
                                    (r.unreliable_tail ? " [UnreliableTail]" : ""));
        }
        estimates_ok = true;

        double worst = -kInf;
        double max_se = 0.0, max_step = 0.0;
        for (std::size_t i = 0; i + 1 < out.estimates.size(); ++i) {
            const auto& a = out.estimates[i];
            const auto& b = out.estimates[i + 1];
            const double pair_se = std::sqrt(a.standard_error * a.standard_error +
                                             b.standard_error * b.standard_error);
            worst = std::max(worst, a.c_hat - b.c_hat - opts.se_mult * pair_se);
            max_step = std::max(max_step, std::fabs(b.c_hat - a.c_hat));
        }
        for (const auto& r : out.estimates) max_se = std::max(max_se, r.standard_error);

        v.lhs = worst;
        v.rhs = 0.0;
        v.tolerance = 0.0;
        v.pass = v.lhs <= v.rhs;
        v.inequality = "max C(gamma_i) - C(gamma_i+1) - " + fmt(opts.se_mult) +
                       "*pair_se = " + fmt(v.lhs) + " <= 0";
        if (max_se > max_step && max_step > 0.0) {
            v.applicability = Applicability::Unreliable;
            v.diagnostics.push_back("unreliable: jackknife SE " + fmt(max_se) +
                                    " exceeds largest grid increment " + fmt(max_step));
        }
        return v;
    });

    out.limit = guarded("conclusion2_gamma_to_zero", [&] {
        Verdict v;
        v.check_name = "conclusion2_gamma_to_zero";
        v.diagnostics.push_back("process=" + label);
        if (!estimates_ok) {
            v.applicability = Applicability::Unreliable;
            v.inequality = "(not evaluated)";
            v.lhs = kNaN;
            v.rhs = kNaN;
            v.diagnostics.push_back("unreliable: risk estimates unavailable");
            return v;
        }
        // Linear least squares of C_hat against gamma; the intercept is the
        // gamma -> 0- proxy. Extrapolation, labelled as such.
        double sx = 0.0, sy = 0.0;
        const auto n = static_cast<double>(gamma_grid.size());
        for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
            sx += gamma_grid[i];
            sy += out.estimates[i].c_hat;
        }
        const double mx = sx / n, my = sy / n;
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
            sxx += (gamma_grid[i] - mx) * (gamma_grid[i] - mx);
            sxy += (gamma_grid[i] - mx) * (out.estimates[i].c_hat - my);
        }
        const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
        const double intercept = my - slope * mx;

        const LogGrowthSummary growth = log_growth_rates(wealth, opts.growth_window);
        v.lhs = intercept;
        v.rhs = growth.mean_final;
        v.tolerance = opts.rate_tol;
        v.pass = v.lhs <= v.rhs + v.tolerance;
        v.inequality = "extrapolated C(gamma->0-) " + fmt(v.lhs) + " <= mean log-growth " +
                       fmt(v.rhs) + " + " + fmt(v.tolerance);
        v.diagnostics.push_back("linear extrapolation in gamma over the configured grid");
        v.diagnostics.push_back("fit: intercept=" + fmt(intercept) + " slope=" + fmt(slope));
        return v;
    });

    return out;
}

Verdict check_sublevel_hitting(const TrajectoryBatch& batch,
                               const std::vector<double>& eps_rel_grid, const CheckOptions& opts,
                               const std::string& label) {
    return guarded("sublevel_hitting", [&] {
        Verdict v;
        v.check_name = "sublevel_hitting";
        const RateGate g = gated_estimate(batch, opts);
        push_estimate_diagnostics(v, g, label);

        std::size_t monotone_violations = 0;
        for (std::size_t j = 0; j < batch.n_traj(); ++j) {
            for (std::size_t t = 1; t < batch.columns(); ++t) {
                if (batch.at(j, t) > batch.at(j, t - 1)) ++monotone_violations;
            }
        }
        v.diagnostics.push_back("monotone_violations=" + std::to_string(monotone_violations));

        if (g.hi >= 1.0 - opts.vacuous_margin) {
            v.applicability = Applicability::Vacuous;
            v.inequality = "(vacuous)";
            v.lhs = kNaN;
            v.rhs = kNaN;
            v.diagnostics.push_back("vacuous: estimate_A gate " + fmt(g.hi) + " >= 1 - margin");
            return v;
        }

        const double f_scale = batch.at(0, 0);
        v.diagnostics.push_back("f_scale=" + fmt(f_scale) +
                                " (initial objective value; thresholds are relative)");
        std::vector<double> abs_grid;
        for (const double e : eps_rel_grid) abs_grid.push_back(e * f_scale);
        const HittingSummary hs = hitting_times(batch, abs_grid);

        bool censor_breach = false;
        double worst = 0.0;
        for (std::size_t k = 0; k < abs_grid.size(); ++k) {
            const auto& th = hs.per_threshold[k];
            const double cf =
                static_cast<double>(th.censored_count) / static_cast<double>(hs.n_traj);
            const double rel_ratio = th.mean_uncensored / std::fabs(std::log(eps_rel_grid[k]));
            v.diagnostics.push_back("eps_rel=" + fmt(eps_rel_grid[k]) + " mean_tau=" +
                                    fmt(th.mean_uncensored) + " ratio=" + fmt(rel_ratio) +
                                    " censored_fraction=" + fmt(cf));
            if (cf > opts.censor_cap) censor_breach = true;
            if (!th.all_censored) worst = std::max(worst, rel_ratio);
        }

        v.lhs = worst;
        v.rhs = neg_inv_log(g.primary.rate.rate);
        v.tolerance = opts.es_ratio_tol;
        v.pass = v.lhs <= v.rhs + v.tolerance;
        v.inequality = "max mean_tau/|log eps| " + fmt(v.lhs) + " <= -1/log(A) " + fmt(v.rhs) +
                       " + " + fmt(v.tolerance);

        const double c_prime = std::min(g.hi + opts.cprime_offset, 1.0 - 1e-9);
        const PathwiseOutcome pw = pathwise_envelope(batch, c_prime, abs_grid);
        v.diagnostics.push_back(pathwise_summary(pw));
        if (censor_breach || (!pw.skipped && pw.violations > 0) || monotone_violations > 0) {
            v.applicability = Applicability::Unreliable;
            v.diagnostics.push_back("unreliable: censoring/pathwise/monotonicity breach");
        }
        return v;
    });
}

Verdict check_value_in_band(const std::string& check_name, double value, double center,
                            double halfwidth, const std::string& detail) {
    Verdict v;
    v.check_name = check_name;
    v.lhs = std::fabs(value - center);
    v.rhs = halfwidth;
    v.tolerance = 0.0;
    v.pass = v.lhs <= v.rhs;
    v.inequality = "|" + fmt(value) + " - " + fmt(center) + "| = " + fmt(v.lhs) +
                   " <= " + fmt(halfwidth);
    if (!detail.empty()) v.diagnostics.push_back(detail);
    if (std::isnan(value)) {
        v.applicability = Applicability::Unreliable;
        v.pass = false;
        v.diagnostics.push_back("unreliable: value is NaN");
    }
    return v;
}

Verdict check_ceiling_exact(const TrajectoryBatch& batch, double rho,
                            const std::vector<double>& eps_grid, const std::string& label) {
    return guarded("hitting_ceiling_exact", [&] {
        Verdict v;
        v.check_name = "hitting_ceiling_exact";
        v.diagnostics.push_back("process=" + label);
        if (!(rho > 0.0) || !(rho < 1.0)) throw InvalidParamsError("rho must be in (0,1)");
        const HittingSummary hs = hitting_times(batch, eps_grid);
        std::size_t mismatches = 0;
        for (std::size_t k = 0; k < eps_grid.size(); ++k) {
            const auto expected = static_cast<std::int64_t>(
                std::ceil(std::fabs(std::log(eps_grid[k])) / std::fabs(std::log(rho))));
            for (const auto tau : hs.per_threshold[k].sample) {
                if (tau != expected) ++mismatches;
            }
            v.diagnostics.push_back("eps=" + fmt(eps_grid[k]) + " ceil_formula=" +
                                    std::to_string(expected) + " observed_tau=" +
                                    std::to_string(hs.per_threshold[k].sample[0]));
        }
        v.lhs = static_cast<double>(mismatches);
        v.rhs = 0.0;
        v.tolerance = 0.0;
        v.pass = v.lhs <= v.rhs;
        v.inequality = "ceiling-formula mismatches " + fmt(v.lhs) + " <= 0";
        return v;
    });
}

// --- suites -----------------------------------------------------------------

bool SuiteReport::all_applicable_pass() const {
    for (const auto& v : verdicts) {
        if (v.hard_fail()) return false;
    }
    return true;
}

int SuiteReport::exit_code() const { return all_applicable_pass() ? 0 : 1; }

namespace {

json verdict_to_json(const Verdict& v) {
    json j;
    j["check_name"] = v.check_name;
    j["inequality"] = v.inequality;
    j["lhs"] = v.lhs; // NaN serializes as null
    j["rhs"] = v.rhs;
    j["tolerance"] = v.tolerance;
    if (v.applicability == Applicability::Applicable) {
        j["pass"] = v.pass;
    } else {
        j["pass"] = nullptr; // vacuous/unreliable verdicts report no pass/fail
    }
    j["applicability"] = to_string(v.applicability);
    j["diagnostics"] = v.diagnostics;
    return j;
}

double json_to_double(const json& j) {
    if (j.is_null()) return kNaN;
    return j.get<double>();
}

Verdict verdict_from_json(const json& j) {
    Verdict v;
    v.check_name = j.at("check_name").get<std::string>();
    v.inequality = j.at("inequality").get<std::string>();
    v.lhs = json_to_double(j.at("lhs"));
    v.rhs = json_to_double(j.at("rhs"));
    v.tolerance = json_to_double(j.at("tolerance"));
    v.applicability = applicability_from_string(j.at("applicability").get<std::string>());
    if (v.applicability == Applicability::Applicable) {
        if (!j.at("pass").is_boolean()) {
            throw ConfigError("report: applicable verdict '" + v.check_name +
                              "' must carry a boolean pass");
        }
        v.pass = j.at("pass").get<bool>();
        const bool derived = v.lhs <= v.rhs + v.tolerance;
        if (derived != v.pass) {
            throw ConfigError("report self-validation failed for '" + v.check_name +
                              "': stored pass disagrees with lhs <= rhs + tolerance");
        }
    } else if (!j.at("pass").is_null()) {
        throw ConfigError("report: non-applicable verdict '" + v.check_name +
                          "' must carry pass=null");
    }
    v.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    return v;
}

} // namespace

std::string SuiteReport::to_json() const {
    json j;
    j["suite"] = suite;
    j["seed"] = seed;
    j["verdicts"] = json::array();
    for (const auto& v : verdicts) j["verdicts"].push_back(verdict_to_json(v));
    return j.dump(2) + "\n";
}

SuiteReport SuiteReport::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("report JSON parse error: ") + e.what());
    }
    SuiteReport report;
    report.suite = j.at("suite").get<std::string>();
    report.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& jv : j.at("verdicts")) report.verdicts.push_back(verdict_from_json(jv));
    return report;
}

void SuiteReport::write_table(std::ostream& out) const {
    out << "suite: " << suite << "  seed: " << seed << "\n";
    for (const auto& v : verdicts) {
        const char* status = v.applicability == Applicability::Vacuous      ? "VACUOUS "
                             : v.applicability == Applicability::Unreliable ? "UNRELIAB"
                             : v.pass                                       ? "PASS    "
                                                                            : "FAIL    ";
        out << "  [" << status << "] " << v.check_name << ": " << v.inequality << "\n";
        for (const auto& d : v.diagnostics) out << "      - " << d << "\n";
    }
    out << (all_applicable_pass() ? "RESULT: all applicable checks pass\n"
                                  : "RESULT: failures present\n");
}

SuiteReport run_suite(const std::vector<ProcessSpec>& specs, const SuiteConfig& cfg) {
    if (cfg.suite != "section2" && cfg.suite != "section3" && cfg.suite != "all") {
        throw ConfigError("unknown suite '" + cfg.suite + "' (expected section2|section3|all)");
    }
    SuiteReport report;
    report.suite = cfg.suite;
    report.seed = specs.empty() ? 0 : specs.front().seed();

    const bool want2 = cfg.suite == "section2" || cfg.suite == "all";
    const bool want3 = cfg.suite == "section3" || cfg.suite == "all";

    for (std::size_t idx = 0; idx < specs.size(); ++idx) {
        const ProcessSpec& spec = specs[idx];
        const std::string label = "p" + std::to_string(idx) + ":" + to_string(spec.kind());
        const TrajectoryBatch batch = TrajectoryBatch::simulate(spec, cfg.n_traj, cfg.sim);

        const bool wealth_like = spec.kind() == ProcessKind::WealthIID;
        const bool sphere_like = spec.kind() == ProcessKind::SphereES;

        if (want2 && !wealth_like && !sphere_like) {
            report.verdicts.push_back(check_theorem1(batch, cfg.checks, label));
            report.verdicts.push_back(check_conclusion1(batch, cfg.checks, label));
            report.verdicts.push_back(check_theorem2(batch, cfg.eps_grid, cfg.checks, label));
            report.verdicts.push_back(check_e3_chain(batch, cfg.eps_grid, cfg.checks, label));
            if (!cfg.R_grid.empty()) {
                report.verdicts.push_back(check_lemma_hc(batch, cfg.R_grid, cfg.checks, label));
            }
        }
        if (want3 && wealth_like) {
            const Theorem3Verdicts t3 =
                check_theorem3(batch, cfg.gamma, cfg.b_grid, cfg.checks, label);
            report.verdicts.push_back(t3.growth);
            report.verdicts.push_back(t3.barrier);
            if (cfg.gamma_grid.size() >= 2) {
                GammaMonotonicityVerdicts gm =
                    check_gamma_monotonicity(batch, cfg.gamma_grid, cfg.checks, label);
                report.verdicts.push_back(std::move(gm.monotone));
                report.verdicts.push_back(std::move(gm.limit));
            }
        }
        if (want3 && sphere_like) {
            report.verdicts.push_back(
                check_sublevel_hitting(batch, cfg.es_eps_grid, cfg.checks, label));
        }
        if ((want2 && (wealth_like || sphere_like) && !want3) ||
            (want3 && !wealth_like && !sphere_like && !want2)) {
            Verdict v;
            v.check_name = "suite_scope";
            v.inequality = "(vacuous)";
            v.lhs = kNaN;
            v.rhs = kNaN;
            v.applicability = Applicability::Vacuous;
            v.diagnostics.push_back("process=" + label);
            v.diagnostics.push_back("vacuous: no " + cfg.suite + " checks defined for this kind");
            report.verdicts.push_back(std::move(v));
        }
    }
    return report;
}

} // namespace exporate
