#include "exporate/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "exporate/errors.hpp"

namespace exporate {

namespace {

struct CurveWindow {
    std::size_t start; // in t units, >= 1
    std::size_t len;
};

CurveWindow risk_window(std::size_t horizon, double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0) {
        throw InvalidParamsError("window fraction must be in (0,1]");
    }
    if (horizon < 2) throw InvalidParamsError("risk window: horizon must be >= 2");
    auto len = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(horizon)));
    len = std::min(std::max<std::size_t>(len, 2), horizon);
    return {horizon - len + 1, len};
}

} // namespace

RiskEstimate risk_criterion(const TrajectoryBatch& batch, double gamma, const RiskOptions& opts) {
    if (!(gamma < 0.0)) throw InvalidParamsError("risk_criterion: gamma must be < 0");
    if (batch.n_traj() == 0) throw InvalidParamsError("risk_criterion: empty batch");
    if (!batch.all_positive()) {
        throw NonPositiveWealthError("risk_criterion: batch must be strictly positive");
    }

    const std::size_t n = batch.n_traj();
    const std::size_t T = batch.horizon();
    const auto logn = std::log(static_cast<double>(n));

    RiskEstimate out;
    out.gamma = gamma;
    out.curve.resize(T);

    // Per-t curve via log-sum-exp of gamma * log W_t.
    std::vector<double> shifted(n);
    const CurveWindow win = risk_window(T, opts.window_fraction);
    out.window_start = win.start;
    out.window_len = win.len;

    // Window bookkeeping for the jackknife: exp-shifted contributions and
    // column sums.
    std::vector<std::vector<double>> win_terms;
    std::vector<double> win_shift(win.len), win_sum(win.len);
    if (opts.jackknife) win_terms.assign(win.len, std::vector<double>(n));

    for (std::size_t t = 1; t <= T; ++t) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            shifted[j] = gamma * std::log(batch.at(j, t));
            mx = std::max(mx, shifted[j]);
        }
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            shifted[j] = std::exp(shifted[j] - mx);
            acc += shifted[j];
        }
        const double log_mean = mx + std::log(acc) - logn;
        out.curve[t - 1] = log_mean / (static_cast<double>(t) * gamma);

        if (t >= win.start) {
            const std::size_t wi = t - win.start;
            win_shift[wi] = mx;
            win_sum[wi] = acc;
            if (opts.jackknife) win_terms[wi] = shifted;

            // Relative SE of the gamma-moment estimate, computed on the
            // shifted terms (shift-invariant).
            if (n >= 2) {
                double ss = 0.0;
                const double mean_term = acc / static_cast<double>(n);
                for (std::size_t j = 0; j < n; ++j) {
                    const double d = shifted[j] - mean_term;
                    ss += d * d;
                }
                const double sd = std::sqrt(ss / static_cast<double>(n - 1));
                const double relse = (mean_term > 0.0)
                                         ? sd / (mean_term * std::sqrt(static_cast<double>(n)))
                                         : 0.0;
                if (relse > opts.rel_se_cap) out.unreliable_tail = true;
            }
        }
    }

    out.c_hat = std::numeric_limits<double>::infinity();
    for (std::size_t wi = 0; wi < win.len; ++wi) {
        out.c_hat = std::min(out.c_hat, out.curve[win.start - 1 + wi]);
    }

    if (opts.jackknife && n >= 2) {
        // Delete-one recomputation of the windowed minimum; deterministic,
        // no resampling RNG to keep reruns byte-identical.
        std::vector<double> theta(n);
        double theta_mean = 0.0;
        const double logn1 = std::log(static_cast<double>(n - 1));
        for (std::size_t j = 0; j < n; ++j) {
            double cmin = std::numeric_limits<double>::infinity();
            for (std::size_t wi = 0; wi < win.len; ++wi) {
                const double rest = win_sum[wi] - win_terms[wi][j];
                const double t = static_cast<double>(win.start + wi);
                const double log_mean =
                    (rest > 0.0) ? win_shift[wi] + std::log(rest) - logn1
                                 : -std::numeric_limits<double>::infinity();
                cmin = std::min(cmin, log_mean / (t * gamma));
            }
            theta[j] = cmin;
            theta_mean += cmin;
        }
        theta_mean /= static_cast<double>(n);
        double ss = 0.0;
        for (double th : theta) {
            const double d = th - theta_mean;
            ss += d * d;
        }
        out.standard_error =
            std::sqrt(ss * static_cast<double>(n - 1) / static_cast<double>(n));
        if (!std::isfinite(out.standard_error)) out.unreliable_tail = true;
    }
    return out;
}

LogGrowthSummary log_growth_rates(const TrajectoryBatch& batch, double window_fraction) {
    if (batch.n_traj() == 0) throw InvalidParamsError("log_growth_rates: empty batch");
    if (!batch.all_positive()) {
        throw NonPositiveWealthError("log_growth_rates: batch must be strictly positive");
    }
    const std::size_t T = batch.horizon();
    const CurveWindow win = risk_window(T, window_fraction);

    LogGrowthSummary out;
    out.window_start = win.start;
    out.window_len = win.len;
    out.final_rate.resize(batch.n_traj());
    out.tail_min_rate.resize(batch.n_traj());
    double acc = 0.0;
    for (std::size_t j = 0; j < batch.n_traj(); ++j) {
        out.final_rate[j] = std::log(batch.at(j, T)) / static_cast<double>(T);
        acc += out.final_rate[j];
        double mn = std::numeric_limits<double>::infinity();
        for (std::size_t t = win.start; t <= T; ++t) {
            mn = std::min(mn, std::log(batch.at(j, t)) / static_cast<double>(t));
        }
        out.tail_min_rate[j] = mn;
    }
    out.mean_final = acc / static_cast<double>(batch.n_traj());
    return out;
}

} // namespace exporate
