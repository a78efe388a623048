#include "exporate/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "exporate/errors.hpp"

namespace exporate {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Window {
    std::size_t begin; // storage offset
    std::size_t len;
};

Window tail_window(std::size_t n, double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0) {
        throw InvalidParamsError("window fraction must be in (0,1]");
    }
    auto len = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    len = std::min(len, n);
    if (len < 2) {
        throw InvalidParamsError("window too small: need window*length >= 2");
    }
    return {n - len, len};
}

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const auto n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return sxy / sxx;
}

} // namespace

std::string to_string(RateMethod m) {
    return m == RateMethod::TailSupRoot ? "tail_sup_root" : "log_regression";
}

RateMethod rate_method_from_string(const std::string& s) {
    if (s == "tail_sup_root") return RateMethod::TailSupRoot;
    if (s == "log_regression") return RateMethod::LogRegression;
    throw InvalidParamsError("unknown rate method: " + s);
}

RateEstimate upper_rate(const FiniteSequence& seq, RateMethod method, double window_fraction) {
    const Window win = tail_window(seq.size(), window_fraction);

    RateEstimate est;
    est.method = method;
    est.window_start = seq.time_at(win.begin);
    est.window_len = win.len;

    // Per-index roots; t=0 excluded, x=0 contributes 0 under the log(0)=-inf
    // convention (0^(1/t) = 0).
    std::vector<double> roots;
    roots.reserve(win.len);
    std::vector<double> ts, logs;

    for (std::size_t i = win.begin; i < win.begin + win.len; ++i) {
        const auto t = seq.time_at(i);
        if (t == 0) continue;
        const double x = seq[i];
        if (x > 0.0) {
            const double root = std::exp(std::log(x) / static_cast<double>(t));
            roots.push_back(root);
            ts.push_back(static_cast<double>(t));
            logs.push_back(std::log(x));
        } else {
            roots.push_back(0.0);
            if (method == RateMethod::LogRegression) ++est.skipped;
        }
    }

    if (method == RateMethod::TailSupRoot) {
        if (roots.empty()) {
            throw EmptyWindowError("tail_sup_root: no usable indices in window");
        }
        est.rate = *std::max_element(roots.begin(), roots.end());
    } else {
        if (ts.size() < 2) {
            throw EmptyWindowError("log_regression: fewer than 2 positive entries in window");
        }
        est.rate = std::exp(ls_slope(ts, logs));
    }

    double dev = 0.0;
    for (double r : roots) dev = std::max(dev, std::fabs(r - est.rate));
    est.diagnostic = dev;
    return est;
}

double envelope_constant(const FiniteSequence& seq, double R) {
    if (!(R > 0.0)) throw InvalidParamsError("envelope_constant: R must be > 0");
    double best = 0.0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto t = static_cast<double>(seq.time_at(i));
        const double ratio = seq[i] / std::pow(R, t);
        best = std::max(best, ratio);
    }
    return best;
}

namespace {

double weighted_ratio_sum(const FiniteSequence& seq, double R, SumMode mode,
                          bool double_tail, const char* op_name) {
    if (!(R > 0.0)) throw InvalidParamsError(std::string(op_name) + ": R must be > 0");
    const double log_r = std::log(R);

    if (mode == SumMode::Direct) {
        double total = 0.0;
        for (std::size_t i = 0; i < seq.size(); ++i) {
            const auto t = static_cast<double>(seq.time_at(i));
            const double weight = double_tail ? static_cast<double>(i + 1) : 1.0;
            const double term = weight * seq[i] / std::pow(R, t);
            if (!std::isfinite(term)) {
                throw OverflowError(std::string(op_name) +
                                    ": term overflow at t=" + std::to_string(seq.time_at(i)) +
                                    " (use log-space mode)");
            }
            total += term;
        }
        if (!std::isfinite(total)) {
            throw OverflowError(std::string(op_name) + ": sum overflow (use log-space mode)");
        }
        return total;
    }

    // Log-sum-exp accumulation: log terms are weight_log + log x_t - t log R.
    std::vector<double> log_terms;
    log_terms.reserve(seq.size());
    double max_log = kNegInf;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const double x = seq[i];
        if (x == 0.0) continue;
        const auto t = static_cast<double>(seq.time_at(i));
        const double wlog = double_tail ? std::log(static_cast<double>(i + 1)) : 0.0;
        const double lt = wlog + std::log(x) - t * log_r;
        log_terms.push_back(lt);
        max_log = std::max(max_log, lt);
    }
    if (log_terms.empty()) return 0.0;
    double acc = 0.0;
    for (double lt : log_terms) acc += std::exp(lt - max_log);
    const double result = std::exp(max_log + std::log(acc));
    if (!std::isfinite(result)) {
        throw OverflowError(std::string(op_name) + ": result exceeds double range (log value " +
                            std::to_string(max_log + std::log(acc)) + ")");
    }
    return result;
}

} // namespace

double tail_sum(const FiniteSequence& seq, double R, SumMode mode) {
    return weighted_ratio_sum(seq, R, mode, /*double_tail=*/false, "tail_sum");
}

double double_tail_sum(const FiniteSequence& seq, double R, SumMode mode) {
    return weighted_ratio_sum(seq, R, mode, /*double_tail=*/true, "double_tail_sum");
}

std::optional<std::size_t> deterministic_hitting(const FiniteSequence& seq, double eps) {
    if (!(eps > 0.0)) throw InvalidParamsError("deterministic_hitting: eps must be > 0");
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seq[i] < eps) return seq.time_at(i);
    }
    return std::nullopt;
}

EquivalenceReport check_equivalence(const FiniteSequence& seq, double C,
                                    const std::vector<double>& R_grid,
                                    const EquivalenceOptions& opts) {
    if (R_grid.empty()) throw InvalidParamsError("check_equivalence: R_grid must be nonempty");
    if (C < 0.0) throw InvalidParamsError("check_equivalence: C must be >= 0");
    for (double R : R_grid) {
        if (!(R > C)) throw InvalidParamsError("check_equivalence: every R must exceed C");
    }

    EquivalenceReport report;
    report.claimed_bound = C;
    report.observed_rate = upper_rate(seq, RateMethod::TailSupRoot, opts.window_fraction);

    const std::size_t n = seq.size();
    const std::size_t decile = std::max<std::size_t>(1, n / 10);
    const Window trend_win = tail_window(n, opts.window_fraction);

    for (double R : R_grid) {
        EquivalenceRow row;
        row.R = R;
        row.sup_ratio = envelope_constant(seq, R);
        double acc = 0.0;
        for (std::size_t i = n - decile; i < n; ++i) {
            acc += seq[i] / std::pow(R, static_cast<double>(seq.time_at(i)));
        }
        row.last_decile_mean_ratio = acc / static_cast<double>(decile);
        row.tail_sum_value = tail_sum(seq, R, opts.sum_mode);
        row.double_tail_sum_value = double_tail_sum(seq, R, opts.sum_mode);

        std::vector<double> ts, logs;
        for (std::size_t i = trend_win.begin; i < trend_win.begin + trend_win.len; ++i) {
            if (seq[i] > 0.0) {
                ts.push_back(static_cast<double>(seq.time_at(i)));
                logs.push_back(std::log(seq[i]) -
                               static_cast<double>(seq.time_at(i)) * std::log(R));
            }
        }
        if (ts.size() >= 2) {
            row.trend_slope = ls_slope(ts, logs);
            row.increasing = row.trend_slope > opts.trend_tolerance;
        } else {
            row.trend_slope = 0.0;
            row.increasing = false;
            report.notes.push_back("R=" + std::to_string(R) +
                                   ": trend window has <2 positive entries");
        }
        report.rows.push_back(row);
    }

    report.consistent = true;
    if (report.observed_rate.rate > C + opts.rate_tolerance) {
        report.consistent = false;
        report.notes.push_back("observed rate " + std::to_string(report.observed_rate.rate) +
                               " exceeds claimed bound " + std::to_string(C));
    }
    for (const auto& row : report.rows) {
        if (row.increasing) {
            report.consistent = false;
            report.notes.push_back("ratio trend increasing at R=" + std::to_string(row.R));
        }
    }
    return report;
}

std::size_t smallest_power_at_most(double C, double eps) {
    if (!(C > 0.0) || !(C < 1.0)) {
        throw InvalidParamsError("smallest_power_at_most: C must be in (0,1)");
    }
    if (!(eps > 0.0)) throw InvalidParamsError("smallest_power_at_most: eps must be > 0");
    if (eps >= 1.0) return 0;
    double guess = std::ceil(std::log(eps) / std::log(C));
    if (guess < 0.0) guess = 0.0;
    auto m = static_cast<std::size_t>(guess);
    while (std::pow(C, static_cast<double>(m)) > eps) ++m;
    while (m > 0 && std::pow(C, static_cast<double>(m - 1)) <= eps) --m;
    return m;
}

} // namespace exporate
