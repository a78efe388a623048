#include "exporate/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "exporate/errors.hpp"

namespace exporate {

FiniteSequence expectation_curve(const TrajectoryBatch& batch) {
    if (batch.n_traj() == 0) throw InvalidParamsError("expectation_curve: empty batch");
    const std::size_t cols = batch.columns();
    std::vector<double> mean(cols, 0.0);
    for (std::size_t t = 0; t < cols; ++t) {
        double acc = 0.0;
        for (std::size_t j = 0; j < batch.n_traj(); ++j) acc += batch.at(j, t);
        mean[t] = acc / static_cast<double>(batch.n_traj());
    }
    return FiniteSequence(std::move(mean), 0);
}

std::vector<double> expectation_rel_se(const TrajectoryBatch& batch) {
    const std::size_t n = batch.n_traj();
    const std::size_t cols = batch.columns();
    std::vector<double> out(cols, 0.0);
    if (n < 2) return out;
    for (std::size_t t = 0; t < cols; ++t) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += batch.at(j, t);
        const double mean = acc / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = batch.at(j, t) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        if (sd == 0.0) {
            out[t] = 0.0;
        } else if (mean == 0.0) {
            out[t] = std::numeric_limits<double>::infinity();
        } else {
            out[t] = sd / (mean * std::sqrt(static_cast<double>(n)));
        }
    }
    return out;
}

ExpectationRateEstimate estimate_A(const TrajectoryBatch& batch, const EstimateAOptions& opts) {
    const FiniteSequence curve = expectation_curve(batch);
    const std::vector<double> rse = expectation_rel_se(batch);

    ExpectationRateEstimate out;
    out.curve_len = curve.size();

    // Reliable prefix: contiguous from t=0 while rel-SE stays under the cap.
    std::size_t usable = 0;
    while (usable < rse.size() && rse[usable] <= opts.rel_se_cap) ++usable;
    out.usable_len = usable;

    if (opts.truncate_unreliable && usable >= 2 && usable < curve.size()) {
        out.unreliable_tail = true;
        std::vector<double> prefix(curve.values().begin(),
                                   curve.values().begin() + static_cast<std::ptrdiff_t>(usable));
        out.rate = upper_rate(FiniteSequence(std::move(prefix), 0), opts.method,
                              opts.window_fraction);
        return out;
    }

    out.rate = upper_rate(curve, opts.method, opts.window_fraction);
    for (std::size_t i = curve.size() - out.rate.window_len; i < curve.size(); ++i) {
        if (rse[i] > opts.rel_se_cap) {
            out.unreliable_tail = true;
            break;
        }
    }
    return out;
}

TrajectoryRates trajectory_rates(const TrajectoryBatch& batch, RateMethod method,
                                 double window_fraction) {
    if (batch.n_traj() == 0) throw InvalidParamsError("trajectory_rates: empty batch");
    TrajectoryRates out;
    out.rates.reserve(batch.n_traj());
    double acc = 0.0;
    for (std::size_t j = 0; j < batch.n_traj(); ++j) {
        RateEstimate est = upper_rate(batch.row_sequence(j), method, window_fraction);
        out.max_rate = std::max(out.max_rate, est.rate);
        acc += est.rate;
        out.rates.push_back(std::move(est));
    }
    out.mean_rate = acc / static_cast<double>(batch.n_traj());
    return out;
}

TailProbEstimate tail_prob_rate(const TrajectoryBatch& batch, double eps, RateMethod method,
                                double window_fraction) {
    if (!(eps > 0.0)) throw InvalidParamsError("tail_prob_rate: eps must be > 0");
    if (batch.n_traj() == 0) throw InvalidParamsError("tail_prob_rate: empty batch");

    const std::size_t cols = batch.columns();
    std::vector<double> freq(cols, 0.0);
    for (std::size_t t = 0; t < cols; ++t) {
        std::size_t count = 0;
        for (std::size_t j = 0; j < batch.n_traj(); ++j) {
            if (batch.at(j, t) >= eps) ++count;
        }
        freq[t] = static_cast<double>(count) / static_cast<double>(batch.n_traj());
    }

    TailProbEstimate out;
    out.exceedance = FiniteSequence(std::move(freq), 0);

    const std::size_t n = out.exceedance.size();
    auto wlen = static_cast<std::size_t>(std::ceil(window_fraction * static_cast<double>(n)));
    wlen = std::min(std::max<std::size_t>(wlen, 2), n);
    const std::size_t wbegin = n - wlen;
    bool all0 = true, all1 = true;
    for (std::size_t i = wbegin; i < n; ++i) {
        if (out.exceedance[i] != 0.0) all0 = false;
        if (out.exceedance[i] != 1.0) all1 = false;
    }
    if (all0 || all1) {
        out.degenerate = true;
        out.rate.rate = all0 ? 0.0 : 1.0;
        out.rate.method = method;
        out.rate.window_start = wbegin;
        out.rate.window_len = wlen;
        out.rate.diagnostic = 0.0;
        return out;
    }
    out.rate = upper_rate(out.exceedance, method, window_fraction);
    return out;
}

bool markov_identity_holds(const TrajectoryBatch& batch, double eps) {
    if (!(eps > 0.0)) throw InvalidParamsError("markov_identity_holds: eps must be > 0");
    for (std::size_t t = 0; t < batch.columns(); ++t) {
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t j = 0; j < batch.n_traj(); ++j) {
            const double x = batch.at(j, t);
            lhs += x;
            rhs += (x >= eps) ? eps : 0.0;
        }
        if (!(lhs >= rhs)) return false;
    }
    return true;
}

} // namespace exporate
