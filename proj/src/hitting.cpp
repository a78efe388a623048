#include "exporate/hitting.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "exporate/errors.hpp"
#include "exporate/estimators.hpp"
#include "exporate/rates.hpp"

namespace exporate {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void finalize_threshold(ThresholdHits& th, std::size_t n_traj, std::size_t horizon,
                        double log_denom) {
    double sum_unc = 0.0;
    std::size_t n_unc = 0;
    double sum_lb = 0.0;
    for (const auto s : th.sample) {
        if (s < 0) {
            sum_lb += static_cast<double>(horizon);
        } else {
            sum_unc += static_cast<double>(s);
            sum_lb += static_cast<double>(s);
            ++n_unc;
        }
    }
    th.censored_count = n_traj - n_unc;
    th.all_censored = (n_unc == 0);
    th.mean_uncensored = th.all_censored ? kNaN : sum_unc / static_cast<double>(n_unc);
    th.mean_lower_bound = sum_lb / static_cast<double>(n_traj);
    th.ratio = (th.all_censored || std::fabs(log_denom) < 1e-12)
                   ? kNaN
                   : th.mean_uncensored / log_denom;
}

} // namespace

HittingSummary hitting_times(const TrajectoryBatch& batch, const std::vector<double>& eps_grid) {
    if (batch.n_traj() == 0) throw InvalidParamsError("hitting_times: empty batch");
    if (eps_grid.empty()) throw InvalidParamsError("hitting_times: empty eps grid");
    for (std::size_t k = 0; k < eps_grid.size(); ++k) {
        if (!(eps_grid[k] > 0.0)) throw InvalidParamsError("hitting_times: eps must be > 0");
        if (k > 0 && !(eps_grid[k] < eps_grid[k - 1])) {
            throw InvalidParamsError("hitting_times: eps grid must be strictly decreasing");
        }
    }

    HittingSummary out;
    out.direction = HittingSummary::Direction::Down;
    out.n_traj = batch.n_traj();
    out.horizon = batch.horizon();
    out.per_threshold.resize(eps_grid.size());
    for (std::size_t k = 0; k < eps_grid.size(); ++k) {
        out.per_threshold[k].threshold = eps_grid[k];
        out.per_threshold[k].sample.assign(batch.n_traj(), -1);
    }

    // One pass per trajectory: thresholds decrease, so hits occur in grid
    // order as t advances.
    for (std::size_t j = 0; j < batch.n_traj(); ++j) {
        std::size_t k = 0;
        for (std::size_t t = 0; t < batch.columns() && k < eps_grid.size(); ++t) {
            const double x = batch.at(j, t);
            while (k < eps_grid.size() && x < eps_grid[k]) {
                out.per_threshold[k].sample[j] = static_cast<std::int64_t>(t);
                ++k;
            }
        }
    }

    for (std::size_t k = 0; k < eps_grid.size(); ++k) {
        finalize_threshold(out.per_threshold[k], batch.n_traj(), batch.horizon(),
                           std::fabs(std::log(eps_grid[k])));
    }
    return out;
}

std::vector<std::optional<std::size_t>> envelope_time_per_trajectory(const TrajectoryBatch& batch,
                                                                     double R) {
    if (!(R > 0.0)) throw InvalidParamsError("envelope_time: R must be > 0");
    const std::size_t cols = batch.columns();
    std::vector<double> rpow(cols);
    for (std::size_t t = 0; t < cols; ++t) rpow[t] = std::pow(R, static_cast<double>(t));

    std::vector<std::optional<std::size_t>> out(batch.n_traj());
    for (std::size_t j = 0; j < batch.n_traj(); ++j) {
        // Backward scan of suffix maxima of X_i / R^i.
        double sufmax = -std::numeric_limits<double>::infinity();
        std::optional<std::size_t> h;
        for (std::size_t ri = cols; ri-- > 0;) {
            sufmax = std::max(sufmax, batch.at(j, ri) / rpow[ri]);
            if (sufmax <= 1.0) h = ri; // smallest index whose suffix fits the envelope
        }
        out[j] = h;
    }
    return out;
}

HittingSummary envelope_times(const TrajectoryBatch& batch, const std::vector<double>& R_grid) {
    if (batch.n_traj() == 0) throw InvalidParamsError("envelope_time: empty batch");
    if (R_grid.empty()) throw InvalidParamsError("envelope_time: empty R grid");

    HittingSummary out;
    out.direction = HittingSummary::Direction::Envelope;
    out.n_traj = batch.n_traj();
    out.horizon = batch.horizon();

    const FiniteSequence curve = expectation_curve(batch);
    for (const double R : R_grid) {
        ThresholdHits th;
        th.threshold = R;
        th.sample.reserve(batch.n_traj());
        for (const auto& h : envelope_time_per_trajectory(batch, R)) {
            th.sample.push_back(h ? static_cast<std::int64_t>(*h) : -1);
        }
        finalize_threshold(th, batch.n_traj(), batch.horizon(), kNaN);
        th.ratio = kNaN; // no log scale for envelope times
        out.per_threshold.push_back(std::move(th));
        out.envelope_bounds.push_back(double_tail_sum(curve, R, SumMode::LogSpace));
    }
    return out;
}

HittingSummary envelope_time(const TrajectoryBatch& batch, double R) {
    return envelope_times(batch, std::vector<double>{R});
}

HittingSummary barrier_times(const TrajectoryBatch& batch, const std::vector<double>& b_grid) {
    if (batch.n_traj() == 0) throw InvalidParamsError("barrier_times: empty batch");
    if (b_grid.empty()) throw InvalidParamsError("barrier_times: empty barrier grid");
    for (std::size_t k = 0; k < b_grid.size(); ++k) {
        if (!(b_grid[k] > 0.0)) throw InvalidParamsError("barrier_times: barriers must be > 0");
        if (k > 0 && !(b_grid[k] > b_grid[k - 1])) {
            throw InvalidParamsError("barrier_times: barrier grid must be strictly increasing");
        }
    }
    if (!batch.all_positive()) {
        throw NonPositiveWealthError("barrier_times: batch must be strictly positive");
    }

    HittingSummary out;
    out.direction = HittingSummary::Direction::Up;
    out.n_traj = batch.n_traj();
    out.horizon = batch.horizon();
    out.per_threshold.resize(b_grid.size());
    for (std::size_t k = 0; k < b_grid.size(); ++k) {
        out.per_threshold[k].threshold = b_grid[k];
        out.per_threshold[k].sample.assign(batch.n_traj(), -1);
    }

    for (std::size_t j = 0; j < batch.n_traj(); ++j) {
        std::size_t k = 0;
        for (std::size_t t = 0; t < batch.columns() && k < b_grid.size(); ++t) {
            const double w = batch.at(j, t);
            while (k < b_grid.size() && w > b_grid[k]) {
                out.per_threshold[k].sample[j] = static_cast<std::int64_t>(t);
                ++k;
            }
        }
    }

    for (std::size_t k = 0; k < b_grid.size(); ++k) {
        finalize_threshold(out.per_threshold[k], batch.n_traj(), batch.horizon(),
                           std::log(b_grid[k]));
    }
    return out;
}

void HittingSummary::write_csv(std::ostream& out) const {
    out << "threshold,statistic,value\n";
    char buf[40], tbuf[40];
    auto emit = [&](double threshold, const char* stat, double value) {
        std::snprintf(tbuf, sizeof(tbuf), "%.17g", threshold);
        out << tbuf << ',' << stat << ',';
        if (std::isnan(value)) {
            out << '\n'; // empty cell: statistic undefined (e.g. all censored)
        } else {
            std::snprintf(buf, sizeof(buf), "%.17g", value);
            out << buf << '\n';
        }
    };
    for (std::size_t k = 0; k < per_threshold.size(); ++k) {
        const auto& th = per_threshold[k];
        emit(th.threshold, "censored_count", static_cast<double>(th.censored_count));
        emit(th.threshold, "mean_uncensored", th.mean_uncensored);
        emit(th.threshold, "mean_lower_bound", th.mean_lower_bound);
        emit(th.threshold, "ratio", th.ratio);
        if (!envelope_bounds.empty()) {
            emit(th.threshold, "double_tail_sum_bound", envelope_bounds[k]);
        }
    }
}

std::string HittingSummary::to_json() const {
    nlohmann::json j;
    j["direction"] = direction == Direction::Down ? "down"
                     : direction == Direction::Up ? "up"
                                                  : "envelope";
    j["n_traj"] = n_traj;
    j["horizon"] = horizon;
    j["thresholds"] = nlohmann::json::array();
    for (std::size_t k = 0; k < per_threshold.size(); ++k) {
        const auto& th = per_threshold[k];
        nlohmann::json e;
        e["threshold"] = th.threshold;
        e["censored_count"] = th.censored_count;
        e["all_censored"] = th.all_censored;
        e["mean_uncensored"] = th.mean_uncensored; // NaN -> null
        e["mean_lower_bound"] = th.mean_lower_bound;
        e["ratio"] = th.ratio;
        e["sample"] = th.sample;
        if (!envelope_bounds.empty()) e["double_tail_sum_bound"] = envelope_bounds[k];
        j["thresholds"].push_back(std::move(e));
    }
    return j.dump();
}

} // namespace exporate
