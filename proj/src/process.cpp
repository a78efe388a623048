#include "exporate/process.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "exporate/errors.hpp"
#include "exporate/rng.hpp"

namespace exporate {

using nlohmann::json;

std::string to_string(ProcessKind k) {
    switch (k) {
        case ProcessKind::DeterministicGeometric: return "DeterministicGeometric";
        case ProcessKind::GeometricProduct: return "GeometricProduct";
        case ProcessKind::IndicatorLazy: return "IndicatorLazy";
        case ProcessKind::SphereES: return "SphereES";
        case ProcessKind::WealthIID: return "WealthIID";
        case ProcessKind::SampleMeanEstimator: return "SampleMeanEstimator";
    }
    throw InvalidParamsError("unreachable process kind");
}

ProcessKind process_kind_from_string(const std::string& s) {
    if (s == "DeterministicGeometric") return ProcessKind::DeterministicGeometric;
    if (s == "GeometricProduct") return ProcessKind::GeometricProduct;
    if (s == "IndicatorLazy") return ProcessKind::IndicatorLazy;
    if (s == "SphereES") return ProcessKind::SphereES;
    if (s == "WealthIID") return ProcessKind::WealthIID;
    if (s == "SampleMeanEstimator") return ProcessKind::SampleMeanEstimator;
    throw InvalidParamsError("unknown process kind: " + s);
}

double ReferenceConstants::risk_criterion(double gamma) const {
    if (!has_risk_criterion) {
        throw InvalidParamsError("risk criterion reference not available for this kind");
    }
    if (!(gamma < 0.0)) throw InvalidParamsError("risk criterion reference requires gamma < 0");
    return risk_mu + gamma * risk_sigma * risk_sigma / 2.0;
}

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidParamsError(msg);
}

// Geometric(q) latent draw via inverse CDF: P[n >= k] = q^k.
std::uint64_t sample_geometric(double q, double u) {
    const double x = std::floor(std::log1p(-u) / std::log(q));
    if (!(x >= 0.0)) return 0;
    if (x > 1e18) return static_cast<std::uint64_t>(1e18);
    return static_cast<std::uint64_t>(x);
}

} // namespace

ProcessSpec::ProcessSpec(ProcessKind kind, ProcessParams params, std::uint64_t seed,
                         std::size_t horizon)
    : kind_(kind), params_(std::move(params)), seed_(seed), horizon_(horizon) {
    validate();
    if (kind_ == ProcessKind::IndicatorLazy) {
        const auto& p = std::get<IndicatorLazyParams>(params_);
        if (const auto* pl = std::get_if<PowerLawLatent>(&p.latent)) {
            // Normalized cumulative weights over n = 1..n_max; the lost tail
            // mass is bounded by the integral remainder and reported.
            auto cdf = std::make_shared<std::vector<double>>();
            cdf->resize(pl->n_max);
            double acc = 0.0;
            for (std::uint64_t n = 1; n <= pl->n_max; ++n) {
                acc += std::pow(static_cast<double>(n), -pl->alpha);
                (*cdf)[n - 1] = acc;
            }
            const double tail =
                std::pow(static_cast<double>(pl->n_max), 1.0 - pl->alpha) / (pl->alpha - 1.0);
            powerlaw_tail_bound_ = tail / (acc + tail);
            for (auto& c : *cdf) c /= acc;
            cdf->back() = 1.0;
            powerlaw_cdf_ = std::move(cdf);
        }
    }
}

void ProcessSpec::validate() const {
    require(horizon_ >= 1, "horizon must be >= 1");

    struct Validator {
        void operator()(const DeterministicGeometricParams& p) const {
            require(p.rho > 0.0 && std::isfinite(p.rho), "DeterministicGeometric: rho must be > 0");
            require(p.x0 > 0.0 && std::isfinite(p.x0), "DeterministicGeometric: x0 must be > 0");
        }
        void operator()(const GeometricProductParams& p) const {
            if (const auto* u = std::get_if<UniformDist>(&p.multiplier)) {
                require(u->a >= 0.0 && u->a < u->b && std::isfinite(u->b),
                        "GeometricProduct: uniform multiplier needs 0 <= a < b");
            } else {
                const auto& ln = std::get<LogNormalDist>(p.multiplier);
                require(std::isfinite(ln.mu), "GeometricProduct: lognormal mu must be finite");
                require(ln.sigma > 0.0 && std::isfinite(ln.sigma),
                        "GeometricProduct: lognormal sigma must be > 0");
            }
        }
        void operator()(const IndicatorLazyParams& p) const {
            if (const auto* g = std::get_if<GeometricLatent>(&p.latent)) {
                require(g->q > 0.0 && g->q < 1.0, "IndicatorLazy: q must be in (0,1)");
            } else {
                const auto& pl = std::get<PowerLawLatent>(p.latent);
                require(pl.alpha > 1.0 && std::isfinite(pl.alpha),
                        "IndicatorLazy: power-law alpha must be > 1");
                require(pl.n_max >= 1 && pl.n_max <= 200'000'000,
                        "IndicatorLazy: n_max must be in [1, 2e8]");
            }
        }
        void operator()(const SphereEsParams& p) const {
            require(p.dim >= 1, "SphereES: dim must be >= 1");
            require(p.z0.size() == p.dim, "SphereES: z0 must have dim entries");
            for (double v : p.z0) require(std::isfinite(v), "SphereES: z0 must be finite");
            require(p.sigma0 > 0.0 && std::isfinite(p.sigma0), "SphereES: sigma0 must be > 0");
            require(p.up > 1.0 && std::isfinite(p.up), "SphereES: up factor must be > 1");
            require(p.down > 0.0 && p.down < 1.0, "SphereES: down factor must be in (0,1)");
            require(p.adapt_window >= 1, "SphereES: adapt_window must be >= 1");
        }
        void operator()(const WealthIidParams& p) const {
            require(std::isfinite(p.mu), "WealthIID: mu must be finite");
            require(p.sigma >= 0.0 && std::isfinite(p.sigma), "WealthIID: sigma must be >= 0");
        }
        void operator()(const SampleMeanParams& p) const {
            require(std::isfinite(p.theta), "SampleMeanEstimator: theta must be finite");
            require(p.noise_std > 0.0 && std::isfinite(p.noise_std),
                    "SampleMeanEstimator: noise_std must be > 0");
        }
    };

    const bool kind_matches =
        (kind_ == ProcessKind::DeterministicGeometric &&
         std::holds_alternative<DeterministicGeometricParams>(params_)) ||
        (kind_ == ProcessKind::GeometricProduct &&
         std::holds_alternative<GeometricProductParams>(params_)) ||
        (kind_ == ProcessKind::IndicatorLazy &&
         std::holds_alternative<IndicatorLazyParams>(params_)) ||
        (kind_ == ProcessKind::SphereES && std::holds_alternative<SphereEsParams>(params_)) ||
        (kind_ == ProcessKind::WealthIID && std::holds_alternative<WealthIidParams>(params_)) ||
        (kind_ == ProcessKind::SampleMeanEstimator &&
         std::holds_alternative<SampleMeanParams>(params_));
    require(kind_matches, "process params do not match kind");
    std::visit(Validator{}, params_);
}

void ProcessSpec::fill_trajectory(std::uint32_t traj_index, double* out) const {
    CounterRng rng(seed_, traj_index);
    const std::size_t T = horizon_;

    switch (kind_) {
        case ProcessKind::DeterministicGeometric: {
            const auto& p = std::get<DeterministicGeometricParams>(params_);
            double x = p.x0;
            out[0] = x;
            for (std::size_t t = 1; t <= T; ++t) {
                x *= p.rho;
                out[t] = x;
            }
            break;
        }
        case ProcessKind::GeometricProduct: {
            const auto& p = std::get<GeometricProductParams>(params_);
            double x = 1.0;
            out[0] = x;
            for (std::size_t t = 1; t <= T; ++t) {
                double u;
                if (const auto* uni = std::get_if<UniformDist>(&p.multiplier)) {
                    u = rng.next_uniform(uni->a, uni->b);
                } else {
                    const auto& ln = std::get<LogNormalDist>(p.multiplier);
                    u = std::exp(ln.mu + ln.sigma * rng.next_normal());
                }
                x *= u;
                out[t] = x;
            }
            break;
        }
        case ProcessKind::IndicatorLazy: {
            const auto& p = std::get<IndicatorLazyParams>(params_);
            std::uint64_t n;
            if (const auto* g = std::get_if<GeometricLatent>(&p.latent)) {
                n = sample_geometric(g->q, rng.next_unit());
            } else {
                const double u = rng.next_unit();
                const auto& cdf = *powerlaw_cdf_;
                const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
                n = static_cast<std::uint64_t>(it - cdf.begin()) + 1; // support starts at 1
            }
            // X_t = 1 while n > t, 0 once n <= t: a single downward jump at t=n.
            for (std::size_t t = 0; t <= T; ++t) {
                out[t] = (n > t) ? 1.0 : 0.0;
            }
            break;
        }
        case ProcessKind::SphereES: {
            const auto& p = std::get<SphereEsParams>(params_);
            std::vector<double> z = p.z0;
            std::vector<double> cand(p.dim);
            double sigma = p.sigma0;
            double f = 0.0;
            for (double v : z) f += v * v;
            out[0] = f;
            std::size_t successes = 0;
            for (std::size_t t = 1; t <= T; ++t) {
                double fc = 0.0;
                for (std::size_t i = 0; i < p.dim; ++i) {
                    cand[i] = z[i] + sigma * rng.next_normal();
                    fc += cand[i] * cand[i];
                }
                if (fc < f) { // elitist acceptance
                    z.swap(cand);
                    f = fc;
                    ++successes;
                }
                if (t % p.adapt_window == 0) {
                    const double rate =
                        static_cast<double>(successes) / static_cast<double>(p.adapt_window);
                    if (rate > 0.2) sigma *= p.up;
                    else if (rate < 0.2) sigma *= p.down;
                    successes = 0;
                }
                out[t] = f;
            }
            break;
        }
        case ProcessKind::WealthIID: {
            const auto& p = std::get<WealthIidParams>(params_);
            double logw = 0.0;
            out[0] = 1.0;
            for (std::size_t t = 1; t <= T; ++t) {
                logw += p.mu + p.sigma * rng.next_normal();
                out[t] = std::exp(logw);
            }
            break;
        }
        case ProcessKind::SampleMeanEstimator: {
            const auto& p = std::get<SampleMeanParams>(params_);
            // Running-mean error; t=0 has no observations, anchored at the
            // noise scale so E[X_t] = s^2/t holds from t=1 on.
            out[0] = p.noise_std * p.noise_std;
            double sum = 0.0;
            for (std::size_t t = 1; t <= T; ++t) {
                sum += p.noise_std * rng.next_normal();
                const double err = sum / static_cast<double>(t);
                out[t] = err * err;
            }
            break;
        }
    }
}

FiniteSequence ProcessSpec::sample_trajectory(std::uint32_t traj_index) const {
    std::vector<double> values(horizon_ + 1);
    fill_trajectory(traj_index, values.data());
    return FiniteSequence(std::move(values), 0);
}

ReferenceConstants ProcessSpec::reference_constants() const {
    ReferenceConstants rc;
    switch (kind_) {
        case ProcessKind::DeterministicGeometric: {
            const auto& p = std::get<DeterministicGeometricParams>(params_);
            rc.expectation_rate = p.rho;
            rc.trajectory_rate = p.rho;
            break;
        }
        case ProcessKind::GeometricProduct: {
            const auto& p = std::get<GeometricProductParams>(params_);
            if (const auto* u = std::get_if<UniformDist>(&p.multiplier)) {
                rc.expectation_rate = (u->a + u->b) / 2.0;
                // E[log U] = (b log b - a log a - (b - a)) / (b - a), a log a -> 0 at a=0.
                const double alog = (u->a == 0.0) ? 0.0 : u->a * std::log(u->a);
                rc.trajectory_rate =
                    std::exp((u->b * std::log(u->b) - alog - (u->b - u->a)) / (u->b - u->a));
            } else {
                const auto& ln = std::get<LogNormalDist>(p.multiplier);
                rc.expectation_rate = std::exp(ln.mu + ln.sigma * ln.sigma / 2.0);
                rc.trajectory_rate = std::exp(ln.mu);
            }
            break;
        }
        case ProcessKind::IndicatorLazy: {
            const auto& p = std::get<IndicatorLazyParams>(params_);
            if (const auto* g = std::get_if<GeometricLatent>(&p.latent)) {
                rc.expectation_rate = g->q; // E[X_t] = P[n > t] = q^(t+1)
            }
            // Power law: E[X_t] ~ c/t, sub-exponential; no finite constant.
            rc.trajectory_rate = 0.0; // every trajectory is eventually exactly 0
            break;
        }
        case ProcessKind::SphereES:
            break; // estimated only; f_min = 0 by construction
        case ProcessKind::WealthIID: {
            const auto& p = std::get<WealthIidParams>(params_);
            rc.growth_rate = p.mu;
            rc.has_risk_criterion = true;
            rc.risk_mu = p.mu;
            rc.risk_sigma = p.sigma;
            break;
        }
        case ProcessKind::SampleMeanEstimator:
            rc.expectation_rate = 1.0; // E[X_t] = s^2/t decays sub-exponentially
            break;
    }
    return rc;
}

double ProcessSpec::truncation_mass() const { return powerlaw_tail_bound_; }

namespace {

double get_number(const json& j, const std::string& key, const std::string& ctx) {
    if (!j.contains(key)) throw InvalidParamsError(ctx + ": missing field '" + key + "'");
    if (!j.at(key).is_number()) throw InvalidParamsError(ctx + ": field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& ctx) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) {
            if (it.key() == k) { ok = true; break; }
        }
        if (!ok) throw InvalidParamsError(ctx + ": unknown field '" + it.key() + "'");
    }
}

json params_to_json(const ProcessParams& params) {
    json j;
    if (const auto* p = std::get_if<DeterministicGeometricParams>(&params)) {
        j["rho"] = p->rho;
        j["x0"] = p->x0;
    } else if (const auto* p = std::get_if<GeometricProductParams>(&params)) {
        json m;
        if (const auto* u = std::get_if<UniformDist>(&p->multiplier)) {
            m["dist"] = "uniform";
            m["a"] = u->a;
            m["b"] = u->b;
        } else {
            const auto& ln = std::get<LogNormalDist>(p->multiplier);
            m["dist"] = "lognormal";
            m["mu"] = ln.mu;
            m["sigma"] = ln.sigma;
        }
        j["multiplier"] = m;
    } else if (const auto* p = std::get_if<IndicatorLazyParams>(&params)) {
        json l;
        if (const auto* g = std::get_if<GeometricLatent>(&p->latent)) {
            l["dist"] = "geometric";
            l["q"] = g->q;
        } else {
            const auto& pl = std::get<PowerLawLatent>(p->latent);
            l["dist"] = "power_law";
            l["alpha"] = pl.alpha;
            l["n_max"] = pl.n_max;
        }
        j["latent"] = l;
    } else if (const auto* p = std::get_if<SphereEsParams>(&params)) {
        j["dim"] = p->dim;
        j["z0"] = p->z0;
        j["sigma0"] = p->sigma0;
        j["up"] = p->up;
        j["down"] = p->down;
        j["adapt_window"] = p->adapt_window;
    } else if (const auto* p = std::get_if<WealthIidParams>(&params)) {
        j["mu"] = p->mu;
        j["sigma"] = p->sigma;
    } else if (const auto* p = std::get_if<SampleMeanParams>(&params)) {
        j["theta"] = p->theta;
        j["noise_std"] = p->noise_std;
    }
    return j;
}

ProcessParams params_from_json(ProcessKind kind, const json& j) {
    const std::string ctx = "params(" + to_string(kind) + ")";
    if (!j.is_object()) throw InvalidParamsError(ctx + ": params must be an object");
    switch (kind) {
        case ProcessKind::DeterministicGeometric: {
            reject_unknown(j, {"rho", "x0"}, ctx);
            DeterministicGeometricParams p;
            p.rho = get_number(j, "rho", ctx);
            p.x0 = j.contains("x0") ? get_number(j, "x0", ctx) : 1.0;
            return p;
        }
        case ProcessKind::GeometricProduct: {
            reject_unknown(j, {"multiplier"}, ctx);
            if (!j.contains("multiplier")) throw InvalidParamsError(ctx + ": missing 'multiplier'");
            const json& m = j.at("multiplier");
            if (!m.contains("dist")) throw InvalidParamsError(ctx + ": multiplier missing 'dist'");
            const std::string dist = m.at("dist").get<std::string>();
            GeometricProductParams p;
            if (dist == "uniform") {
                reject_unknown(m, {"dist", "a", "b"}, ctx);
                p.multiplier = UniformDist{get_number(m, "a", ctx), get_number(m, "b", ctx)};
            } else if (dist == "lognormal") {
                reject_unknown(m, {"dist", "mu", "sigma"}, ctx);
                p.multiplier = LogNormalDist{get_number(m, "mu", ctx), get_number(m, "sigma", ctx)};
            } else {
                throw InvalidParamsError(ctx + ": unknown multiplier dist '" + dist + "'");
            }
            return p;
        }
        case ProcessKind::IndicatorLazy: {
            reject_unknown(j, {"latent"}, ctx);
            if (!j.contains("latent")) throw InvalidParamsError(ctx + ": missing 'latent'");
            const json& l = j.at("latent");
            if (!l.contains("dist")) throw InvalidParamsError(ctx + ": latent missing 'dist'");
            const std::string dist = l.at("dist").get<std::string>();
            IndicatorLazyParams p;
            if (dist == "geometric") {
                reject_unknown(l, {"dist", "q"}, ctx);
                p.latent = GeometricLatent{get_number(l, "q", ctx)};
            } else if (dist == "power_law") {
                reject_unknown(l, {"dist", "alpha", "n_max"}, ctx);
                PowerLawLatent pl;
                pl.alpha = get_number(l, "alpha", ctx);
                if (l.contains("n_max")) pl.n_max = l.at("n_max").get<std::uint64_t>();
                p.latent = pl;
            } else {
                throw InvalidParamsError(ctx + ": unknown latent dist '" + dist + "'");
            }
            return p;
        }
        case ProcessKind::SphereES: {
            reject_unknown(j, {"dim", "z0", "sigma0", "up", "down", "adapt_window"}, ctx);
            SphereEsParams p;
            p.dim = j.contains("dim") ? j.at("dim").get<std::size_t>() : 10;
            if (!j.contains("z0") || !j.at("z0").is_array()) {
                throw InvalidParamsError(ctx + ": 'z0' must be an array");
            }
            p.z0 = j.at("z0").get<std::vector<double>>();
            p.sigma0 = j.contains("sigma0") ? get_number(j, "sigma0", ctx) : 1.0;
            if (j.contains("up")) p.up = get_number(j, "up", ctx);
            if (j.contains("down")) p.down = get_number(j, "down", ctx);
            if (j.contains("adapt_window")) p.adapt_window = j.at("adapt_window").get<std::size_t>();
            return p;
        }
        case ProcessKind::WealthIID: {
            reject_unknown(j, {"mu", "sigma"}, ctx);
            return WealthIidParams{get_number(j, "mu", ctx), get_number(j, "sigma", ctx)};
        }
        case ProcessKind::SampleMeanEstimator: {
            reject_unknown(j, {"theta", "noise_std"}, ctx);
            return SampleMeanParams{get_number(j, "theta", ctx), get_number(j, "noise_std", ctx)};
        }
    }
    throw InvalidParamsError("unreachable kind in params_from_json");
}

} // namespace

std::string ProcessSpec::to_json() const {
    json j;
    j["kind"] = to_string(kind_);
    j["params"] = params_to_json(params_);
    j["seed"] = seed_;
    j["horizon"] = horizon_;
    return j.dump();
}

ProcessSpec ProcessSpec::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidParamsError(std::string("process spec JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw InvalidParamsError("process spec: expected a JSON object");
    reject_unknown(j, {"kind", "params", "seed", "horizon"}, "process spec");
    for (const char* key : {"kind", "params", "seed", "horizon"}) {
        if (!j.contains(key)) {
            throw InvalidParamsError(std::string("process spec: missing field '") + key + "'");
        }
    }
    if (!j.at("kind").is_string()) throw InvalidParamsError("process spec: 'kind' must be a string");
    const ProcessKind kind = process_kind_from_string(j.at("kind").get<std::string>());
    if (!j.at("seed").is_number_integer() && !j.at("seed").is_number_unsigned()) {
        throw InvalidParamsError("process spec: 'seed' must be an integer");
    }
    if (!j.at("horizon").is_number_integer() && !j.at("horizon").is_number_unsigned()) {
        throw InvalidParamsError("process spec: 'horizon' must be an integer");
    }
    return ProcessSpec(kind, params_from_json(kind, j.at("params")),
                       j.at("seed").get<std::uint64_t>(), j.at("horizon").get<std::size_t>());
}

} // namespace exporate
