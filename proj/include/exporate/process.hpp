#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "exporate/sequence.hpp"

namespace exporate {

// Generative models with analytically known rate constants. Each kind is a
// closed-form parameter record; validation happens at spec construction and
// the reference constants are recomputed from the parameters, never stored.

struct DeterministicGeometricParams {
    double rho = 0.5; // > 0
    double x0 = 1.0;  // > 0
};

struct UniformDist {
    double a = 0.0; // 0 <= a < b
    double b = 1.0;
};

struct LogNormalDist {
    double mu = 0.0;
    double sigma = 1.0; // > 0
};

using MultiplierDist = std::variant<UniformDist, LogNormalDist>;

struct GeometricProductParams {
    MultiplierDist multiplier = UniformDist{0.0, 1.0};
};

struct GeometricLatent {
    double q = 0.5; // in (0,1); p_n = (1-q) q^n on n = 0,1,...
};

struct PowerLawLatent {
    double alpha = 2.0;          // > 1; p_n proportional to n^-alpha on n = 1,2,...
    std::uint64_t n_max = 10'000'000; // truncation point of the support
};

using LatentDist = std::variant<GeometricLatent, PowerLawLatent>;

struct IndicatorLazyParams {
    LatentDist latent = GeometricLatent{0.5};
};

struct SphereEsParams {
    std::size_t dim = 10;
    std::vector<double> z0;        // size dim
    double sigma0 = 1.0;           // > 0
    double up = 1.22;              // step-size factor on high success
    double down = 0.82;            // step-size factor on low success
    std::size_t adapt_window = 10; // one-fifth rule review period
};

struct WealthIidParams {
    double mu = 0.05;
    double sigma = 0.1; // >= 0
};

struct SampleMeanParams {
    double theta = 0.0;
    double noise_std = 1.0; // > 0
};

enum class ProcessKind {
    DeterministicGeometric,
    GeometricProduct,
    IndicatorLazy,
    SphereES,
    WealthIID,
    SampleMeanEstimator,
};

std::string to_string(ProcessKind k);
ProcessKind process_kind_from_string(const std::string& s);

using ProcessParams =
    std::variant<DeterministicGeometricParams, GeometricProductParams, IndicatorLazyParams,
                 SphereEsParams, WealthIidParams, SampleMeanParams>;

/// Closed-form constants for a spec, where they exist.
struct ReferenceConstants {
    std::optional<double> expectation_rate;   // limsup E[X_t]^(1/t)
    std::optional<double> trajectory_rate;    // a.s. limsup X_t^(1/t)
    std::optional<double> growth_rate;        // a.s. (1/t) log W_t limit
    bool has_risk_criterion = false;
    double risk_criterion(double gamma) const; // C_gamma; only if has_risk_criterion
    double risk_mu = 0.0, risk_sigma = 0.0;
};

/// Named generative model + parameters + master seed + horizon. Fully
/// determines a trajectory distribution; (spec, traj_index) fully determines
/// one trajectory.
class ProcessSpec {
public:
    ProcessSpec(ProcessKind kind, ProcessParams params, std::uint64_t seed, std::size_t horizon);

    ProcessKind kind() const { return kind_; }
    const ProcessParams& params() const { return params_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t horizon() const { return horizon_; }

    /// Pure function of (seed, traj_index, kind, params); length horizon+1.
    FiniteSequence sample_trajectory(std::uint32_t traj_index) const;

    ReferenceConstants reference_constants() const;

    /// Mass of the latent support lost to truncation (power-law kinds only;
    /// upper bound). 0 for everything else.
    double truncation_mass() const;

    std::string to_json() const;
    static ProcessSpec from_json(const std::string& text);

    /// Writes the trajectory values into out[0..horizon]. Used by the batch
    /// generator to avoid per-row allocation.
    void fill_trajectory(std::uint32_t traj_index, double* out) const;

private:
    void validate() const;

    ProcessKind kind_;
    ProcessParams params_;
    std::uint64_t seed_;
    std::size_t horizon_;

    // Normalized cumulative latent weights for power-law sampling, built once.
    std::shared_ptr<const std::vector<double>> powerlaw_cdf_;
    double powerlaw_tail_bound_ = 0.0;
};

} // namespace exporate
