#pragma once

#include <cstdint>

namespace exporate {

/// Counter-based pseudo-random generator with keyed substreams.
///
/// Draw i of stream s is mix64(key(seed, s) + i * GOLDEN) -- the splitmix64
/// output function driven by an explicit counter instead of mutable hidden
/// state. Two consequences the simulation layer relies on:
///   * a (seed, stream) pair fully determines the draw sequence, so
///     trajectories can be generated on any thread, in any order, and still
///     come out bit-identical;
///   * skipping ahead is O(1) (set the counter), though we only ever step.
class CounterRng {
public:
    CounterRng(std::uint64_t master_seed, std::uint64_t stream)
        : key_(mix64(mix64(master_seed ^ 0x8AD6C1F4247F0A6DULL) ^
                     mix64(stream + 0x5851F42D4C957F2DULL))) {}

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGolden); }

    /// Uniform on [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1); safe as a log() or quantile argument.
    double next_open_unit() {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
    }

    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_open_unit(); }

    /// Standard normal via the inverse CDF (one draw per variate, so the
    /// counter advances identically no matter how results are consumed).
    double next_normal() { return normal_quantile(next_open_unit()); }

    std::uint64_t counter() const { return counter_; }

    /// splitmix64 finalizer (Steele, Lea & Flood; Vigna's constants).
    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Inverse of the standard normal CDF, Wichura's algorithm AS 241
    /// (PPND16 variant, ~1 ulp over the full open interval).
    static double normal_quantile(double p);

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace exporate
