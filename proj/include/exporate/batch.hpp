#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exporate/process.hpp"
#include "exporate/sequence.hpp"

namespace exporate {

struct SimulateOptions {
    /// Hard cap on n_traj * (horizon+1) matrix entries.
    std::size_t max_entries = 100'000'000;
    /// Worker threads; 0 = read EXPO_RATE_THREADS (0/unset = hardware).
    unsigned threads = 0;
};

/// N sampled trajectories of one spec, row-major N x (horizon+1).
/// Regenerating with the same spec and n_traj reproduces the matrix
/// bit-identically regardless of thread count.
class TrajectoryBatch {
public:
    TrajectoryBatch() = default;

    /// Rows j = 0..n-1 are spec.sample_trajectory(j).
    static TrajectoryBatch simulate(const ProcessSpec& spec, std::size_t n_traj,
                                    const SimulateOptions& opts = {});

    /// Wraps an externally supplied matrix (CSV import, tests). Row length
    /// must be uniform; values must be finite and >= 0.
    static TrajectoryBatch from_rows(std::vector<std::vector<double>> rows,
                                     std::optional<ProcessSpec> spec = std::nullopt);

    std::size_t n_traj() const { return n_traj_; }
    std::size_t horizon() const { return columns_ == 0 ? 0 : columns_ - 1; }
    std::size_t columns() const { return columns_; }

    double at(std::size_t traj, std::size_t t) const { return data_[traj * columns_ + t]; }
    std::span<const double> row(std::size_t traj) const {
        return {data_.data() + traj * columns_, columns_};
    }
    FiniteSequence row_sequence(std::size_t traj) const;

    const std::optional<ProcessSpec>& spec() const { return spec_; }
    const std::vector<double>& data() const { return data_; }

    bool all_positive() const;

    // --- serialization ---------------------------------------------------

    /// CSV, header "traj,t,value".
    void write_csv(std::ostream& out) const;
    void save_csv(const std::string& path) const;
    static TrajectoryBatch read_csv(std::istream& in);
    static TrajectoryBatch load_csv(const std::string& path);

    /// Compact binary: magic "XRB1", little-endian u32 N, u32 T+1, then
    /// row-major 64-bit floats.
    void write_xrb1(std::ostream& out) const;
    void save_xrb1(const std::string& path) const;
    static TrajectoryBatch read_xrb1(std::istream& in);
    static TrajectoryBatch load_xrb1(const std::string& path);

private:
    std::size_t n_traj_ = 0;
    std::size_t columns_ = 0;
    std::vector<double> data_;
    std::optional<ProcessSpec> spec_;
};

/// Worker-count resolution used by batch generation: explicit value, else
/// EXPO_RATE_THREADS, else hardware concurrency.
unsigned resolve_thread_count(unsigned requested);

} // namespace exporate
