#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace exporate {

/// A finite nonnegative real sequence x_t, t = start_index .. start_index+n-1.
/// One trajectory, one expectation curve -- anything the rate machinery
/// consumes is held in this form.
class FiniteSequence {
public:
    FiniteSequence() = default;

    /// Validates: nonempty, every entry finite and >= 0.
    explicit FiniteSequence(std::vector<double> values, std::size_t start_index = 0);

    std::size_t size() const { return values_.size(); }
    std::size_t start_index() const { return start_; }

    /// Value by position (0-based offset into storage).
    double operator[](std::size_t i) const { return values_[i]; }

    /// Time index of position i.
    std::size_t time_at(std::size_t i) const { return start_ + i; }

    const std::vector<double>& values() const { return values_; }

    bool operator==(const FiniteSequence& other) const = default;

    /// CSV with header "t,value"; t consecutive integers, values printed
    /// round-trip exact.
    void write_csv(std::ostream& out) const;
    void save_csv(const std::string& path) const;

    /// Parses the format written above. Rejects missing/foreign headers,
    /// non-consecutive t, and negative or non-numeric values.
    static FiniteSequence read_csv(std::istream& in);
    static FiniteSequence load_csv(const std::string& path);

private:
    std::vector<double> values_;
    std::size_t start_ = 0;
};

} // namespace exporate
