#include "exporate/batch.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "exporate/errors.hpp"

namespace exporate {

unsigned resolve_thread_count(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("EXPO_RATE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

TrajectoryBatch TrajectoryBatch::simulate(const ProcessSpec& spec, std::size_t n_traj,
                                          const SimulateOptions& opts) {
    if (n_traj < 1) throw InvalidParamsError("simulate: n_traj must be >= 1");
    if (n_traj > 0xFFFFFFFFull) throw InvalidParamsError("simulate: n_traj exceeds 2^32");
    const std::size_t cols = spec.horizon() + 1;
    if (n_traj > opts.max_entries / cols) {
        throw ResourceLimitError("simulate: n_traj*(horizon+1) = " +
                                 std::to_string(n_traj * cols) + " exceeds cap " +
                                 std::to_string(opts.max_entries));
    }

    TrajectoryBatch batch;
    batch.n_traj_ = n_traj;
    batch.columns_ = cols;
    batch.data_.resize(n_traj * cols);
    batch.spec_ = spec;

    // Every row is an independent keyed substream, so the split across
    // threads cannot affect the values written.
    const unsigned workers = std::min<unsigned>(resolve_thread_count(opts.threads),
                                                static_cast<unsigned>(n_traj));
    if (workers <= 1) {
        for (std::size_t j = 0; j < n_traj; ++j) {
            spec.fill_trajectory(static_cast<std::uint32_t>(j), batch.data_.data() + j * cols);
        }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t j = w; j < n_traj; j += workers) {
                    spec.fill_trajectory(static_cast<std::uint32_t>(j),
                                         batch.data_.data() + j * cols);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return batch;
}

TrajectoryBatch TrajectoryBatch::from_rows(std::vector<std::vector<double>> rows,
                                           std::optional<ProcessSpec> spec) {
    if (rows.empty()) throw InvalidParamsError("from_rows: need at least one trajectory");
    const std::size_t cols = rows.front().size();
    if (cols < 2) throw InvalidParamsError("from_rows: need horizon >= 1 (two columns)");
    TrajectoryBatch batch;
    batch.n_traj_ = rows.size();
    batch.columns_ = cols;
    batch.data_.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        if (r.size() != cols) throw InvalidParamsError("from_rows: ragged rows");
        for (double v : r) {
            if (!std::isfinite(v) || v < 0.0) {
                throw NegativeValueError("from_rows: values must be finite and >= 0");
            }
            batch.data_.push_back(v);
        }
    }
    batch.spec_ = std::move(spec);
    return batch;
}

FiniteSequence TrajectoryBatch::row_sequence(std::size_t traj) const {
    const auto r = row(traj);
    return FiniteSequence(std::vector<double>(r.begin(), r.end()), 0);
}

bool TrajectoryBatch::all_positive() const {
    for (double v : data_) {
        if (!(v > 0.0)) return false;
    }
    return true;
}

void TrajectoryBatch::write_csv(std::ostream& out) const {
    out << "traj,t,value\n";
    char buf[40];
    for (std::size_t j = 0; j < n_traj_; ++j) {
        for (std::size_t t = 0; t < columns_; ++t) {
            std::snprintf(buf, sizeof(buf), "%.17g", at(j, t));
            out << j << ',' << t << ',' << buf << '\n';
        }
    }
}

void TrajectoryBatch::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_csv(out);
    if (!out) throw IoError("write failed: " + path);
}

TrajectoryBatch TrajectoryBatch::read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("batch CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "traj,t,value") {
        throw IoError("batch CSV: expected header 'traj,t,value', got '" + line + "'");
    }
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = (c1 == std::string::npos) ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos) {
            throw IoError("batch CSV: malformed row on line " + std::to_string(lineno));
        }
        unsigned long long traj = 0, t = 0;
        double v = 0.0;
        try {
            traj = std::stoull(line.substr(0, c1));
            t = std::stoull(line.substr(c1 + 1, c2 - c1 - 1));
            v = std::stod(line.substr(c2 + 1));
        } catch (const std::exception&) {
            throw IoError("batch CSV: malformed row on line " + std::to_string(lineno));
        }
        if (traj == rows.size()) rows.emplace_back();
        if (traj >= rows.size()) {
            throw IoError("batch CSV: trajectory index jump on line " + std::to_string(lineno));
        }
        if (t != rows[traj].size()) {
            throw IoError("batch CSV: t must be consecutive per trajectory (line " +
                          std::to_string(lineno) + ")");
        }
        rows[traj].push_back(v);
    }
    try {
        return from_rows(std::move(rows));
    } catch (const std::exception& e) {
        throw IoError(std::string("batch CSV: ") + e.what());
    }
}

TrajectoryBatch TrajectoryBatch::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    return read_csv(in);
}

namespace {

void put_u32_le(std::ostream& out, std::uint32_t v) {
    const char bytes[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                           static_cast<char>((v >> 16) & 0xFF),
                           static_cast<char>((v >> 24) & 0xFF)};
    out.write(bytes, 4);
}

std::uint32_t get_u32_le(std::istream& in, const char* what) {
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
        throw IoError(std::string("XRB1: truncated ") + what);
    }
    return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
           (static_cast<std::uint32_t>(bytes[2]) << 16) |
           (static_cast<std::uint32_t>(bytes[3]) << 24);
}

void put_f64_le(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
    out.write(bytes, 8);
}

double get_f64_le(std::istream& in) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw IoError("XRB1: truncated data");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

} // namespace

void TrajectoryBatch::write_xrb1(std::ostream& out) const {
    out.write("XRB1", 4);
    put_u32_le(out, static_cast<std::uint32_t>(n_traj_));
    put_u32_le(out, static_cast<std::uint32_t>(columns_));
    for (double v : data_) put_f64_le(out, v);
}

void TrajectoryBatch::save_xrb1(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_xrb1(out);
    if (!out) throw IoError("write failed: " + path);
}

TrajectoryBatch TrajectoryBatch::read_xrb1(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "XRB1", 4) != 0) {
        throw IoError("XRB1: bad magic");
    }
    const std::uint32_t n = get_u32_le(in, "trajectory count");
    const std::uint32_t cols = get_u32_le(in, "column count");
    if (n == 0 || cols == 0) throw IoError("XRB1: empty dimensions");
    TrajectoryBatch batch;
    batch.n_traj_ = n;
    batch.columns_ = cols;
    batch.data_.resize(static_cast<std::size_t>(n) * cols);
    for (auto& v : batch.data_) v = get_f64_le(in);
    return batch;
}

TrajectoryBatch TrajectoryBatch::load_xrb1(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    return read_xrb1(in);
}

} // namespace exporate
