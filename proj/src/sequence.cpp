#include "exporate/sequence.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "exporate/errors.hpp"

namespace exporate {

FiniteSequence::FiniteSequence(std::vector<double> values, std::size_t start_index)
    : values_(std::move(values)), start_(start_index) {
    if (values_.empty()) {
        throw InvalidParamsError("FiniteSequence: length must be >= 1");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double v = values_[i];
        if (!std::isfinite(v)) {
            throw NegativeValueError("FiniteSequence: non-finite value at t=" +
                                     std::to_string(start_ + i));
        }
        if (v < 0.0) {
            throw NegativeValueError("FiniteSequence: negative value at t=" +
                                     std::to_string(start_ + i));
        }
    }
}

void FiniteSequence::write_csv(std::ostream& out) const {
    out << "t,value\n";
    char buf[40];
    for (std::size_t i = 0; i < values_.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", values_[i]);
        out << (start_ + i) << ',' << buf << '\n';
    }
}

void FiniteSequence::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_csv(out);
    if (!out) throw IoError("write failed: " + path);
}

FiniteSequence FiniteSequence::read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("sequence CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,value") throw IoError("sequence CSV: expected header 't,value', got '" + line + "'");

    std::vector<double> values;
    bool have_start = false;
    long long start = 0, prev = 0;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw IoError("sequence CSV: missing comma on line " + std::to_string(lineno));
        }
        std::size_t pos = 0;
        long long t = 0;
        double v = 0.0;
        try {
            t = std::stoll(line.substr(0, comma), &pos);
            if (pos != comma) throw std::invalid_argument("trailing");
            const std::string vs = line.substr(comma + 1);
            v = std::stod(vs, &pos);
            if (pos != vs.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw IoError("sequence CSV: malformed row on line " + std::to_string(lineno));
        }
        if (t < 0) throw IoError("sequence CSV: negative t on line " + std::to_string(lineno));
        if (!have_start) {
            start = t;
            have_start = true;
        } else if (t != prev + 1) {
            throw IoError("sequence CSV: t must be consecutive integers (line " +
                          std::to_string(lineno) + ")");
        }
        prev = t;
        values.push_back(v);
    }
    if (values.empty()) throw IoError("sequence CSV: no data rows");
    try {
        return FiniteSequence(std::move(values), static_cast<std::size_t>(start));
    } catch (const NegativeValueError& e) {
        throw IoError(std::string("sequence CSV: ") + e.what());
    }
}

FiniteSequence FiniteSequence::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    return read_csv(in);
}

} // namespace exporate
