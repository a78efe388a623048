#pragma once

#include <string>
#include <utility>
#include <vector>

namespace exporate {

/// Minimal self-contained SVG line chart: linear x axis, optionally log10 y
/// axis, one <polyline> per declared series, no external assets. Values at or
/// below the floor (default 1e-300) are clipped before the log.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string x_label, std::string y_label, bool log_y = false);

    void add_series(const std::string& name, std::vector<std::pair<double, double>> points);
    /// Horizontal reference line across the data range (a 2-point series).
    void add_hline(const std::string& name, double y);

    void set_value_floor(double floor) { floor_ = floor; }

    std::string render() const;
    void save(const std::string& path) const;

private:
    struct Series {
        std::string name;
        std::vector<std::pair<double, double>> points;
        bool is_reference = false;
    };

    std::string title_, x_label_, y_label_;
    bool log_y_;
    double floor_ = 1e-300;
    std::vector<Series> series_;
    std::vector<std::pair<std::string, double>> hlines_;
};

} // namespace exporate
