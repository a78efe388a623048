#include "exporate/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "exporate/errors.hpp"

namespace exporate {

namespace {

constexpr double kWidth = 720.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;

const char* kPalette[] = {"#1f6fb4", "#d1495b", "#3e8b57", "#8a5fb0", "#c78a27", "#4aa3a2"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

} // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label, bool log_y)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)),
      log_y_(log_y) {}

void SvgPlot::add_series(const std::string& name, std::vector<std::pair<double, double>> points) {
    series_.push_back({name, std::move(points), false});
}

void SvgPlot::add_hline(const std::string& name, double y) { hlines_.emplace_back(name, y); }

std::string SvgPlot::render() const {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;

    auto yval = [&](double y) {
        if (log_y_) return std::log10(std::max(y, floor_));
        return y;
    };

    for (const auto& s : series_) {
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, yval(y));
            ymax = std::max(ymax, yval(y));
        }
    }
    for (const auto& [name, y] : hlines_) {
        ymin = std::min(ymin, yval(y));
        ymax = std::max(ymax, yval(y));
    }
    if (!std::isfinite(xmin)) { xmin = 0.0; xmax = 1.0; }
    if (!std::isfinite(ymin)) { ymin = 0.0; ymax = 1.0; }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return kTop + (ymax - yval(y)) / (ymax - ymin) * plot_h; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\" stroke=\"none\"/>\n";
    out << "  <text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << escape(title_) << "</text>\n";

    // axes
    out << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kTop + plot_h << "\" stroke=\"#333\"/>\n";
    out << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
        << "\" y2=\"" << kTop + plot_h << "\" stroke=\"#333\"/>\n";
    out << "  <text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << escape(x_label_) << "</text>\n";
    out << "  <text x=\"16\" y=\"" << kTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 16 " << kTop + plot_h / 2 << ")\">" << escape(y_label_)
        << "</text>\n";

    // ticks
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        out << "  <text x=\"" << px(fx) << "\" y=\"" << kTop + plot_h + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << num(fx)
            << "</text>\n";
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        out << "  <text x=\"" << kLeft - 6 << "\" y=\"" << kTop + plot_h - plot_h * i / 4.0 + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
            << (log_y_ ? "1e" + num(fy) : num(fy)) << "</text>\n";
    }

    std::size_t color = 0;
    double legend_y = kTop + 8.0;
    for (const auto& s : series_) {
        const char* stroke = kPalette[color % (sizeof(kPalette) / sizeof(kPalette[0]))];
        ++color;
        out << "  <polyline fill=\"none\" stroke=\"" << stroke
            << "\" stroke-width=\"1.5\" data-series=\"" << escape(s.name) << "\" points=\"";
        for (const auto& [x, y] : s.points) out << num(px(x)) << ',' << num(py(y)) << ' ';
        out << "\"/>\n";
        out << "  <text x=\"" << kLeft + plot_w - 4 << "\" y=\"" << legend_y
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
            << stroke << "\">" << escape(s.name) << "</text>\n";
        legend_y += 14.0;
    }
    for (const auto& [name, y] : hlines_) {
        const char* stroke = kPalette[color % (sizeof(kPalette) / sizeof(kPalette[0]))];
        ++color;
        out << "  <polyline fill=\"none\" stroke=\"" << stroke
            << "\" stroke-width=\"1\" stroke-dasharray=\"5,4\" data-series=\"" << escape(name)
            << "\" points=\"" << num(px(xmin)) << ',' << num(py(y)) << ' ' << num(px(xmax)) << ','
            << num(py(y)) << "\"/>\n";
        out << "  <text x=\"" << kLeft + plot_w - 4 << "\" y=\"" << legend_y
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
            << stroke << "\">" << escape(name) << "</text>\n";
        legend_y += 14.0;
    }

    out << "</svg>\n";
    return out.str();
}

void SvgPlot::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << render();
    if (!out) throw IoError("write failed: " + path);
}

} // namespace exporate
