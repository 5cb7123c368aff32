#include "pdbuck/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pdbuck/errors.hpp"

namespace pdbuck {

namespace {

constexpr double kWidth = 800.0, kHeight = 600.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 55.0;
constexpr int kTicks = 6;

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::string num(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

struct Range {
    double lo = 0.0, hi = 1.0;
    void absorb(double v) {
        if (!std::isfinite(v)) return;
        if (empty) {
            lo = hi = v;
            empty = false;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void pad() {
        if (empty) {
            lo = 0.0;
            hi = 1.0;
            return;
        }
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            double m = 0.04 * (hi - lo);
            lo -= m;
            hi += m;
        }
    }
    bool empty = true;
};

} // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)),
      y_label_(std::move(y_label)) {}

void SvgPlot::add_line(const std::vector<double>& xs,
                       const std::vector<double>& ys, const std::string& color,
                       bool dashed, const std::string& name) {
    if (xs.size() != ys.size())
        throw InvalidConfig("SvgPlot: xs and ys must have equal length");
    series_.push_back({xs, ys, color, dashed, false, 1.5, name});
}

void SvgPlot::add_points(const std::vector<double>& xs,
                         const std::vector<double>& ys,
                         const std::string& color, double radius,
                         const std::string& name) {
    if (xs.size() != ys.size())
        throw InvalidConfig("SvgPlot: xs and ys must have equal length");
    series_.push_back({xs, ys, color, false, true, radius, name});
}

void SvgPlot::add_marker(double x, double y, const std::string& color,
                         const std::string& label) {
    markers_.push_back({x, y, color, label});
}

std::string SvgPlot::render() const {
    Range rx, ry;
    for (const auto& s : series_) {
        for (size_t i = 0; i < s.xs.size(); ++i) {
            if (std::isfinite(s.ys[i])) {
                rx.absorb(s.xs[i]);
                ry.absorb(s.ys[i]);
            }
        }
    }
    for (const auto& m : markers_) {
        rx.absorb(m.x);
        ry.absorb(m.y);
    }
    rx.pad();
    ry.pad();

    auto px = [&](double x) {
        return kLeft + (x - rx.lo) / (rx.hi - rx.lo) *
                           (kWidth - kLeft - kRight);
    };
    auto py = [&](double y) {
        return kHeight - kBottom -
               (y - ry.lo) / (ry.hi - ry.lo) * (kHeight - kTop - kBottom);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
        << kHeight << "\">\n";
    svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">"
        << escape(title_) << "</text>\n";

    // Axes box and ticks.
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
        << kWidth - kLeft - kRight << "\" height=\""
        << kHeight - kTop - kBottom
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= kTicks; ++i) {
        double fx = rx.lo + (rx.hi - rx.lo) * i / kTicks;
        double fy = ry.lo + (ry.hi - ry.lo) * i / kTicks;
        double gx = px(fx), gy = py(fy);
        svg << "<line x1=\"" << gx << "\" y1=\"" << kHeight - kBottom
            << "\" x2=\"" << gx << "\" y2=\"" << kHeight - kBottom + 5
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << gx << "\" y=\"" << kHeight - kBottom + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"11\">"
            << num(fx) << "</text>\n";
        svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << gy << "\" x2=\""
            << kLeft << "\" y2=\"" << gy << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << gy + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
               "font-size=\"11\">"
            << num(fy) << "</text>\n";
    }
    svg << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\""
        << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\">"
        << escape(x_label_) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << (kTop + kHeight - kBottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\" transform=\"rotate(-90 18 "
        << (kTop + kHeight - kBottom) / 2 << ")\">" << escape(y_label_)
        << "</text>\n";

    for (const auto& s : series_) {
        if (s.points) {
            for (size_t i = 0; i < s.xs.size(); ++i) {
                if (!std::isfinite(s.ys[i])) continue;
                svg << "<circle cx=\"" << num(px(s.xs[i])) << "\" cy=\""
                    << num(py(s.ys[i])) << "\" r=\"" << s.radius
                    << "\" fill=\"" << escape(s.color) << "\"/>\n";
            }
            continue;
        }
        bool open = false;
        std::ostringstream path;
        for (size_t i = 0; i < s.xs.size(); ++i) {
            if (!std::isfinite(s.ys[i])) {
                open = false; // gap breaks the polyline
                continue;
            }
            path << (open ? " L " : " M ") << num(px(s.xs[i])) << ' '
                 << num(py(s.ys[i]));
            open = true;
        }
        std::string d = path.str();
        if (d.empty()) continue;
        svg << "<path d=\"" << d.substr(1) << "\" fill=\"none\" stroke=\""
            << escape(s.color) << "\" stroke-width=\"1.5\"";
        if (s.dashed) svg << " stroke-dasharray=\"6 4\"";
        svg << "/>\n";
    }

    double legend_y = kTop + 16;
    for (const auto& s : series_) {
        if (s.name.empty()) continue;
        svg << "<line x1=\"" << kLeft + 12 << "\" y1=\"" << legend_y
            << "\" x2=\"" << kLeft + 40 << "\" y2=\"" << legend_y
            << "\" stroke=\"" << escape(s.color) << "\" stroke-width=\"2\"";
        if (s.dashed) svg << " stroke-dasharray=\"6 4\"";
        svg << "/>\n";
        svg << "<text x=\"" << kLeft + 46 << "\" y=\"" << legend_y + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">"
            << escape(s.name) << "</text>\n";
        legend_y += 18;
    }

    for (const auto& m : markers_) {
        double gx = px(m.x), gy = py(m.y);
        svg << "<circle cx=\"" << num(gx) << "\" cy=\"" << num(gy)
            << "\" r=\"4\" fill=\"none\" stroke=\"" << escape(m.color)
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << num(gx + 8) << "\" y=\"" << num(gy - 8)
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
            << escape(m.color) << "\">" << escape(m.label) << "</text>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

bool SvgPlot::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << render();
    return static_cast<bool>(out);
}

} // namespace pdbuck
