#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pdbuck {

// Minimal static SVG 1.1 line/scatter plot writer. Series with gaps (NaN ys)
// break the polyline. Output is fully deterministic.
class SvgPlot {
  public:
    SvgPlot(std::string title, std::string x_label, std::string y_label);

    void add_line(const std::vector<double>& xs, const std::vector<double>& ys,
                  const std::string& color, bool dashed = false,
                  const std::string& name = "");
    void add_points(const std::vector<double>& xs,
                    const std::vector<double>& ys, const std::string& color,
                    double radius = 1.5, const std::string& name = "");
    void add_marker(double x, double y, const std::string& color,
                    const std::string& label);

    [[nodiscard]] std::string render() const;
    // Writes render() to path; false when the path is unwritable.
    [[nodiscard]] bool write(const std::string& path) const;

  private:
    struct Series {
        std::vector<double> xs, ys;
        std::string color;
        bool dashed = false;
        bool points = false;
        double radius = 1.5;
        std::string name;
    };
    struct Marker {
        double x, y;
        std::string color, label;
    };
    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
    std::vector<Marker> markers_;
};

} // namespace pdbuck
