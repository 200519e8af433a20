#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace histwalk {

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
    bool scatter = false;  // circles instead of a polyline
};

// Fixed plot geometry, exposed so the coordinate mapping can be recomputed
// independently of the writer.
namespace svg {
constexpr double kWidth = 640, kHeight = 480;
constexpr double kMarginLeft = 70, kMarginRight = 20, kMarginTop = 20, kMarginBottom = 50;

inline double map_x(double v, double vmin, double vmax) {
    const double span = (vmax > vmin) ? (vmax - vmin) : 1.0;
    return kMarginLeft + (v - vmin) / span * (kWidth - kMarginLeft - kMarginRight);
}
inline double map_y(double v, double vmin, double vmax) {
    const double span = (vmax > vmin) ? (vmax - vmin) : 1.0;
    return kHeight - kMarginBottom - (v - vmin) / span * (kHeight - kMarginTop - kMarginBottom);
}
}  // namespace svg

// SVG 1.1 document with axes, tick labels, one polyline or circle group per
// series, and a legend. log_log maps both axes through log10 and requires
// strictly positive data. Throws config_error on empty input, io_error on
// filesystem failure.
void emit_svg_plot(const std::vector<PlotSeries>& series, const std::string& x_label,
                   const std::string& y_label, const std::filesystem::path& path,
                   bool log_log = false);

}  // namespace histwalk
