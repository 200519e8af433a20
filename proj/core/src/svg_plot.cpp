#include "histwalk/svg_plot.hpp"

#include "histwalk/csv.hpp"
#include "histwalk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace histwalk {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
    // Trim the shortest-round-trip form a little for tick labels.
    std::string s = format_double(v);
    return s;
}

}  // namespace

void emit_svg_plot(const std::vector<PlotSeries>& series, const std::string& x_label,
                   const std::string& y_label, const std::filesystem::path& path,
                   bool log_log) {
    if (series.empty()) throw config_error("emit_svg_plot: no series to plot");
    for (const auto& s : series) {
        if (s.x.size() != s.y.size() || s.x.empty())
            throw config_error("emit_svg_plot: series '" + s.label +
                               "' must have matching nonempty x and y");
        if (log_log)
            for (std::size_t i = 0; i < s.x.size(); ++i)
                if (s.x[i] <= 0 || s.y[i] <= 0)
                    throw config_error("emit_svg_plot: log-log mode needs positive data "
                                       "(series '" + s.label + "')");
    }

    auto tx = [&](double v) { return log_log ? std::log10(v) : v; };

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, tx(s.x[i]));
            xmax = std::max(xmax, tx(s.x[i]));
            ymin = std::min(ymin, tx(s.y[i]));
            ymax = std::max(ymax, tx(s.y[i]));
        }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("emit_svg_plot: cannot open " + path.string());

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
        << svg::kWidth << "\" height=\"" << svg::kHeight << "\" viewBox=\"0 0 "
        << svg::kWidth << " " << svg::kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Axes.
    const double x0 = svg::kMarginLeft, x1 = svg::kWidth - svg::kMarginRight;
    const double y0 = svg::kHeight - svg::kMarginBottom, y1 = svg::kMarginTop;
    out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
        << "\" stroke=\"black\"/>\n";

    // Ticks and labels (5 per axis in the mapped space).
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double px = svg::map_x(fx, xmin, xmax);
        const double shown_x = log_log ? std::pow(10.0, fx) : fx;
        out << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\""
            << y0 + 5 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << px << "\" y=\"" << y0 + 20
            << "\" font-size=\"11\" text-anchor=\"middle\">" << num(shown_x) << "</text>\n";

        const double fy = ymin + (ymax - ymin) * i / 4.0;
        const double py = svg::map_y(fy, ymin, ymax);
        const double shown_y = log_log ? std::pow(10.0, fy) : fy;
        out << "<line x1=\"" << x0 - 5 << "\" y1=\"" << py << "\" x2=\"" << x0 << "\" y2=\""
            << py << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << x0 - 8 << "\" y=\"" << py + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << num(shown_y) << "</text>\n";
    }
    out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << svg::kHeight - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n"
        << "<text x=\"16\" y=\"" << (y0 + y1) / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (y0 + y1) / 2 << ")\">" << y_label << "</text>\n";

    // Series.
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        if (s.scatter) {
            out << "<g fill=\"" << color << "\">\n";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                out << "<circle cx=\"" << svg::map_x(tx(s.x[i]), xmin, xmax) << "\" cy=\""
                    << svg::map_y(tx(s.y[i]), ymin, ymax) << "\" r=\"2.5\"/>\n";
            out << "</g>\n";
        } else {
            out << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i) out << ' ';
                out << svg::map_x(tx(s.x[i]), xmin, xmax) << ','
                    << svg::map_y(tx(s.y[i]), ymin, ymax);
            }
            out << "\"/>\n";
        }
    }

    // Legend, top-right corner of the plot area.
    for (std::size_t si = 0; si < series.size(); ++si) {
        const double ly = y1 + 16 + 18 * double(si);
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<line x1=\"" << x1 - 130 << "\" y1=\"" << ly << "\" x2=\"" << x1 - 105
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << x1 - 100 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
            << series[si].label << "</text>\n";
    }

    out << "</svg>\n";
    if (!out) throw io_error("emit_svg_plot: write failed for " + path.string());
}

}  // namespace histwalk
