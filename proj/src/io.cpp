#include "fracheat/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "fracheat/errors.hpp"

namespace fracheat {

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw ComputeError("write_csv: cannot open " + path);
    out.precision(17);
    out << header << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

} // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<PlotSeries>& series, bool logx, bool logy) {
    const int W = 720, H = 480, ml = 70, mr = 20, mt = 40, mb = 55;
    auto tx = [&](double v) { return logx ? std::log10(v) : v; };
    auto ty = [&](double v) { return logy ? std::log10(v) : v; };

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    double y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (logx && !(s.x[i] > 0)) continue;
            if (logy && !(s.y[i] > 0)) continue;
            x0 = std::min(x0, tx(s.x[i]));
            x1 = std::max(x1, tx(s.x[i]));
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
    if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
    const double padx = 0.04 * (x1 - x0), pady = 0.06 * (y1 - y0);
    x0 -= padx; x1 += padx; y0 -= pady; y1 += pady;

    auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double v) { return H - mb - (ty(v) - y0) / (y1 - y0) * (H - mt - mb); };

    std::ofstream out(path);
    if (!out) throw ComputeError("write_svg_plot: cannot open " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' viewBox='0 0 " << W << " " << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='22' text-anchor='middle' font-size='16'>"
        << title << "</text>\n";
    out << "<text x='" << W / 2 << "' y='" << H - 12
        << "' text-anchor='middle' font-size='13'>" << xlabel
        << (logx ? " (log10)" : "") << "</text>\n";
    out << "<text x='16' y='" << H / 2
        << "' text-anchor='middle' font-size='13' transform='rotate(-90 16 " << H / 2
        << ")'>" << ylabel << (logy ? " (log10)" : "") << "</text>\n";
    out << "<rect x='" << ml << "' y='" << mt << "' width='" << W - ml - mr
        << "' height='" << H - mt - mb << "' fill='none' stroke='#444'/>\n";

    // axis ticks
    for (int i = 0; i <= 4; ++i) {
        const double vx = x0 + (x1 - x0) * i / 4.0;
        const double vy = y0 + (y1 - y0) * i / 4.0;
        const double sx = ml + (W - ml - mr) * i / 4.0;
        const double sy = H - mb - (H - mt - mb) * i / 4.0;
        out << "<text x='" << sx << "' y='" << H - mb + 18
            << "' text-anchor='middle' font-size='11'>";
        out.precision(3);
        out << vx << "</text>\n";
        out << "<text x='" << ml - 8 << "' y='" << sy + 4
            << "' text-anchor='end' font-size='11'>" << vy << "</text>\n";
        out.precision(17);
    }

    int ci = 0;
    for (const auto& s : series) {
        const char* color = kColors[ci % 5];
        out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.6' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if ((logx && !(s.x[i] > 0)) || (logy && !(s.y[i] > 0))) continue;
            out << px(s.x[i]) << "," << py(s.y[i]) << " ";
        }
        out << "'/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if ((logx && !(s.x[i] > 0)) || (logy && !(s.y[i] > 0))) continue;
            out << "<circle cx='" << px(s.x[i]) << "' cy='" << py(s.y[i])
                << "' r='2.5' fill='" << color << "'/>\n";
        }
        out << "<text x='" << W - mr - 6 << "' y='" << mt + 16 + 16 * ci
            << "' text-anchor='end' font-size='12' fill='" << color << "'>" << s.name
            << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

} // namespace fracheat
