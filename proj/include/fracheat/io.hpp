#pragma once

#include <string>
#include <vector>

namespace fracheat {

struct PlotSeries {
    std::string name;
    std::vector<double> x, y;
};

/// Minimal SVG line plot; log axes take log10 of the data.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<PlotSeries>& series, bool logx = false,
                    bool logy = false);

/// CSV with a header row and uniform numeric rows.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

} // namespace fracheat
