#pragma once

#include <string>
#include <vector>

#include "pinion/atlas.hpp"

namespace pinion {

// Minimal self-contained SVG plotting, enough for trajectory panels, cuts, and
// the phase map. No external renderer is involved; output is deterministic.

struct SvgSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    double width = 1.5;
    bool dashed = false;
    std::string name;  // legend entry when nonempty
};

class LineChart {
  public:
    LineChart(std::string title, std::string x_label, std::string y_label);

    void add_series(SvgSeries series);
    void add_hline(double y);  // thin gray reference line

    std::string render(int width = 860, int height = 520) const;

  private:
    std::string title_, x_label_, y_label_;
    std::vector<SvgSeries> series_;
    std::vector<double> hlines_;
};

// Colored raster of the classified grid with a legend; the traced II0 line,
// when present, is drawn dashed on top.
std::string phase_map_svg(const PhaseMap& map, const std::string& title);

// Fill color used for a phase in the map raster.
const char* phase_color(PhaseKind kind);

}  // namespace pinion
