#include "pinion/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace pinion {

namespace {

constexpr int margin_left = 72, margin_right = 24, margin_top = 44, margin_bottom = 56;

std::string num(double v, const char* fmt = "%.2f") {
    char buf[40];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

// Tick spacing of 1, 2, or 5 times a power of ten, aiming for ~6 intervals.
double nice_step(double range) {
    const double raw = range / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    if (norm < 1.5) return mag;
    if (norm < 3.5) return 2.0 * mag;
    if (norm < 7.5) return 5.0 * mag;
    return 10.0 * mag;
}

struct Frame {
    double x_min, x_max, y_min, y_max;
    int width, height;

    double px(double x) const {
        return margin_left + (x - x_min) / (x_max - x_min) *
                                 (width - margin_left - margin_right);
    }
    double py(double y) const {
        return height - margin_bottom -
               (y - y_min) / (y_max - y_min) * (height - margin_top - margin_bottom);
    }
};

void draw_axes(std::string& out, const Frame& f, const std::string& title,
               const std::string& x_label, const std::string& y_label) {
    const double left = margin_left, right = f.width - margin_right;
    const double top = margin_top, bottom = f.height - margin_bottom;

    // tick grid
    const double sx = nice_step(f.x_max - f.x_min);
    for (double t = std::ceil(f.x_min / sx) * sx; t <= f.x_max + 1e-9 * sx; t += sx) {
        const double x = f.px(t);
        out += "<line x1='" + num(x) + "' y1='" + num(top) + "' x2='" + num(x) +
               "' y2='" + num(bottom) + "' stroke='#dddddd' stroke-width='1'/>\n";
        out += "<text x='" + num(x) + "' y='" + num(bottom + 18) +
               "' text-anchor='middle' font-size='12'>" + num(t, "%.6g") + "</text>\n";
    }
    const double sy = nice_step(f.y_max - f.y_min);
    for (double t = std::ceil(f.y_min / sy) * sy; t <= f.y_max + 1e-9 * sy; t += sy) {
        const double y = f.py(t);
        out += "<line x1='" + num(left) + "' y1='" + num(y) + "' x2='" + num(right) +
               "' y2='" + num(y) + "' stroke='#dddddd' stroke-width='1'/>\n";
        out += "<text x='" + num(left - 8) + "' y='" + num(y + 4) +
               "' text-anchor='end' font-size='12'>" + num(t, "%.6g") + "</text>\n";
    }

    out += "<rect x='" + num(left) + "' y='" + num(top) + "' width='" +
           num(right - left) + "' height='" + num(bottom - top) +
           "' fill='none' stroke='#333333' stroke-width='1.2'/>\n";
    out += "<text x='" + num(0.5 * (left + right)) + "' y='24' text-anchor='middle' "
           "font-size='15' font-weight='bold'>" + escape(title) + "</text>\n";
    out += "<text x='" + num(0.5 * (left + right)) + "' y='" + num(f.height - 14) +
           "' text-anchor='middle' font-size='13'>" + escape(x_label) + "</text>\n";
    out += "<text x='18' y='" + num(0.5 * (top + bottom)) +
           "' text-anchor='middle' font-size='13' transform='rotate(-90 18 " +
           num(0.5 * (top + bottom)) + ")'>" + escape(y_label) + "</text>\n";
}

std::string svg_open(int width, int height) {
    return "<svg xmlns='http://www.w3.org/2000/svg' width='" + std::to_string(width) +
           "' height='" + std::to_string(height) + "' viewBox='0 0 " +
           std::to_string(width) + " " + std::to_string(height) +
           "' font-family='sans-serif'>\n<rect width='100%' height='100%' "
           "fill='white'/>\n";
}

}  // namespace

LineChart::LineChart(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)),
      y_label_(std::move(y_label)) {}

void LineChart::add_series(SvgSeries series) { series_.push_back(std::move(series)); }
void LineChart::add_hline(double y) { hlines_.push_back(y); }

std::string LineChart::render(int width, int height) const {
    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const auto& s : series_) {
        for (const double v : s.x) {
            x_min = std::min(x_min, v);
            x_max = std::max(x_max, v);
        }
        for (const double v : s.y) {
            y_min = std::min(y_min, v);
            y_max = std::max(y_max, v);
        }
    }
    for (const double v : hlines_) {
        y_min = std::min(y_min, v);
        y_max = std::max(y_max, v);
    }
    if (!(x_min < x_max)) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if (!(y_min < y_max)) {
        y_min -= 0.5;
        y_max += 0.5;
    }
    const double x_pad = 0.02 * (x_max - x_min), y_pad = 0.06 * (y_max - y_min);
    const Frame f{x_min - x_pad, x_max + x_pad, y_min - y_pad, y_max + y_pad,
                  width, height};

    std::string out = svg_open(width, height);
    draw_axes(out, f, title_, x_label_, y_label_);

    for (const double y : hlines_) {
        out += "<line x1='" + num(f.px(f.x_min)) + "' y1='" + num(f.py(y)) + "' x2='" +
               num(f.px(f.x_max)) + "' y2='" + num(f.py(y)) +
               "' stroke='#999999' stroke-width='1' stroke-dasharray='2,3'/>\n";
    }

    for (const auto& s : series_) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (n == 0) continue;
        // cap polyline length; plots stay faithful well below this resolution
        const std::size_t stride = std::max<std::size_t>(1, n / 4000);
        std::string points;
        for (std::size_t i = 0; i < n; i += stride)
            points += num(f.px(s.x[i])) + "," + num(f.py(s.y[i])) + " ";
        if ((n - 1) % stride != 0)
            points += num(f.px(s.x[n - 1])) + "," + num(f.py(s.y[n - 1]));
        out += "<polyline fill='none' stroke='" + s.color + "' stroke-width='" +
               num(s.width, "%.3g") + "'";
        if (s.dashed) out += " stroke-dasharray='6,4'";
        out += " points='" + points + "'/>\n";
    }

    double legend_y = margin_top + 16;
    for (const auto& s : series_) {
        if (s.name.empty()) continue;
        const double lx = width - margin_right - 150;
        out += "<line x1='" + num(lx) + "' y1='" + num(legend_y - 4) + "' x2='" +
               num(lx + 26) + "' y2='" + num(legend_y - 4) + "' stroke='" + s.color +
               "' stroke-width='2'" + (s.dashed ? " stroke-dasharray='6,4'" : "") +
               "/>\n";
        out += "<text x='" + num(lx + 32) + "' y='" + num(legend_y) +
               "' font-size='12'>" + escape(s.name) + "</text>\n";
        legend_y += 18;
    }

    out += "</svg>\n";
    return out;
}

const char* phase_color(PhaseKind kind) {
    switch (kind) {
        case PhaseKind::I1: return "#c23b22";   // locked to rack 1: deep red
        case PhaseKind::II1: return "#f4a582";  // drifting with rack 1: light red
        case PhaseKind::II0: return "#f7f7f7";  // neutral line: near white
        case PhaseKind::II2: return "#92c5de";  // drifting with rack 2: light blue
        case PhaseKind::I2: return "#2166ac";   // locked to rack 2: deep blue
    }
    return "#000000";
}

std::string phase_map_svg(const PhaseMap& map, const std::string& title) {
    const SweepSpec& spec = map.spec;
    const int width = 880, height = 620;

    // cells are centered on their grid values
    const double dx = spec.phi1.count > 1
                          ? (spec.phi1.max - spec.phi1.min) / double(spec.phi1.count - 1)
                          : 1.0;
    const double dy = spec.nu.count > 1
                          ? (spec.nu.max - spec.nu.min) / double(spec.nu.count - 1)
                          : 1.0;
    const Frame f{spec.phi1.min - 0.5 * dx, spec.phi1.max + 0.5 * dx,
                  spec.nu.min - 0.5 * dy, spec.nu.max + 0.5 * dy, width, height};

    std::string out = svg_open(width, height);

    for (std::size_t i = 0; i < spec.phi1.count; ++i) {
        for (std::size_t j = 0; j < spec.nu.count; ++j) {
            const double p1 = spec.phi1_at(i);
            const double nu = spec.nu_at(j);
            const double x0 = f.px(p1 - 0.5 * dx), x1 = f.px(p1 + 0.5 * dx);
            const double y0 = f.py(nu + 0.5 * dy), y1 = f.py(nu - 0.5 * dy);
            out += "<rect x='" + num(x0) + "' y='" + num(y0) + "' width='" +
                   num(x1 - x0 + 0.5) + "' height='" + num(y1 - y0 + 0.5) +
                   "' fill='" + phase_color(map.at(i, j).kind) + "'/>\n";
        }
    }

    draw_axes(out, f, title, "phi1 [zeta*V1/R^2]", "nu = V2/V1");

    if (!map.boundary.empty()) {
        std::string points;
        for (const BoundaryPoint& p : map.boundary)
            points += num(f.px(p.phi1)) + "," + num(f.py(p.nu_star)) + " ";
        out += "<polyline fill='none' stroke='#000000' stroke-width='2' "
               "stroke-dasharray='7,5' points='" + points + "'/>\n";
    }

    // legend
    double ly = margin_top + 14;
    const PhaseKind kinds[] = {PhaseKind::I1, PhaseKind::II1, PhaseKind::II0,
                               PhaseKind::II2, PhaseKind::I2};
    const char* notes[] = {"locked, V_P = +V1", "skipping, V_P > 0", "neutral, V_P = 0",
                           "skipping, V_P < 0", "locked, V_P = -V2"};
    const double lx = width - margin_right - 196;
    out += "<rect x='" + num(lx - 10) + "' y='" + num(ly - 12) +
           "' width='206' height='" + num(18.0 * 5 + (map.boundary.empty() ? 8 : 26)) +
           "' fill='white' fill-opacity='0.85' stroke='#999999'/>\n";
    for (int k = 0; k < 5; ++k) {
        out += "<rect x='" + num(lx) + "' y='" + num(ly - 9) +
               "' width='14' height='12' fill='" + std::string(phase_color(kinds[k])) +
               "' stroke='#555555' stroke-width='0.5'/>\n";
        out += "<text x='" + num(lx + 20) + "' y='" + num(ly + 1) + "' font-size='12'>" +
               std::string(to_string(kinds[k])) + ": " + notes[k] + "</text>\n";
        ly += 18;
    }
    if (!map.boundary.empty()) {
        out += "<line x1='" + num(lx) + "' y1='" + num(ly - 4) + "' x2='" +
               num(lx + 14) + "' y2='" + num(ly - 4) +
               "' stroke='#000000' stroke-width='2' stroke-dasharray='7,5'/>\n";
        out += "<text x='" + num(lx + 20) + "' y='" + num(ly + 1) +
               "' font-size='12'>II0 line (bisected)</text>\n";
    }

    out += "</svg>\n";
    return out;
}

}  // namespace pinion
