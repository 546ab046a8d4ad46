#include "vanetsim/chart.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace vanet {

std::optional<ChartKind> chart_kind_from_name(const std::string& name) {
    if (name == "SPEED_VS_TIME") return ChartKind::SpeedVsTime;
    if (name == "DISTANCE_VS_TIME") return ChartKind::DistanceVsTime;
    if (name == "ROUTE_VS_TIME") return ChartKind::RouteVsTime;
    return std::nullopt;
}

const char* chart_kind_name(ChartKind kind) {
    switch (kind) {
        case ChartKind::SpeedVsTime: return "SPEED_VS_TIME";
        case ChartKind::DistanceVsTime: return "DISTANCE_VS_TIME";
        case ChartKind::RouteVsTime: return "ROUTE_VS_TIME";
    }
    return "?";
}

namespace {

double row_value(ChartKind kind, const VehicleUpdateRow& row) {
    switch (kind) {
        case ChartKind::SpeedVsTime: return row.speed;
        case ChartKind::DistanceVsTime: return row.distance_driven;
        case ChartKind::RouteVsTime: return static_cast<double>(row.route_id);
    }
    return 0.0;
}

const char* y_label(ChartKind kind) {
    switch (kind) {
        case ChartKind::SpeedVsTime: return "Speed (m/s)";
        case ChartKind::DistanceVsTime: return "Distance driven (m)";
        case ChartKind::RouteVsTime: return "Route id";
    }
    return "";
}

using Series = std::map<std::string, std::vector<std::pair<double, double>>>;

Series collect(ChartKind kind, const std::vector<VehicleUpdateRow>& rows) {
    Series series;
    for (const VehicleUpdateRow& row : rows) {
        series[row.name].emplace_back(nanos_to_seconds(row.time), row_value(kind, row));
    }
    return series;
}

// Tick step of the form 1/2/5 x 10^k giving a handful of round labels.
double nice_step(double span) {
    if (span <= 0.0) return 1.0;
    double raw = span / 5.0;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double norm = raw / mag;
    if (norm <= 1.0) return mag;
    if (norm <= 2.0) return 2.0 * mag;
    if (norm <= 5.0) return 5.0 * mag;
    return 10.0 * mag;
}

std::string trim_label(double v) {
    std::string s = format_double(v);
    return s;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string chart_tidy_csv(ChartKind kind, const std::vector<VehicleUpdateRow>& rows) {
    Series series = collect(kind, rows);
    std::string out = "time_s,name,value\n";
    for (const auto& [name, points] : series) {
        for (const auto& [t, v] : points) {
            out += format_double(t);
            out += ',';
            out += name;
            out += ',';
            out += format_double(v);
            out += '\n';
        }
    }
    return out;
}

std::string chart_svg(ChartKind kind, const std::vector<VehicleUpdateRow>& rows,
                      const std::string& title) {
    Series series = collect(kind, rows);

    double x_max = 1.0, y_max = 1.0;
    for (const auto& [name, points] : series) {
        (void)name;
        for (const auto& [t, v] : points) {
            x_max = std::max(x_max, t);
            y_max = std::max(y_max, v);
        }
    }
    y_max *= 1.05;  // headroom so the top of a series is not clipped

    const double width = 960, height = 540;
    const double left = 70, right = width - 180, top = 50, bottom = height - 55;
    auto px = [&](double t) { return left + (right - left) * (t / x_max); };
    auto py = [&](double v) { return bottom - (bottom - top) * (v / y_max); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg << "  <text x=\"" << (left + (right - left) / 2) << "\" y=\"24\" font-size=\"16\""
        << " text-anchor=\"middle\" font-family=\"sans-serif\">" << title << "</text>\n";

    // axes
    svg << "  <line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";
    svg << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";

    double x_step = nice_step(x_max);
    for (double t = 0.0; t <= x_max + 1e-9; t += x_step) {
        svg << "  <line x1=\"" << px(t) << "\" y1=\"" << bottom << "\" x2=\"" << px(t)
            << "\" y2=\"" << (bottom + 5) << "\" stroke=\"black\"/>\n";
        svg << "  <text x=\"" << px(t) << "\" y=\"" << (bottom + 20)
            << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">"
            << trim_label(t) << "</text>\n";
    }
    double y_step = nice_step(y_max);
    for (double v = 0.0; v <= y_max + 1e-9; v += y_step) {
        svg << "  <line x1=\"" << (left - 5) << "\" y1=\"" << py(v) << "\" x2=\"" << left
            << "\" y2=\"" << py(v) << "\" stroke=\"black\"/>\n";
        svg << "  <text x=\"" << (left - 9) << "\" y=\"" << (py(v) + 4)
            << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">"
            << trim_label(v) << "</text>\n";
        svg << "  <line x1=\"" << left << "\" y1=\"" << py(v) << "\" x2=\"" << right
            << "\" y2=\"" << py(v) << "\" stroke=\"#dddddd\" stroke-dasharray=\"3 3\"/>\n";
    }
    svg << "  <text x=\"" << (left + (right - left) / 2) << "\" y=\"" << (height - 14)
        << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">Time (s)"
        << "</text>\n";
    svg << "  <text x=\"20\" y=\"" << (top + (bottom - top) / 2)
        << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\""
        << " transform=\"rotate(-90 20 " << (top + (bottom - top) / 2) << ")\">" << y_label(kind)
        << "</text>\n";

    int idx = 0;
    for (const auto& [name, points] : series) {
        const char* color = kPalette[idx % 8];
        svg << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\""
            << " points=\"";
        double prev_v = points.empty() ? 0.0 : points.front().second;
        bool first = true;
        for (const auto& [t, v] : points) {
            // Route ids are categorical; draw the switch as a step.
            if (kind == ChartKind::RouteVsTime && !first && v != prev_v) {
                svg << px(t) << ',' << py(prev_v) << ' ';
            }
            svg << px(t) << ',' << py(v) << ' ';
            prev_v = v;
            first = false;
        }
        svg << "\"/>\n";

        double ly = top + 18.0 * idx;
        svg << "  <line x1=\"" << (right + 12) << "\" y1=\"" << ly << "\" x2=\"" << (right + 38)
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2.5\"/>\n";
        svg << "  <text x=\"" << (right + 44) << "\" y=\"" << (ly + 4)
            << "\" font-size=\"12\" font-family=\"sans-serif\">" << name << "</text>\n";
        idx++;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace vanet
