#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vanetsim/recorder.hpp"

namespace vanet {

// Post-hoc result charts rendered straight from an exported
// vehicle_updates table (never from live simulation state).
enum class ChartKind { SpeedVsTime, DistanceVsTime, RouteVsTime };

std::optional<ChartKind> chart_kind_from_name(const std::string& name);
const char* chart_kind_name(ChartKind kind);

// Long-format series table: header `time_s,name,value`, ordered by vehicle
// name then time, for external plotting tools.
std::string chart_tidy_csv(ChartKind kind, const std::vector<VehicleUpdateRow>& rows);

// Self-contained SVG: one polyline per vehicle, named legend, labeled and
// unit-annotated axes. Route charts render as steps.
std::string chart_svg(ChartKind kind, const std::vector<VehicleUpdateRow>& rows,
                      const std::string& title);

}  // namespace vanet
