#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "vanetsim/geo.hpp"
#include "vanetsim/roadnet.hpp"

namespace vanet {

// All simulation time is integer nanoseconds.
using Nanos = std::int64_t;
inline constexpr Nanos kNanosPerSecond = 1'000'000'000;

inline Nanos seconds_to_nanos(double s) {
    return static_cast<Nanos>(s * 1e9 + (s >= 0 ? 0.5 : -0.5));
}
inline double nanos_to_seconds(Nanos ns) { return static_cast<double>(ns) / 1e9; }

enum class VehicleClass { Normal, Emergency };

// Per-tick kinematic record of one vehicle.
struct VehicleState {
    std::string name;
    VehicleClass vclass = VehicleClass::Normal;
    int route_id = 0;
    double route_progress_m = 0.0;   // distance along the current route
    double distance_driven_m = 0.0;  // cumulative over the whole run
    double speed_mps = 0.0;
    double longitudinal_accel_mps2 = 0.0;
    double heading_deg = 0.0;
    GeoPoint position;
    std::string connection_id;  // occupied edge
    int lane_index = 0;
    bool stopped = false;
    bool blinker_right = false;
    bool blinker_left = false;
    bool brake_light = false;
    double slope_deg = 0.0;
    bool departed = false;
    bool arrived = false;
    std::optional<Nanos> arrival_time;
};

struct DriverConfig {
    double max_speed_mps = 13.0;
    double max_accel_mps2 = 2.6;
    double max_decel_mps2 = 4.5;  // positive magnitude
    double min_gap_m = 2.0;
    double headway_s = 1.5;
    Nanos departure_time = 0;
    double yield_threshold_m = 100.0;
    Nanos yield_hold = 3 * kNanosPerSecond;  // release lag after the last qualifying claim
};

struct LeaderInfo {
    double gap_m = 0.0;    // leader progress minus own progress
    double speed_mps = 0.0;
};

// One bounded-acceleration update of the gap-keeping law. Pure function;
// position/heading and arrival handling belong to the engine.
//
//   v' = clamp(target, v - maxDecel*dt, v + maxAccel*dt), never negative,
//   distance' = distance + v'*dt, accel = (v'-v)/dt,
//   brakeLight = (v' < v), stopped = (v' == 0).
//
// mustYield forces target 0. The follow target is the smaller of a headway
// term, (gap - minGap) / max(headway, dt), and a braking envelope,
// sqrt((maxDecel*dt)^2 + leaderSpeed^2 + 2*maxDecel*(gap - minGap)) -
// maxDecel*dt, which together keep the follower strictly behind any leader
// regardless of what the leader does next tick.
VehicleState step_vehicle(const VehicleState& state, const DriverConfig& cfg,
                          std::optional<LeaderInfo> leader, bool must_yield, double dt_s);

// True when a claimed emergency-vehicle position is within `threshold_m`
// (boundary inclusive) of the vehicle. Callers ignore self-sourced claims.
bool yield_decision(const VehicleState& self, const GeoPoint& claimed_ev_position,
                    double threshold_m);

// Alternative route choice after an accident notification. Returns the
// admissible alternative (same destination, passes over the currently
// occupied edge, avoids `event_edge`) with minimal remaining length, lowest
// route id on ties; nullopt when the event is not ahead or nothing fits.
std::optional<int> reroute_decision(const VehicleState& self, const std::string& event_edge,
                                    const RoadNetwork& network, const Route& current_route);

}  // namespace vanet
