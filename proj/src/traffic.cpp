#include "vanetsim/traffic.hpp"

#include <algorithm>
#include <cmath>

namespace vanet {

VehicleState step_vehicle(const VehicleState& state, const DriverConfig& cfg,
                          std::optional<LeaderInfo> leader, bool must_yield, double dt_s) {
    VehicleState next = state;

    double target = cfg.max_speed_mps;
    if (must_yield) {
        target = 0.0;
    } else if (leader) {
        double usable = std::max(0.0, leader->gap_m - cfg.min_gap_m);
        double follow = usable / std::max(cfg.headway_s, dt_s);
        // Braking envelope: the largest speed from which the usable gap still
        // suffices for a bounded-decel stop, given one tick of reaction lag.
        // Keeps the discrete update collision-free even against a leader that
        // stops dead; irrelevant at steady following distance.
        double bdt = cfg.max_decel_mps2 * dt_s;
        double safe = std::sqrt(bdt * bdt + leader->speed_mps * leader->speed_mps +
                                2.0 * cfg.max_decel_mps2 * usable) -
                      bdt;
        target = std::min(target, std::min(follow, safe));
    }

    double v = state.speed_mps;
    double lo = v - cfg.max_decel_mps2 * dt_s;
    double hi = v + cfg.max_accel_mps2 * dt_s;
    double v_next = std::clamp(target, lo, hi);
    v_next = std::max(0.0, v_next);

    double advance = v_next * dt_s;
    next.speed_mps = v_next;
    next.route_progress_m = state.route_progress_m + advance;
    next.distance_driven_m = state.distance_driven_m + advance;
    next.longitudinal_accel_mps2 = (v_next - v) / dt_s;
    next.brake_light = v_next < v;
    next.stopped = v_next == 0.0;
    return next;
}

bool yield_decision(const VehicleState& self, const GeoPoint& claimed_ev_position,
                    double threshold_m) {
    return geo_distance_m(self.position, claimed_ev_position) <= threshold_m;
}

std::optional<int> reroute_decision(const VehicleState& self, const std::string& event_edge,
                                    const RoadNetwork& network, const Route& current_route) {
    // Only react when the blocked edge still lies ahead on the current route.
    bool ahead = false;
    for (const std::string& id : network.remaining_edges(current_route, self.route_progress_m)) {
        if (id == event_edge) {
            ahead = true;
            break;
        }
    }
    if (!ahead) return std::nullopt;

    std::optional<int> best;
    double best_remaining = 0.0;
    for (const auto& [alt_id, alt] : network.routes) {
        if (alt.route_id == current_route.route_id) continue;
        if (geo_distance_m(alt.destination, current_route.destination) > 1.0) continue;
        double progress = network.transfer_progress(current_route, self.route_progress_m, alt);
        if (progress < 0.0) continue;  // not currently on this route's path
        bool blocked = false;
        for (const std::string& id : network.remaining_edges(alt, progress)) {
            if (id == event_edge) {
                blocked = true;
                break;
            }
        }
        if (blocked) continue;
        double remaining = alt.length_m - progress;
        if (!best || remaining < best_remaining ||
            (remaining == best_remaining && alt.route_id < *best)) {
            best = alt.route_id;
            best_remaining = remaining;
        }
    }
    return best;
}

}  // namespace vanet
