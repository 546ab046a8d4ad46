#include "vanetsim/apps.hpp"

#include <cmath>

namespace vanet {

std::optional<AppKind> app_kind_from_name(const std::string& name) {
    if (name == "BEACON") return AppKind::Beacon;
    if (name == "YIELD") return AppKind::Yield;
    if (name == "REROUTE") return AppKind::Reroute;
    if (name == "REPLAY_ATTACKER") return AppKind::ReplayAttacker;
    if (name == "BOGUS_ATTACKER") return AppKind::BogusAttacker;
    return std::nullopt;
}

const char* app_kind_name(AppKind kind) {
    switch (kind) {
        case AppKind::Beacon: return "BEACON";
        case AppKind::Yield: return "YIELD";
        case AppKind::Reroute: return "REROUTE";
        case AppKind::ReplayAttacker: return "REPLAY_ATTACKER";
        case AppKind::BogusAttacker: return "BOGUS_ATTACKER";
    }
    return "?";
}

V2xMessage make_cam(const std::string& source, Nanos now, const GeoPoint& position,
                    double speed_mps, double heading_deg, bool emergency) {
    V2xMessage msg;
    msg.type = MessageType::Cam;
    msg.source = source;
    msg.generation_time = now;
    msg.position = position;
    msg.speed_mps = speed_mps;
    msg.heading_deg = heading_deg;
    msg.emergency = emergency;
    return msg;
}

void YieldApp::on_emergency_cam(const VehicleState& self, const V2xMessage& cam, Nanos now) {
    double distance = geo_distance_m(self.position, cam.position);

    if (distance <= threshold_m_) {
        yielding_ = true;
        release_ = false;
        last_near_claim_ = now;
    } else if (yielding_) {
        // Out-of-range claim: the EV has passed if it is now behind us and the
        // distance is growing compared with the previous claim.
        double to_claim = bearing_deg(self.position, cam.position);
        double diff = std::fabs(to_claim - self.heading_deg);
        if (diff > 180.0) diff = 360.0 - diff;
        bool behind = diff > 90.0;
        bool receding = has_prev_claim_ && distance > prev_claim_distance_;
        if (behind && receding) release_ = true;
    }

    has_prev_claim_ = true;
    prev_claim_distance_ = distance;
}

bool YieldApp::must_yield(Nanos now) const {
    if (!yielding_) return false;
    if (release_) return false;
    return now - last_near_claim_ <= hold_;
}

void RerouteApp::on_denm(const VehicleState& self, const V2xMessage& denm,
                         const RoadNetwork& network) {
    if (rerouted_ || pending_) return;
    if (denm.event_kind != "ACCIDENT") return;
    pending_ = reroute_decision(self, denm.event_edge, network, network.route(self.route_id));
}

std::optional<int> RerouteApp::take_pending() {
    if (!pending_) return std::nullopt;
    std::optional<int> out = pending_;
    pending_.reset();
    rerouted_ = true;
    return out;
}

void ReplayApp::on_emergency_cam(const V2xMessage& cam, Nanos heard_at) {
    buffer_.push_back({heard_at + delay_, cam});
}

std::vector<V2xMessage> ReplayApp::take_due(Nanos now) {
    std::vector<V2xMessage> due;
    while (!buffer_.empty() && buffer_.front().replay_at <= now) {
        due.push_back(buffer_.front().message);
        buffer_.pop_front();
    }
    return due;
}

V2xMessage BogusApp::fire(const std::string& source, Nanos now, const GeoPoint& sender_position,
                          double speed_mps, double heading_deg) {
    fired_ = true;
    V2xMessage msg;
    msg.type = MessageType::Denm;
    msg.source = source;
    msg.generation_time = now;
    msg.position = sender_position;
    msg.speed_mps = speed_mps;
    msg.heading_deg = heading_deg;
    msg.emergency = false;
    msg.event_kind = "ACCIDENT";
    msg.event_edge = event_edge_;
    msg.event_position = event_position_;
    return msg;
}

}  // namespace vanet
