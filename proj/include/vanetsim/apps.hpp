#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "vanetsim/geo.hpp"
#include "vanetsim/traffic.hpp"
#include "vanetsim/v2x.hpp"

namespace vanet {

// Station applications. The engine owns the tick loop and the channel; these
// types hold per-station state and answer two questions each tick: what to
// send, and how to react to what was heard.

enum class AppKind { Beacon, Yield, Reroute, ReplayAttacker, BogusAttacker };

std::optional<AppKind> app_kind_from_name(const std::string& name);
const char* app_kind_name(AppKind kind);

// Periodic CAM schedule. Emission is tick-aligned: due when now >= next_due.
struct BeaconState {
    Nanos interval = kNanosPerSecond;
    Nanos next_due = 0;

    bool due(Nanos now) const { return now >= next_due; }
    void mark_sent(Nanos now) { next_due = now + interval; }
};

// Builds the CAM a station sends about itself.
V2xMessage make_cam(const std::string& source, Nanos now, const GeoPoint& position,
                    double speed_mps, double heading_deg, bool emergency);

// Yield-to-emergency behaviour. A vehicle holds still while a claimed
// emergency vehicle is close; it releases once claims go quiet for the hold
// time, or once the freshest claim is behind the vehicle and moving away.
class YieldApp {
  public:
    explicit YieldApp(double threshold_m, Nanos hold) : threshold_m_(threshold_m), hold_(hold) {}

    // Feed every received emergency CAM here (self-sourced ones excluded by
    // the caller). Takes the receiver's state as of the reception tick.
    void on_emergency_cam(const VehicleState& self, const V2xMessage& cam, Nanos now);

    // Decision for the upcoming tick; call once per tick after receptions.
    bool must_yield(Nanos now) const;

    bool yielding() const { return yielding_; }

  private:
    double threshold_m_;
    Nanos hold_;
    bool yielding_ = false;
    bool release_ = false;          // freshest claim was behind and receding
    Nanos last_near_claim_ = 0;     // time of the last claim within threshold
    bool has_prev_claim_ = false;
    double prev_claim_distance_ = 0.0;
};

// Reroute-on-accident behaviour. Reacts to the first credible accident DENM
// for an edge still ahead; the switch is applied by the engine on the next
// tick and announced with the right blinker for that tick.
class RerouteApp {
  public:
    void on_denm(const VehicleState& self, const V2xMessage& denm, const RoadNetwork& network);

    // Route id to switch to, if a decision is pending. Clears the pending
    // flag; the engine calls this once at the start of each tick.
    std::optional<int> take_pending();

    bool rerouted() const { return rerouted_; }

  private:
    std::optional<int> pending_;
    bool rerouted_ = false;
};

// Replay attacker: records every emergency CAM it hears and re-transmits each
// exactly once, `delay` after capture, payload untouched.
class ReplayApp {
  public:
    explicit ReplayApp(Nanos delay) : delay_(delay) {}

    void on_emergency_cam(const V2xMessage& cam, Nanos heard_at);

    // Messages whose replay time has arrived, in capture order. Each message
    // is returned once and then dropped from the buffer.
    std::vector<V2xMessage> take_due(Nanos now);

    Nanos delay() const { return delay_; }

  private:
    struct Captured {
        Nanos replay_at;
        V2xMessage message;
    };
    Nanos delay_;
    std::deque<Captured> buffer_;
};

// Bogus-information attacker: fabricates a single accident DENM once the
// trigger time is reached.
class BogusApp {
  public:
    BogusApp(Nanos trigger, std::string event_edge, GeoPoint event_position)
        : trigger_(trigger), event_edge_(std::move(event_edge)), event_position_(event_position) {}

    bool due(Nanos now) const { return !fired_ && now >= trigger_; }

    // The fabricated DENM. Marks the app as fired.
    V2xMessage fire(const std::string& source, Nanos now, const GeoPoint& sender_position,
                    double speed_mps, double heading_deg);

    bool fired() const { return fired_; }
    const std::string& event_edge() const { return event_edge_; }
    const GeoPoint& event_position() const { return event_position_; }
    Nanos trigger() const { return trigger_; }

  private:
    Nanos trigger_;
    std::string event_edge_;
    GeoPoint event_position_;
    bool fired_ = false;
};

}  // namespace vanet
