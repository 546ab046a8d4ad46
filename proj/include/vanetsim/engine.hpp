#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vanetsim/apps.hpp"
#include "vanetsim/roadnet.hpp"
#include "vanetsim/traffic.hpp"
#include "vanetsim/v2x.hpp"

namespace vanet {

enum class AttackMode { None, Replay, Bogus };

std::optional<AttackMode> attack_mode_from_name(const std::string& name);
const char* attack_mode_name(AttackMode mode);

// Static description of one simulated vehicle.
struct VehicleSpec {
    std::string name;
    VehicleClass vclass = VehicleClass::Normal;
    int route_id = 0;
    DriverConfig driver;
    std::vector<AppKind> apps;
    Nanos beacon_interval = kNanosPerSecond;
    Nanos replay_delay = 0;            // REPLAY_ATTACKER
    Nanos bogus_trigger = 0;           // BOGUS_ATTACKER
    std::string bogus_event_edge;      // BOGUS_ATTACKER
    int bogus_count = 1;               // DENM broadcasts (default: no repeat)
    double stop_at_m = -1.0;           // scripted roadside halt, <0 = never
    Nanos stop_for = 0;

    bool has_app(AppKind kind) const;
};

struct RsuSpec {
    std::string name;
    GeoPoint position;
    std::vector<AppKind> apps;
    Nanos beacon_interval = 3 * kNanosPerSecond;

    bool has_app(AppKind kind) const;
};

struct Scenario {
    std::string name;
    Nanos dt = kNanosPerSecond;
    Nanos duration = 0;
    RoadNetwork network;
    ChannelConfig channel;
    std::vector<VehicleSpec> vehicles;
    std::vector<RsuSpec> rsus;
    AttackMode attack_mode = AttackMode::None;
    // Uniform widening of replayDelay, drawn once per run from the run seed,
    // so a multi-iteration dataset does not repeat one fixed attack timing.
    double replay_delay_jitter_s = 0.0;
};

// Per-run attack annotations for downstream training/evaluation. Empty when
// the run was executed without an attack.
struct GroundTruthLabels {
    AttackMode attack_mode = AttackMode::None;
    std::string attacker;                               // empty if none
    std::optional<std::pair<Nanos, Nanos>> attack_interval;
    std::set<std::int64_t> malicious_message_ids;
};

// One logged kinematic row (pre-formatting; the recorder turns these into
// the VEHICLE_UPDATES table).
struct VehicleRecord {
    Nanos time = 0;
    std::string name;
    double speed_mps = 0.0;
    double heading_deg = 0.0;
    GeoPoint position;
    double distance_driven_m = 0.0;
    double longitudinal_accel_mps2 = 0.0;
    double slope_deg = 0.0;
    bool stopped = false;
    int route_id = 0;
    std::string connection_id;
    int lane_index = 0;
    bool blinker_right = false;
    bool blinker_left = false;
    bool brake_light = false;
};

struct ArrivalInfo {
    std::string name;
    Nanos departure = 0;
    std::optional<Nanos> arrival;  // empty when still en route at cutoff
};

struct RunLog {
    std::string scenario_name;
    AttackMode attack_mode = AttackMode::None;
    std::uint64_t seed = 0;
    std::vector<VehicleRecord> vehicle_updates;
    std::vector<TransmissionEvent> transmissions;
    std::vector<ReceptionEvent> receptions;
    GroundTruthLabels ground_truth;
    std::vector<ArrivalInfo> arrivals;
};

// Parses and validates a scenario config. `base_dir` anchors the [network]
// file path; `mode_override` must be NONE or the configured attack mode and
// exists so one config can produce both the baseline and the attack dataset.
Scenario load_scenario(const std::string& text, const std::string& base_dir,
                       std::optional<AttackMode> mode_override = std::nullopt);

// Executes one deterministic run. Identical (scenario, seed) pairs produce
// identical logs, byte for byte once serialized.
RunLog run(const Scenario& scenario, std::uint64_t seed);

// n independent runs seeded seed_base + 0 ... seed_base + (n - 1).
std::vector<RunLog> iterate(const Scenario& scenario, int n, std::uint64_t seed_base);

}  // namespace vanet
