#include "vanetsim/engine.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>
#include <unordered_map>

#include "vanetsim/errors.hpp"
#include "vanetsim/io.hpp"
#include "vanetsim/textconfig.hpp"

namespace vanet {

std::optional<AttackMode> attack_mode_from_name(const std::string& name) {
    if (name == "NONE") return AttackMode::None;
    if (name == "REPLAY") return AttackMode::Replay;
    if (name == "BOGUS") return AttackMode::Bogus;
    return std::nullopt;
}

const char* attack_mode_name(AttackMode mode) {
    switch (mode) {
        case AttackMode::None: return "NONE";
        case AttackMode::Replay: return "REPLAY";
        case AttackMode::Bogus: return "BOGUS";
    }
    return "?";
}

bool VehicleSpec::has_app(AppKind kind) const {
    return std::find(apps.begin(), apps.end(), kind) != apps.end();
}

bool RsuSpec::has_app(AppKind kind) const {
    return std::find(apps.begin(), apps.end(), kind) != apps.end();
}

namespace {

// ---------------------------------------------------------------- loading

void reject_unknown_keys(const ConfigSection& sec, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : sec.entries) {
        (void)value;
        bool known = false;
        for (const char* a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ValidationError("unknown key '" + key + "' in section [" + sec.label() + "]");
        }
    }
}

std::vector<AppKind> parse_apps(const ConfigSection& sec) {
    std::vector<AppKind> apps;
    for (const std::string& token : split_list(sec.get_or("apps", ""))) {
        std::optional<AppKind> kind = app_kind_from_name(token);
        if (!kind) {
            throw ValidationError("unknown app '" + token + "' in section [" + sec.label() + "]");
        }
        if (std::find(apps.begin(), apps.end(), *kind) != apps.end()) {
            throw ValidationError("duplicate app '" + token + "' in section [" + sec.label() + "]");
        }
        apps.push_back(*kind);
    }
    return apps;
}

VehicleSpec parse_vehicle(const ConfigSection& sec, const RoadNetwork& network) {
    reject_unknown_keys(sec, {"class", "route", "depart_s", "max_speed_mps", "max_accel_mps2",
                              "max_decel_mps2", "min_gap_m", "headway_s", "yield_threshold_m",
                              "yield_hold_s", "apps", "beacon_interval_s", "replay_delay_s",
                              "bogus_trigger_s", "bogus_event_edge", "bogus_count", "stop_at_m",
                              "stop_for_s"});
    VehicleSpec spec;
    spec.name = sec.name;
    if (spec.name.empty()) {
        throw ValidationError("vehicle section missing a name (expected [vehicle \"...\"])");
    }

    std::string cls = sec.get_or("class", "NORMAL");
    if (cls == "NORMAL") {
        spec.vclass = VehicleClass::Normal;
    } else if (cls == "EMERGENCY") {
        spec.vclass = VehicleClass::Emergency;
    } else {
        throw ValidationError("unknown class '" + cls + "' in section [" + sec.label() + "]");
    }

    spec.route_id = static_cast<int>(sec.get_int("route"));
    if (network.routes.find(spec.route_id) == network.routes.end()) {
        throw ValidationError("vehicle '" + spec.name + "' references undefined route " +
                              std::to_string(spec.route_id));
    }

    DriverConfig& d = spec.driver;
    d.departure_time = seconds_to_nanos(sec.get_double_or("depart_s", 0.0));
    d.max_speed_mps = sec.get_double_or("max_speed_mps", d.max_speed_mps);
    d.max_accel_mps2 = sec.get_double_or("max_accel_mps2", d.max_accel_mps2);
    d.max_decel_mps2 = sec.get_double_or("max_decel_mps2", d.max_decel_mps2);
    d.min_gap_m = sec.get_double_or("min_gap_m", d.min_gap_m);
    d.headway_s = sec.get_double_or("headway_s", d.headway_s);
    d.yield_threshold_m = sec.get_double_or("yield_threshold_m", d.yield_threshold_m);
    d.yield_hold = seconds_to_nanos(sec.get_double_or("yield_hold_s", 3.0));
    if (d.departure_time < 0 || d.max_speed_mps <= 0 || d.max_accel_mps2 <= 0 ||
        d.max_decel_mps2 <= 0 || d.min_gap_m < 0 || d.headway_s <= 0 ||
        d.yield_threshold_m <= 0 || d.yield_hold < 0) {
        throw ValidationError("non-positive driver parameter in section [" + sec.label() + "]");
    }

    spec.apps = parse_apps(sec);
    spec.beacon_interval = seconds_to_nanos(sec.get_double_or("beacon_interval_s", 1.0));
    if (spec.beacon_interval <= 0) {
        throw ValidationError("beacon_interval_s must be positive in section [" + sec.label() + "]");
    }

    if (spec.has_app(AppKind::ReplayAttacker)) {
        spec.replay_delay = seconds_to_nanos(sec.get_double("replay_delay_s"));
        if (spec.replay_delay <= 0) {
            throw ValidationError("replay_delay_s must be positive in section [" + sec.label() + "]");
        }
    }
    if (spec.has_app(AppKind::BogusAttacker)) {
        spec.bogus_trigger = seconds_to_nanos(sec.get_double("bogus_trigger_s"));
        spec.bogus_event_edge = sec.get("bogus_event_edge");
        spec.bogus_count = static_cast<int>(sec.get_int_or("bogus_count", 1));
        if (spec.bogus_trigger < 0 || spec.bogus_count < 1) {
            throw ValidationError("invalid bogus attack parameters in section [" + sec.label() + "]");
        }
        const Route& route = network.route(spec.route_id);
        if (std::find(route.edges.begin(), route.edges.end(), spec.bogus_event_edge) ==
            route.edges.end()) {
            throw ValidationError("bogus_event_edge '" + spec.bogus_event_edge +
                                  "' is not on route " + std::to_string(spec.route_id) +
                                  " of vehicle '" + spec.name + "'");
        }
    }

    if (sec.has("stop_at_m") || sec.has("stop_for_s")) {
        spec.stop_at_m = sec.get_double("stop_at_m");
        spec.stop_for = seconds_to_nanos(sec.get_double("stop_for_s"));
        if (spec.stop_at_m < 0 || spec.stop_for <= 0) {
            throw ValidationError("invalid scripted stop in section [" + sec.label() + "]");
        }
    }
    return spec;
}

RsuSpec parse_rsu(const ConfigSection& sec) {
    reject_unknown_keys(sec, {"latitude", "longitude", "altitude", "apps", "beacon_interval_s"});
    RsuSpec spec;
    spec.name = sec.name;
    if (spec.name.empty()) {
        throw ValidationError("rsu section missing a name (expected [rsu \"...\"])");
    }
    spec.position.latitude = sec.get_double("latitude");
    spec.position.longitude = sec.get_double("longitude");
    spec.position.altitude = sec.get_double_or("altitude", 0.0);
    if (!valid_geo(spec.position)) {
        throw ValidationError("invalid coordinates in section [" + sec.label() + "]");
    }
    spec.apps = parse_apps(sec);
    for (AppKind kind : spec.apps) {
        if (kind != AppKind::Beacon) {
            throw ValidationError("rsu '" + spec.name + "' may only run BEACON");
        }
    }
    spec.beacon_interval = seconds_to_nanos(sec.get_double_or("beacon_interval_s", 3.0));
    if (spec.beacon_interval <= 0) {
        throw ValidationError("beacon_interval_s must be positive in section [" + sec.label() + "]");
    }
    return spec;
}

// ------------------------------------------------------------- simulation

// Mutable per-station state for one run.
struct StationRuntime {
    std::string name;
    bool is_rsu = false;

    // RSU
    GeoPoint rsu_position;

    // vehicle
    const VehicleSpec* spec = nullptr;
    VehicleState state;
    bool spawned = false;
    bool done_logging = false;      // terminal row written
    bool yielding_now = false;      // yield decision applied to this tick
    bool scripted_halted = false;
    bool scripted_done = false;
    Nanos halt_until = 0;

    BeaconState beacon;
    bool beacon_enabled = false;
    std::optional<YieldApp> yield_app;
    std::optional<RerouteApp> reroute_app;
    std::optional<ReplayApp> replay_app;
    std::optional<BogusApp> bogus_app;
    int bogus_emitted = 0;

    bool active() const { return is_rsu || (spawned && !state.arrived); }
    const GeoPoint& position() const { return is_rsu ? rsu_position : state.position; }
};

void spawn_vehicle(StationRuntime& st, const RoadNetwork& network, Nanos now) {
    const VehicleSpec& spec = *st.spec;
    const Route& route = network.route(spec.route_id);
    RoutePose pose = network.position_along(route, 0.0);
    VehicleState& v = st.state;
    v.name = spec.name;
    v.vclass = spec.vclass;
    v.route_id = spec.route_id;
    v.route_progress_m = 0.0;
    v.distance_driven_m = 0.0;
    v.speed_mps = 0.0;
    v.longitudinal_accel_mps2 = 0.0;
    v.position = pose.position;
    v.heading_deg = pose.heading_deg;
    v.connection_id = pose.connection_id;
    v.lane_index = pose.lane_index;
    v.stopped = true;
    v.departed = true;
    st.spawned = true;
    (void)now;
}

VehicleRecord make_record(const StationRuntime& st, Nanos now) {
    const VehicleState& v = st.state;
    VehicleRecord row;
    row.time = now;
    row.name = v.name;
    row.speed_mps = v.speed_mps;
    row.heading_deg = v.heading_deg;
    row.position = v.position;
    row.distance_driven_m = v.distance_driven_m;
    row.longitudinal_accel_mps2 = v.longitudinal_accel_mps2;
    row.slope_deg = v.slope_deg;
    row.stopped = v.stopped;
    row.route_id = v.route_id;
    row.connection_id = v.connection_id;
    row.lane_index = v.lane_index;
    row.blinker_right = v.blinker_right;
    row.blinker_left = v.blinker_left;
    row.brake_light = v.brake_light;
    return row;
}

}  // namespace

Scenario load_scenario(const std::string& text, const std::string& base_dir,
                       std::optional<AttackMode> mode_override) {
    ConfigFile cfg = parse_config(text);
    Scenario sc;

    for (const ConfigSection& sec : cfg.sections) {
        if (sec.kind != "simulation" && sec.kind != "network" && sec.kind != "channel" &&
            sec.kind != "vehicle" && sec.kind != "rsu" && sec.kind != "attack") {
            throw ValidationError("unknown section [" + sec.label() + "] at line " +
                                  std::to_string(sec.line));
        }
    }

    const ConfigSection* sim = cfg.find("simulation");
    if (!sim) throw ValidationError("missing [simulation] section");
    reject_unknown_keys(*sim, {"name", "dt_s", "duration_s"});
    sc.name = sim->get_or("name", "scenario");
    sc.dt = seconds_to_nanos(sim->get_double_or("dt_s", 1.0));
    sc.duration = seconds_to_nanos(sim->get_double("duration_s"));
    if (sc.dt <= 0) throw ValidationError("dt_s must be positive");
    if (sc.duration < sc.dt) throw ValidationError("duration_s must cover at least one tick");

    const ConfigSection* net = cfg.find("network");
    if (!net) throw ValidationError("missing [network] section");
    reject_unknown_keys(*net, {"file"});
    std::filesystem::path net_path = std::filesystem::path(base_dir) / net->get("file");
    sc.network = load_road_network(read_file(net_path.string()));

    if (const ConfigSection* ch = cfg.find("channel")) {
        reject_unknown_keys(*ch, {"radio_range_m", "latency_ns", "loss_probability"});
        sc.channel.radio_range_m = ch->get_double_or("radio_range_m", sc.channel.radio_range_m);
        sc.channel.latency = ch->get_int_or("latency_ns", sc.channel.latency);
        sc.channel.loss_probability =
            ch->get_double_or("loss_probability", sc.channel.loss_probability);
        if (sc.channel.radio_range_m <= 0 || sc.channel.latency < 0 ||
            sc.channel.loss_probability < 0 || sc.channel.loss_probability > 1) {
            throw ValidationError("invalid [channel] parameters");
        }
    }

    for (const ConfigSection* sec : cfg.all_of("vehicle")) {
        sc.vehicles.push_back(parse_vehicle(*sec, sc.network));
    }
    for (const ConfigSection* sec : cfg.all_of("rsu")) {
        sc.rsus.push_back(parse_rsu(*sec));
    }
    if (sc.vehicles.empty()) throw ValidationError("no [vehicle] sections");

    std::map<std::string, int> names;
    for (const VehicleSpec& v : sc.vehicles) names[v.name]++;
    for (const RsuSpec& r : sc.rsus) names[r.name]++;
    for (const auto& [name, count] : names) {
        if (count > 1) throw ValidationError("duplicate station name '" + name + "'");
    }

    if (const ConfigSection* atk = cfg.find("attack")) {
        reject_unknown_keys(*atk, {"mode", "replay_delay_jitter_s"});
        std::string mode = atk->get_or("mode", "NONE");
        std::optional<AttackMode> parsed = attack_mode_from_name(mode);
        if (!parsed) throw ValidationError("unknown attack mode '" + mode + "'");
        sc.attack_mode = *parsed;
        sc.replay_delay_jitter_s = atk->get_double_or("replay_delay_jitter_s", 0.0);
        if (sc.replay_delay_jitter_s < 0) {
            throw ValidationError("replay_delay_jitter_s must be >= 0");
        }
    }

    auto count_app = [&](AppKind kind) {
        int n = 0;
        for (const VehicleSpec& v : sc.vehicles) {
            if (v.has_app(kind)) n++;
        }
        return n;
    };
    if (sc.attack_mode == AttackMode::Replay && count_app(AppKind::ReplayAttacker) == 0) {
        throw ValidationError("attack mode REPLAY but no vehicle runs REPLAY_ATTACKER");
    }
    if (sc.attack_mode == AttackMode::Bogus && count_app(AppKind::BogusAttacker) == 0) {
        throw ValidationError("attack mode BOGUS but no vehicle runs BOGUS_ATTACKER");
    }

    if (mode_override && *mode_override != sc.attack_mode) {
        // Overrides exist to strip the attack for baseline runs, never to
        // graft a different attack onto a scenario.
        if (*mode_override != AttackMode::None) {
            throw ValidationError(std::string("scenario is configured for ") +
                                  attack_mode_name(sc.attack_mode) + ", cannot run " +
                                  attack_mode_name(*mode_override));
        }
        sc.attack_mode = AttackMode::None;
    }
    return sc;
}

RunLog run(const Scenario& sc, std::uint64_t seed) {
    RunLog log;
    log.scenario_name = sc.name;
    log.attack_mode = sc.attack_mode;
    log.seed = seed;
    log.ground_truth.attack_mode = sc.attack_mode;

    std::mt19937_64 rng(seed);
    const double dt_s = nanos_to_seconds(sc.dt);
    const bool replay_on = sc.attack_mode == AttackMode::Replay;
    const bool bogus_on = sc.attack_mode == AttackMode::Bogus;

    // Stations in name order: emission, delivery and logging all walk this
    // vector, which pins the within-tick ordering (and thus id assignment).
    std::vector<StationRuntime> stations;
    stations.reserve(sc.vehicles.size() + sc.rsus.size());
    for (const VehicleSpec& spec : sc.vehicles) {
        StationRuntime st;
        st.name = spec.name;
        st.spec = &spec;
        st.beacon.interval = spec.beacon_interval;
        st.beacon_enabled = spec.has_app(AppKind::Beacon);
        if (spec.has_app(AppKind::Yield)) {
            st.yield_app.emplace(spec.driver.yield_threshold_m, spec.driver.yield_hold);
        }
        if (spec.has_app(AppKind::Reroute)) st.reroute_app.emplace();
        stations.push_back(std::move(st));
    }
    for (const RsuSpec& spec : sc.rsus) {
        StationRuntime st;
        st.name = spec.name;
        st.is_rsu = true;
        st.rsu_position = spec.position;
        st.beacon.interval = spec.beacon_interval;
        st.beacon_enabled = spec.has_app(AppKind::Beacon);
        stations.push_back(std::move(st));
    }
    std::sort(stations.begin(), stations.end(),
              [](const StationRuntime& a, const StationRuntime& b) { return a.name < b.name; });

    std::unordered_map<std::string, std::size_t> by_name;
    for (std::size_t i = 0; i < stations.size(); ++i) by_name[stations[i].name] = i;

    // Attacker apps are only constructed when their attack is enabled; a
    // NONE override therefore silences the insider without touching the
    // rest of its behaviour.
    for (StationRuntime& st : stations) {
        if (st.is_rsu) continue;
        const VehicleSpec& spec = *st.spec;
        if (replay_on && spec.has_app(AppKind::ReplayAttacker)) {
            Nanos delay = spec.replay_delay;
            if (sc.replay_delay_jitter_s > 0.0) {
                std::uniform_real_distribution<double> jitter(0.0, sc.replay_delay_jitter_s);
                delay += seconds_to_nanos(jitter(rng));
            }
            st.replay_app.emplace(delay);
            if (log.ground_truth.attacker.empty()) log.ground_truth.attacker = spec.name;
        }
        if (bogus_on && spec.has_app(AppKind::BogusAttacker)) {
            const Edge& edge = sc.network.edge(spec.bogus_event_edge);
            GeoPoint mid;  // event pinned to the edge midpoint
            double half = edge.length_m / 2.0;
            double acc = 0.0;
            mid = edge.shape.front();
            for (std::size_t i = 0; i + 1 < edge.shape.size(); ++i) {
                double seg = geo_distance_m(edge.shape[i], edge.shape[i + 1]);
                if (acc + seg >= half && seg > 0.0) {
                    mid = lerp(edge.shape[i], edge.shape[i + 1], (half - acc) / seg);
                    break;
                }
                acc += seg;
            }
            st.bogus_app.emplace(spec.bogus_trigger, spec.bogus_event_edge, mid);
            if (log.ground_truth.attacker.empty()) log.ground_truth.attacker = spec.name;
        }
    }

    MessageIdCounter ids;
    std::map<std::int64_t, std::vector<ReceptionEvent>> pending;  // tick -> receptions
    Nanos first_malicious = -1, last_malicious = -1;
    auto mark_malicious = [&](std::int64_t id, Nanos when) {
        log.ground_truth.malicious_message_ids.insert(id);
        if (first_malicious < 0) first_malicious = when;
        last_malicious = when;
    };

    const std::int64_t ticks = sc.duration / sc.dt;
    for (std::int64_t t = 0; t < ticks; ++t) {
        const Nanos now = t * sc.dt;

        // -- spawn
        for (StationRuntime& st : stations) {
            if (!st.is_rsu && !st.spawned && st.spec->driver.departure_time <= now) {
                spawn_vehicle(st, sc.network, now);
            }
        }

        // -- apply decisions deferred from the previous tick
        for (StationRuntime& st : stations) {
            if (st.is_rsu || !st.spawned || st.state.arrived) continue;
            st.state.blinker_right = false;
            st.state.blinker_left = false;
            if (st.reroute_app) {
                if (std::optional<int> target = st.reroute_app->take_pending()) {
                    const Route& from = sc.network.route(st.state.route_id);
                    const Route& to = sc.network.route(*target);
                    double progress =
                        sc.network.transfer_progress(from, st.state.route_progress_m, to);
                    // The junction may have been crossed since the decision
                    // tick; in that case the switch is silently dropped.
                    if (progress >= 0.0) {
                        st.state.route_id = *target;
                        st.state.route_progress_m = progress;
                        st.state.blinker_right = true;  // announce the turn
                    }
                }
            }
            st.yielding_now = st.yield_app && st.yield_app->must_yield(now);
            const VehicleSpec& spec = *st.spec;
            if (st.scripted_halted && now >= st.halt_until) {
                st.scripted_halted = false;
                st.scripted_done = true;
            }
            if (!st.scripted_halted && !st.scripted_done && spec.stop_at_m >= 0.0 &&
                st.state.route_progress_m >= spec.stop_at_m) {
                st.scripted_halted = true;
                st.halt_until = now + spec.stop_for;
            }
        }

        // -- emit + transmit
        std::vector<TransmissionEvent> tx_now;
        for (StationRuntime& st : stations) {
            if (!st.active()) continue;
            if (st.beacon_enabled && st.beacon.due(now)) {
                V2xMessage cam = make_cam(
                    st.name, now, st.position(), st.is_rsu ? 0.0 : st.state.speed_mps,
                    st.is_rsu ? 0.0 : st.state.heading_deg,
                    !st.is_rsu && st.state.vclass == VehicleClass::Emergency);
                cam.message_id = ids.next();
                tx_now.push_back({now, st.name, st.position(), cam});
                st.beacon.mark_sent(now);
            }
            if (st.replay_app) {
                for (V2xMessage msg : st.replay_app->take_due(now)) {
                    // Payload goes out verbatim; only the radio differs.
                    tx_now.push_back({now, st.name, st.position(), msg});
                    mark_malicious(msg.message_id, now);
                }
            }
            if (st.bogus_app && st.bogus_emitted < st.spec->bogus_count &&
                now >= st.bogus_app->trigger() +
                           static_cast<Nanos>(st.bogus_emitted) * st.spec->beacon_interval) {
                V2xMessage denm = st.bogus_app->fire(st.name, now, st.position(),
                                                     st.state.speed_mps, st.state.heading_deg);
                denm.message_id = ids.next();
                tx_now.push_back({now, st.name, st.position(), denm});
                st.bogus_emitted++;
                mark_malicious(denm.message_id, now);
            }
        }

        // -- deliver
        std::vector<RadioEndpoint> endpoints;
        for (const StationRuntime& st : stations) {
            if (st.active()) endpoints.push_back({st.name, st.position()});
        }
        for (const TransmissionEvent& tx : tx_now) {
            log.transmissions.push_back(tx);
            for (ReceptionEvent& rx : deliver(tx, endpoints, sc.channel, rng)) {
                std::int64_t target = rx.time / sc.dt;
                if (target < ticks) pending[target].push_back(std::move(rx));
            }
        }

        // -- receive
        if (auto it = pending.find(t); it != pending.end()) {
            std::vector<ReceptionEvent>& batch = it->second;
            std::stable_sort(batch.begin(), batch.end(),
                             [](const ReceptionEvent& a, const ReceptionEvent& b) {
                                 if (a.time != b.time) return a.time < b.time;
                                 if (a.receiver != b.receiver) return a.receiver < b.receiver;
                                 return a.message.message_id < b.message.message_id;
                             });
            for (const ReceptionEvent& rx : batch) {
                log.receptions.push_back(rx);
                StationRuntime& recv = stations[by_name.at(rx.receiver)];
                if (recv.is_rsu || !recv.spawned || recv.state.arrived) continue;
                if (rx.message.source == recv.name) continue;  // self-claims carry no news
                bool ev_cam = rx.message.type == MessageType::Cam && rx.message.emergency;
                if (recv.yield_app && ev_cam) {
                    recv.yield_app->on_emergency_cam(recv.state, rx.message, now);
                }
                if (recv.reroute_app && rx.message.type == MessageType::Denm) {
                    recv.reroute_app->on_denm(recv.state, rx.message, sc.network);
                }
                if (recv.replay_app && ev_cam) {
                    recv.replay_app->on_emergency_cam(rx.message, now);
                }
            }
            pending.erase(it);
        }

        // -- record (row time == the tick whose emissions used this state)
        for (StationRuntime& st : stations) {
            if (st.is_rsu || !st.spawned || st.done_logging) continue;
            log.vehicle_updates.push_back(make_record(st, now));
            if (st.state.arrived) st.done_logging = true;
        }

        // -- step (two-phase: everyone reads pre-step neighbours)
        std::vector<std::pair<std::size_t, VehicleState>> stepped;
        for (std::size_t i = 0; i < stations.size(); ++i) {
            StationRuntime& st = stations[i];
            if (st.is_rsu || !st.spawned || st.state.arrived) continue;

            // Nearest vehicle ahead on the same route. A vehicle holding for
            // an emergency claim counts as pulled over and is not an
            // obstacle; a scripted halt (a physical breakdown) is.
            std::optional<LeaderInfo> leader;
            for (const StationRuntime& other : stations) {
                if (other.is_rsu || !other.spawned || other.state.arrived || &other == &st) {
                    continue;
                }
                if (other.state.route_id != st.state.route_id) continue;
                double gap = other.state.route_progress_m - st.state.route_progress_m;
                if (gap < 0.0 || (gap == 0.0 && other.name > st.name)) continue;
                if (other.yielding_now && other.state.speed_mps == 0.0) continue;
                if (!leader || gap < leader->gap_m) {
                    leader = LeaderInfo{gap, other.state.speed_mps};
                }
            }

            const Route& route = sc.network.route(st.state.route_id);
            DriverConfig driver = st.spec->driver;
            double limit = sc.network.edge(st.state.connection_id).speed_limit_mps;
            if (limit > 0.0) driver.max_speed_mps = std::min(driver.max_speed_mps, limit);

            bool must_stop = st.yielding_now || st.scripted_halted;
            VehicleState next = step_vehicle(st.state, driver, leader, must_stop, dt_s);

            // Final-step cap: land exactly on the route end instead of
            // overshooting, so every vehicle's last row shows the full
            // route length.
            double remaining = route.length_m - st.state.route_progress_m;
            if (next.speed_mps * dt_s > remaining) {
                VehicleState capped = st.state;
                double v_next = remaining / dt_s;
                double advance = v_next * dt_s;
                capped.speed_mps = v_next;
                capped.route_progress_m = st.state.route_progress_m + advance;
                capped.distance_driven_m = st.state.distance_driven_m + advance;
                capped.longitudinal_accel_mps2 = (v_next - st.state.speed_mps) / dt_s;
                capped.brake_light = v_next < st.state.speed_mps;
                capped.stopped = v_next == 0.0;
                next = capped;
            }
            if (next.route_progress_m >= route.length_m - 1e-9) {
                next.route_progress_m = route.length_m;
                next.arrived = true;
                next.arrival_time = now + sc.dt;
            }
            RoutePose pose = sc.network.position_along(route, next.route_progress_m);
            next.position = pose.position;
            next.heading_deg = pose.heading_deg;
            next.connection_id = pose.connection_id;
            next.lane_index = pose.lane_index;
            stepped.emplace_back(i, std::move(next));
        }
        for (auto& [i, next] : stepped) stations[i].state = std::move(next);
    }

    if (first_malicious >= 0) {
        log.ground_truth.attack_interval = {first_malicious, last_malicious};
    }
    for (const StationRuntime& st : stations) {
        if (st.is_rsu) continue;
        log.arrivals.push_back(
            {st.name, st.spec->driver.departure_time,
             st.spawned ? st.state.arrival_time : std::optional<Nanos>()});
    }

    auto tx_order = [](const TransmissionEvent& a, const TransmissionEvent& b) {
        if (a.time != b.time) return a.time < b.time;
        if (a.sender != b.sender) return a.sender < b.sender;
        return a.message.message_id < b.message.message_id;
    };
    auto rx_order = [](const ReceptionEvent& a, const ReceptionEvent& b) {
        if (a.time != b.time) return a.time < b.time;
        if (a.receiver != b.receiver) return a.receiver < b.receiver;
        return a.message.message_id < b.message.message_id;
    };
    std::stable_sort(log.transmissions.begin(), log.transmissions.end(), tx_order);
    std::stable_sort(log.receptions.begin(), log.receptions.end(), rx_order);
    return log;
}

std::vector<RunLog> iterate(const Scenario& sc, int n, std::uint64_t seed_base) {
    if (n < 1) throw ValidationError("iteration count must be >= 1");
    std::vector<RunLog> logs;
    logs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        logs.push_back(run(sc, seed_base + static_cast<std::uint64_t>(i)));
    }
    return logs;
}

}  // namespace vanet
