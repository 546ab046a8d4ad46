#include <optional>
#include <string>

#include "doctest.h"
#include "test_util.hpp"
#include "vanetsim/apps.hpp"
#include "vanetsim/io.hpp"
#include "vanetsim/roadnet.hpp"

using namespace vanet;

namespace {
constexpr Nanos kSec = kNanosPerSecond;
}

TEST_CASE("app kind names round-trip and unknown names are rejected") {
    for (AppKind kind : {AppKind::Beacon, AppKind::Yield, AppKind::Reroute,
                         AppKind::ReplayAttacker, AppKind::BogusAttacker}) {
        CHECK(app_kind_from_name(app_kind_name(kind)) == kind);
    }
    CHECK_FALSE(app_kind_from_name("JAMMER").has_value());
    CHECK_FALSE(app_kind_from_name("beacon").has_value());  // case-sensitive
}

TEST_CASE("beacon schedule is tick-aligned and periodic") {
    BeaconState b;
    b.interval = 3 * kSec;
    CHECK(b.due(0));
    b.mark_sent(0);
    CHECK_FALSE(b.due(kSec));
    CHECK_FALSE(b.due(3 * kSec - 1));
    CHECK(b.due(3 * kSec));
    b.mark_sent(3 * kSec);
    CHECK(b.due(6 * kSec));
}

TEST_CASE("make_cam copies the kinematic snapshot") {
    GeoPoint pos{52.98, -1.17, 2.0};
    V2xMessage cam = make_cam("ev_0", 20 * kSec, pos, 17.0, 180.0, true);
    CHECK(cam.type == MessageType::Cam);
    CHECK(cam.source == "ev_0");
    CHECK(cam.generation_time == 20 * kSec);
    CHECK(cam.position.latitude == 52.98);
    CHECK(cam.speed_mps == 17.0);
    CHECK(cam.heading_deg == 180.0);
    CHECK(cam.emergency);
    CHECK(cam.event_kind.empty());
}

namespace {

// Self at a fixed point, heading due north; claims placed south (behind)
// or north (ahead) at round metre-ish offsets.
VehicleState northbound_self() {
    VehicleState self;
    self.position = GeoPoint{52.99, -1.16, 0.0};
    self.heading_deg = 0.0;
    return self;
}

GeoPoint south_of(double millideg) { return GeoPoint{52.99 - millideg / 1000.0, -1.16, 0.0}; }
GeoPoint north_of(double millideg) { return GeoPoint{52.99 + millideg / 1000.0, -1.16, 0.0}; }

}  // namespace

TEST_CASE("yield holds while claims are near and releases after the hold time") {
    VehicleState self = northbound_self();
    YieldApp app(100.0, 3 * kSec);
    CHECK_FALSE(app.must_yield(0));

    // ~50 m away: within the 100 m threshold.
    app.on_emergency_cam(self, make_cam("ev", 10 * kSec, north_of(0.45), 17, 180, true), 10 * kSec);
    CHECK(app.yielding());
    CHECK(app.must_yield(10 * kSec));
    CHECK(app.must_yield(13 * kSec));           // exactly at the hold boundary
    CHECK_FALSE(app.must_yield(13 * kSec + 1));  // one nanosecond past it

    // A fresh near claim re-arms the hold.
    app.on_emergency_cam(self, make_cam("ev", 14 * kSec, north_of(0.45), 17, 180, true), 14 * kSec);
    CHECK(app.must_yield(17 * kSec));
}

TEST_CASE("yield releases early once the claim is behind and receding") {
    VehicleState self = northbound_self();
    YieldApp app(100.0, 30 * kSec);  // long hold: only the release path can end it

    app.on_emergency_cam(self, make_cam("ev", 10 * kSec, south_of(0.45), 17, 180, true), 10 * kSec);
    CHECK(app.must_yield(10 * kSec));

    // Behind (due south of a northbound vehicle) and farther than before.
    app.on_emergency_cam(self, make_cam("ev", 12 * kSec, south_of(1.4), 17, 180, true), 12 * kSec);
    CHECK_FALSE(app.must_yield(12 * kSec));
}

TEST_CASE("an out-of-range claim ahead does not release the yield") {
    VehicleState self = northbound_self();
    YieldApp app(100.0, 30 * kSec);

    app.on_emergency_cam(self, make_cam("ev", 10 * kSec, north_of(0.45), 17, 180, true), 10 * kSec);
    // Farther away but in front: the emergency is still approaching traffic
    // ahead, so the vehicle stays put for the whole hold.
    app.on_emergency_cam(self, make_cam("ev", 12 * kSec, north_of(1.4), 17, 180, true), 12 * kSec);
    CHECK(app.must_yield(12 * kSec));
    CHECK(app.must_yield(40 * kSec));
    CHECK_FALSE(app.must_yield(40 * kSec + 1));
}

TEST_CASE("replay buffers every heard emergency CAM and fires each exactly once") {
    ReplayApp app(28 * kSec);
    CHECK(app.delay() == 28 * kSec);

    V2xMessage first = make_cam("ev", 10 * kSec, GeoPoint{52.98, -1.16, 0}, 17, 180, true);
    first.message_id = 5;
    V2xMessage second = make_cam("ev", 12 * kSec, GeoPoint{52.979, -1.16, 0}, 17, 180, true);
    second.message_id = 7;
    app.on_emergency_cam(first, 10 * kSec);
    app.on_emergency_cam(second, 12 * kSec);

    CHECK(app.take_due(37 * kSec).empty());             // nothing due yet
    std::vector<V2xMessage> due = app.take_due(38 * kSec);
    REQUIRE(due.size() == 1);                           // capture order
    CHECK(due[0].message_id == 5);
    CHECK(due[0].generation_time == 10 * kSec);         // payload untouched

    due = app.take_due(41 * kSec);
    REQUIRE(due.size() == 1);
    CHECK(due[0].message_id == 7);

    CHECK(app.take_due(100 * kSec).empty());            // nothing replays twice
}

TEST_CASE("reroute reacts once to a credible accident DENM ahead") {
    RoadNetwork net = load_road_network(read_file(scenario_path("triangle.net")));
    VehicleState self;
    self.route_id = 1;
    self.route_progress_m = 300.0;

    V2xMessage denm;
    denm.type = MessageType::Denm;
    denm.source = "veh_0";
    denm.event_kind = "ACCIDENT";
    denm.event_edge = "102_103";

    RerouteApp app;
    CHECK_FALSE(app.take_pending().has_value());

    // A non-accident DENM is ignored.
    V2xMessage jam = denm;
    jam.event_kind = "JAM";
    app.on_denm(self, jam, net);
    CHECK_FALSE(app.take_pending().has_value());
    CHECK_FALSE(app.rerouted());

    app.on_denm(self, denm, net);
    CHECK(app.take_pending() == 3);
    CHECK(app.rerouted());
    CHECK_FALSE(app.take_pending().has_value());  // consumed

    // Later DENMs no longer move a vehicle that already rerouted.
    app.on_denm(self, denm, net);
    CHECK_FALSE(app.take_pending().has_value());
}

TEST_CASE("a DENM for an edge not ahead leaves the reroute app armed") {
    RoadNetwork net = load_road_network(read_file(scenario_path("triangle.net")));
    VehicleState self;
    self.route_id = 1;
    self.route_progress_m = 1300.0;  // already past 102_103

    V2xMessage denm;
    denm.type = MessageType::Denm;
    denm.event_kind = "ACCIDENT";
    denm.event_edge = "102_103";

    RerouteApp app;
    app.on_denm(self, denm, net);
    CHECK_FALSE(app.take_pending().has_value());
    CHECK_FALSE(app.rerouted());

    // Still able to react to a relevant report later.
    self.route_progress_m = 300.0;
    app.on_denm(self, denm, net);
    CHECK(app.take_pending() == 3);
}

TEST_CASE("the bogus app fires one fabricated accident DENM at its trigger") {
    GeoPoint event{52.963, -1.179, 0.0};
    BogusApp app(30 * kSec, "102_103", event);
    CHECK(app.trigger() == 30 * kSec);
    CHECK_FALSE(app.due(29 * kSec));
    CHECK(app.due(30 * kSec));
    CHECK_FALSE(app.fired());

    GeoPoint sender{52.9655, -1.1795, 0.0};
    V2xMessage denm = app.fire("veh_0", 30 * kSec, sender, 12.5, 171.0);
    CHECK(app.fired());
    CHECK_FALSE(app.due(31 * kSec));  // one-shot

    CHECK(denm.type == MessageType::Denm);
    CHECK(denm.source == "veh_0");
    CHECK(denm.generation_time == 30 * kSec);
    CHECK(denm.position.latitude == sender.latitude);
    CHECK(denm.speed_mps == 12.5);
    CHECK_FALSE(denm.emergency);
    CHECK(denm.event_kind == "ACCIDENT");
    CHECK(denm.event_edge == "102_103");
    CHECK(denm.event_position.latitude == event.latitude);
}
