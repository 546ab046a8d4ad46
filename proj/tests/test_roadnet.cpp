#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "vanetsim/errors.hpp"
#include "vanetsim/io.hpp"
#include "vanetsim/roadnet.hpp"

using namespace vanet;

namespace {

RoadNetwork corridor() { return load_road_network(read_file(scenario_path("corridor.net"))); }
RoadNetwork triangle() { return load_road_network(read_file(scenario_path("triangle.net"))); }

// 0.005 degrees of latitude along a meridian, from 50-digit arithmetic on
// the spherical model.
constexpr double kCorridorEdgeM = 555.9746332227937;

}  // namespace

TEST_CASE("corridor network loads with the expected geometry") {
    RoadNetwork net = corridor();
    CHECK(net.nodes.size() == 5);
    CHECK(net.edges.size() == 4);
    REQUIRE(net.routes.count(1) == 1);

    for (const auto& [id, e] : net.edges) {
        CHECK(std::abs(e.length_m - kCorridorEdgeM) < 1e-6);
        CHECK(e.lane_count == 1);
        CHECK(e.speed_limit_mps == 27.8);
        REQUIRE(e.shape.size() == 2);  // default shape: the two endpoint nodes
        CHECK(e.shape.front().latitude == net.nodes.at(e.start_node).latitude);
    }

    const Route& r = net.route(1);
    CHECK(r.edges.front() == "30806029_341334");
    CHECK(r.edges.size() == 4);
    CHECK(std::abs(net.route_length_m(1) - 4 * kCorridorEdgeM) < 1e-6);
    CHECK(r.origin.latitude == 52.995);
    CHECK(r.destination.latitude == 52.975);

    CHECK_THROWS_AS(net.edge("no_such"), ValidationError);
    CHECK_THROWS_AS(net.route(9), ValidationError);
}

TEST_CASE("position_along walks the route and resolves edge boundaries forward") {
    RoadNetwork net = corridor();
    const Route& r = net.route(1);

    RoutePose start = net.position_along(r, 0.0);
    CHECK(start.position.latitude == 52.995);
    CHECK(start.position.longitude == -1.16);
    CHECK(start.heading_deg == 180.0);  // due south, exact
    CHECK(start.connection_id == "30806029_341334");
    CHECK(start.lane_index == 0);

    // Exactly at the first edge boundary: the pose belongs to the next edge.
    RoutePose boundary = net.position_along(r, net.edge("30806029_341334").length_m);
    CHECK(boundary.connection_id == "341334_256962");
    CHECK(std::abs(boundary.position.latitude - 52.99) < 1e-9);

    // The route midpoint is itself the edge-2/edge-3 boundary; it too
    // resolves forward.
    RoutePose mid = net.position_along(r, r.length_m / 2.0);
    CHECK(mid.connection_id == "256962_672154");
    CHECK(std::abs(mid.position.latitude - 52.985) < 1e-9);

    RoutePose end = net.position_along(r, r.length_m);
    CHECK(end.connection_id == "672154_888421");
    CHECK(std::abs(end.position.latitude - 52.975) < 1e-9);

    CHECK_THROWS_AS(net.position_along(r, -0.001), ValidationError);
    CHECK_THROWS_AS(net.position_along(r, r.length_m + 0.001), ValidationError);
}

TEST_CASE("remaining_edges lists untraversed connections in travel order") {
    RoadNetwork net = corridor();
    const Route& r = net.route(1);
    CHECK(net.remaining_edges(r, 0.0).size() == 4);

    std::vector<std::string> after = net.remaining_edges(r, net.edge("30806029_341334").length_m);
    REQUIRE(after.size() == 3);
    CHECK(after.front() == "341334_256962");
    CHECK(after.back() == "672154_888421");

    CHECK(net.remaining_edges(r, r.length_m).empty());
}

TEST_CASE("transfer_progress carries a pose onto a sibling route") {
    RoadNetwork net = triangle();
    const Route& r1 = net.route(1);
    const Route& r3 = net.route(3);

    // Routes 1 and 3 share the first edge (101_102); 300 m in is on it.
    CHECK(net.transfer_progress(r1, 300.0, r3) == 300.0);
    CHECK(net.transfer_progress(r3, 120.0, r1) == 120.0);

    // 500 m in is on 102_103, which route 3 does not contain.
    CHECK(net.transfer_progress(r1, 500.0, r3) == -1.0);
}

TEST_CASE("network validation rejects malformed graphs") {
    const std::string node_a = "[node \"a\"]\nlat = 52.0\nlon = 0.0\n";
    const std::string node_b = "[node \"b\"]\nlat = 52.001\nlon = 0.0\n";
    const std::string edge_ab = "[edge \"a_b\"]\n";
    const std::string route1 = "[route \"1\"]\nedges = a_b\n";

    // the smallest valid network loads
    CHECK(load_road_network(node_a + node_b + edge_ab + route1).edges.size() == 1);

    // duplicate node
    CHECK_THROWS_AS(load_road_network(node_a + node_a + node_b + edge_ab + route1),
                    ValidationError);
    // node id with underscore
    CHECK_THROWS_AS(load_road_network("[node \"a_x\"]\nlat = 52.0\nlon = 0.0\n" + node_b +
                                      edge_ab + route1),
                    ValidationError);
    // edge referencing an unknown node
    CHECK_THROWS_AS(load_road_network(node_a + node_b + "[edge \"a_c\"]\n" + route1),
                    ValidationError);
    // zero-length edge (both endpoints at the same coordinates)
    CHECK_THROWS_AS(load_road_network(node_a + "[node \"b\"]\nlat = 52.0\nlon = 0.0\n" +
                                      edge_ab + route1),
                    ValidationError);
    // route referencing an undefined edge
    CHECK_THROWS_AS(load_road_network(node_a + node_b + edge_ab +
                                      "[route \"1\"]\nedges = a_b, b_c\n"),
                    ValidationError);
    // disconnected route
    const std::string node_c = "[node \"c\"]\nlat = 52.002\nlon = 0.0\n";
    const std::string node_d = "[node \"d\"]\nlat = 52.003\nlon = 0.0\n";
    CHECK_THROWS_AS(load_road_network(node_a + node_b + node_c + node_d + edge_ab +
                                      "[edge \"c_d\"]\n" +
                                      "[route \"1\"]\nedges = a_b, c_d\n"),
                    ValidationError);
    // route id below 1
    CHECK_THROWS_AS(load_road_network(node_a + node_b + edge_ab +
                                      "[route \"0\"]\nedges = a_b\n"),
                    ValidationError);
    // no routes at all
    CHECK_THROWS_AS(load_road_network(node_a + node_b + edge_ab), ValidationError);
    // non-positive speed limit
    CHECK_THROWS_AS(load_road_network(node_a + node_b +
                                      "[edge \"a_b\"]\nspeed_limit_mps = 0\n" + route1),
                    ValidationError);
    // lane count below 1
    CHECK_THROWS_AS(load_road_network(node_a + node_b + "[edge \"a_b\"]\nlanes = 0\n" + route1),
                    ValidationError);
}

TEST_CASE("an explicit shape overrides the endpoint polyline and sets lengths") {
    // A dog-leg shape roughly doubles the straight-line edge length.
    const std::string text =
        "[node \"a\"]\nlat = 52.0\nlon = 0.0\n"
        "[node \"b\"]\nlat = 52.002\nlon = 0.0\n"
        "[edge \"a_b\"]\nshape = 52.0,0.0,0 52.001,0.0015,0 52.002,0.0,0\n"
        "[route \"1\"]\nedges = a_b\n";
    RoadNetwork net = load_road_network(text);
    const Edge& e = net.edge("a_b");
    REQUIRE(e.shape.size() == 3);
    double straight = geo_distance_m(net.nodes.at("a"), net.nodes.at("b"));
    CHECK(e.length_m > 1.3 * straight);

    // Shape must parse as lat,lon,alt triples.
    CHECK_THROWS_AS(load_road_network("[node \"a\"]\nlat = 52.0\nlon = 0.0\n"
                                      "[node \"b\"]\nlat = 52.002\nlon = 0.0\n"
                                      "[edge \"a_b\"]\nshape = 52.0,0.0 52.002,0.0\n"
                                      "[route \"1\"]\nedges = a_b\n"),
                    ParseError);
}
