#pragma once

#include <map>
#include <string>
#include <vector>

#include "vanetsim/geo.hpp"

namespace vanet {

// Directed road segment between two nodes. The connection id is the two
// node ids joined by "_"; node ids therefore may not contain underscores.
struct Edge {
    std::string connection_id;
    std::string start_node;
    std::string end_node;
    double length_m = 0.0;       // sum of geodesic segment lengths of shape
    int lane_count = 1;
    double speed_limit_mps = 0.0;
    std::vector<GeoPoint> shape;  // >= 2 points, start node first
};

struct Route {
    int route_id = 0;
    std::vector<std::string> edges;  // connection ids, travel order
    GeoPoint origin;
    GeoPoint destination;
    double length_m = 0.0;  // sum of member edge lengths
};

// Pose of a point partway along a route.
struct RoutePose {
    GeoPoint position;
    double heading_deg = 0.0;    // forward bearing of the containing segment
    std::string connection_id;   // containing edge
    int lane_index = 0;
};

class RoadNetwork {
public:
    std::map<std::string, GeoPoint> nodes;
    std::map<std::string, Edge> edges;
    std::map<int, Route> routes;

    const Edge& edge(const std::string& connection_id) const;
    const Route& route(int route_id) const;
    double route_length_m(int route_id) const;

    // Pose at `distance_m` along the route. Throws ValidationError when the
    // distance is outside [0, route length].
    RoutePose position_along(const Route& route, double distance_m) const;

    // Connection ids not yet fully traversed at `distance_m`, in travel
    // order, including the currently occupied edge. Empty at route end.
    std::vector<std::string> remaining_edges(const Route& route, double distance_m) const;

    // Distance along `route` of the pose at `progress_m` along `from`,
    // when both routes run over the currently occupied edge. Used to carry a
    // vehicle onto an alternative route without moving it.
    // Returns -1 when the occupied edge is not part of `route`.
    double transfer_progress(const Route& from, double progress_m, const Route& to) const;
};

// Parses the sectioned network text format (see scenarios/*.net) and
// validates graph integrity. Throws ParseError / ValidationError naming the
// offending id.
RoadNetwork load_road_network(const std::string& text);

}  // namespace vanet
