#include "vanetsim/roadnet.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "vanetsim/errors.hpp"
#include "vanetsim/textconfig.hpp"

namespace vanet {

namespace {

std::vector<GeoPoint> parse_shape(const std::string& value, const std::string& where) {
    // shape = lat,lon,alt lat,lon,alt ...   (whitespace between points)
    std::vector<GeoPoint> pts;
    std::vector<std::string> tokens;
    std::string tok;
    for (char c : value) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!tok.empty()) tokens.push_back(tok), tok.clear();
        } else {
            tok.push_back(c);
        }
    }
    if (!tok.empty()) tokens.push_back(tok);
    for (const auto& t : tokens) {
        auto comps = split_list(t);
        if (comps.size() != 3)
            throw ParseError("shape point '" + t + "' in " + where +
                             " must be lat,lon,alt");
        GeoPoint p;
        try {
            p.latitude = std::stod(comps[0]);
            p.longitude = std::stod(comps[1]);
            p.altitude = std::stod(comps[2]);
        } catch (const std::exception&) {
            throw ParseError("shape point '" + t + "' in " + where + " is not numeric");
        }
        pts.push_back(p);
    }
    return pts;
}

double shape_length_m(const std::vector<GeoPoint>& shape) {
    double total = 0.0;
    for (size_t i = 1; i < shape.size(); ++i)
        total += geo_distance_m(shape[i - 1], shape[i]);
    return total;
}

}  // namespace

const Edge& RoadNetwork::edge(const std::string& connection_id) const {
    auto it = edges.find(connection_id);
    if (it == edges.end())
        throw ValidationError("unknown edge '" + connection_id + "'");
    return it->second;
}

const Route& RoadNetwork::route(int route_id) const {
    auto it = routes.find(route_id);
    if (it == routes.end())
        throw ValidationError("unknown route '" + std::to_string(route_id) + "'");
    return it->second;
}

double RoadNetwork::route_length_m(int route_id) const {
    return route(route_id).length_m;
}

RoutePose RoadNetwork::position_along(const Route& rt, double distance_m) const {
    if (distance_m < 0.0 || distance_m > rt.length_m)
        throw ValidationError("distance " + std::to_string(distance_m) +
                              " outside route " + std::to_string(rt.route_id) +
                              " [0, " + std::to_string(rt.length_m) + "]");
    double remaining = distance_m;
    for (size_t ei = 0; ei < rt.edges.size(); ++ei) {
        const Edge& e = edge(rt.edges[ei]);
        const bool last_edge = (ei + 1 == rt.edges.size());
        if (remaining > e.length_m && !last_edge) {
            remaining -= e.length_m;
            continue;
        }
        if (remaining == e.length_m && !last_edge) {
            // boundary: pose belongs to the start of the next edge
            remaining = 0.0;
            continue;
        }
        // walk the shape
        double left = std::min(remaining, e.length_m);
        for (size_t si = 1; si < e.shape.size(); ++si) {
            const GeoPoint& a = e.shape[si - 1];
            const GeoPoint& b = e.shape[si];
            double seg = geo_distance_m(a, b);
            const bool last_seg = (si + 1 == e.shape.size());
            if (left > seg && !last_seg) {
                left -= seg;
                continue;
            }
            double t = seg > 0.0 ? std::min(left / seg, 1.0) : 0.0;
            RoutePose pose;
            pose.position = lerp(a, b, t);
            pose.heading_deg = bearing_deg(a, b);
            pose.connection_id = e.connection_id;
            pose.lane_index = 0;
            return pose;
        }
    }
    throw ValidationError("route " + std::to_string(rt.route_id) + " has no edges");
}

std::vector<std::string> RoadNetwork::remaining_edges(const Route& rt, double distance_m) const {
    if (distance_m < 0.0 || distance_m > rt.length_m)
        throw ValidationError("distance " + std::to_string(distance_m) +
                              " outside route " + std::to_string(rt.route_id) +
                              " [0, " + std::to_string(rt.length_m) + "]");
    std::vector<std::string> out;
    double end = 0.0;
    for (const auto& id : rt.edges) {
        end += edge(id).length_m;
        if (end > distance_m) out.push_back(id);
    }
    return out;
}

double RoadNetwork::transfer_progress(const Route& from, double progress_m, const Route& to) const {
    RoutePose pose = position_along(from, progress_m);
    // offset of the pose within its current edge
    double before = 0.0;
    for (const auto& id : from.edges) {
        if (id == pose.connection_id) break;
        before += edge(id).length_m;
    }
    double offset = progress_m - before;
    double to_before = 0.0;
    for (const auto& id : to.edges) {
        if (id == pose.connection_id)
            return to_before + std::min(offset, edge(id).length_m);
        to_before += edge(id).length_m;
    }
    return -1.0;
}

RoadNetwork load_road_network(const std::string& text) {
    ConfigFile cfg = parse_config(text);
    RoadNetwork net;

    for (const ConfigSection* sec : cfg.all_of("node")) {
        if (sec->name.empty())
            throw ParseError("node section at line " + std::to_string(sec->line) +
                             " has no id");
        if (sec->name.find('_') != std::string::npos)
            throw ValidationError("node id '" + sec->name + "' may not contain '_'");
        if (net.nodes.count(sec->name))
            throw ValidationError("duplicate node '" + sec->name + "'");
        GeoPoint p;
        p.latitude = sec->get_double("lat");
        p.longitude = sec->get_double("lon");
        p.altitude = sec->get_double_or("alt", 0.0);
        if (!valid_geo(p))
            throw ValidationError("node '" + sec->name + "' has out-of-range coordinates");
        net.nodes[sec->name] = p;
    }

    for (const ConfigSection* sec : cfg.all_of("edge")) {
        Edge e;
        e.connection_id = sec->name;
        size_t us = e.connection_id.find('_');
        if (us == std::string::npos || e.connection_id.find('_', us + 1) != std::string::npos)
            throw ValidationError("edge id '" + e.connection_id +
                                  "' must be two node ids joined by '_'");
        e.start_node = e.connection_id.substr(0, us);
        e.end_node = e.connection_id.substr(us + 1);
        if (!net.nodes.count(e.start_node))
            throw ValidationError("edge '" + e.connection_id + "' references unknown node '" +
                                  e.start_node + "'");
        if (!net.nodes.count(e.end_node))
            throw ValidationError("edge '" + e.connection_id + "' references unknown node '" +
                                  e.end_node + "'");
        if (net.edges.count(e.connection_id))
            throw ValidationError("duplicate edge '" + e.connection_id + "'");
        e.speed_limit_mps = sec->get_double_or("speed_limit_mps", 13.89);
        if (e.speed_limit_mps <= 0.0)
            throw ValidationError("edge '" + e.connection_id + "' speed limit must be positive");
        e.lane_count = static_cast<int>(sec->get_int_or("lanes", 1));
        if (e.lane_count < 1)
            throw ValidationError("edge '" + e.connection_id + "' lane count must be >= 1");
        if (sec->has("shape")) {
            e.shape = parse_shape(sec->get("shape"), "edge '" + e.connection_id + "'");
            if (e.shape.size() < 2)
                throw ValidationError("edge '" + e.connection_id + "' shape needs >= 2 points");
        } else {
            e.shape = {net.nodes.at(e.start_node), net.nodes.at(e.end_node)};
        }
        e.length_m = shape_length_m(e.shape);
        if (e.length_m <= 0.0)
            throw ValidationError("edge '" + e.connection_id + "' has zero length");
        net.edges[e.connection_id] = std::move(e);
    }

    for (const ConfigSection* sec : cfg.all_of("route")) {
        Route r;
        try {
            r.route_id = std::stoi(sec->name);
        } catch (const std::exception&) {
            throw ParseError("route id '" + sec->name + "' is not an integer");
        }
        if (r.route_id < 1)
            throw ValidationError("route id '" + sec->name + "' must be >= 1");
        if (net.routes.count(r.route_id))
            throw ValidationError("duplicate route '" + sec->name + "'");
        r.edges = split_list(sec->get("edges"));
        if (r.edges.empty())
            throw ValidationError("route '" + sec->name + "' has no edges");
        const Edge* prev = nullptr;
        for (const auto& id : r.edges) {
            auto it = net.edges.find(id);
            if (it == net.edges.end())
                throw ValidationError("route '" + sec->name + "' references undefined edge '" +
                                      id + "'");
            const Edge& e = it->second;
            if (prev != nullptr && prev->end_node != e.start_node)
                throw ValidationError("route '" + sec->name + "' is not connected at edge '" +
                                      id + "'");
            r.length_m += e.length_m;
            prev = &e;
        }
        r.origin = net.edges.at(r.edges.front()).shape.front();
        r.destination = net.edges.at(r.edges.back()).shape.back();
        net.routes[r.route_id] = std::move(r);
    }

    if (net.routes.empty())
        throw ValidationError("network defines no routes");
    return net;
}

}  // namespace vanet
