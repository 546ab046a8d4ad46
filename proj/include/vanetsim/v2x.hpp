#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vanetsim/geo.hpp"
#include "vanetsim/traffic.hpp"

namespace vanet {

enum class MessageType { Cam, Denm };

inline const char* message_type_name(MessageType t) {
    return t == MessageType::Cam ? "Cam" : "Denm";
}

// Payload carried by both message kinds. CAMs fill the kinematic fields;
// DENMs additionally describe the reported event.
struct V2xMessage {
    std::int64_t message_id = 0;
    MessageType type = MessageType::Cam;
    std::string source;            // station name as it appears in the logs
    Nanos generation_time = 0;     // when the payload was produced
    GeoPoint position;             // claimed sender position
    double speed_mps = 0.0;
    double heading_deg = 0.0;
    bool emergency = false;        // sender claims emergency-vehicle status

    // DENM event description (unused for CAMs).
    std::string event_kind;        // e.g. "ACCIDENT"
    std::string event_edge;        // affected road edge
    GeoPoint event_position;
};

// A send as it appears in the transmission log. The transmitter position may
// differ from the payload position (a replayed message keeps the original
// payload but leaves the attacker's radio).
struct TransmissionEvent {
    Nanos time = 0;
    std::string sender;            // physical transmitter
    GeoPoint sender_position;
    V2xMessage message;
};

struct ReceptionEvent {
    Nanos time = 0;
    std::string receiver;
    GeoPoint receiver_position;
    std::string sender;            // physical transmitter
    V2xMessage message;
};

// Unit-disk channel with fixed latency and independent Bernoulli loss.
struct ChannelConfig {
    double radio_range_m = 500.0;
    Nanos latency = 1'000'000;     // 1 ms
    double loss_probability = 0.0;
};

// Global, gap-free message-id allocator shared by every station in a run.
class MessageIdCounter {
  public:
    std::int64_t next() { return next_id_++; }
    std::int64_t peek() const { return next_id_; }

  private:
    std::int64_t next_id_ = 0;
};

// A station the channel can deliver to.
struct RadioEndpoint {
    std::string name;
    GeoPoint position;
};

// Expands one transmission into the receptions it produces: every other
// endpoint within radio range hears it (minus Bernoulli losses), stamped
// tx time + latency. The sender never receives its own transmission.
std::vector<ReceptionEvent> deliver(const TransmissionEvent& tx,
                                    const std::vector<RadioEndpoint>& endpoints,
                                    const ChannelConfig& channel, std::mt19937_64& rng);

}  // namespace vanet
