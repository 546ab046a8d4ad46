#include "vanetsim/v2x.hpp"

namespace vanet {

std::vector<ReceptionEvent> deliver(const TransmissionEvent& tx,
                                    const std::vector<RadioEndpoint>& endpoints,
                                    const ChannelConfig& channel, std::mt19937_64& rng) {
    std::vector<ReceptionEvent> receptions;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (const RadioEndpoint& ep : endpoints) {
        if (ep.name == tx.sender) continue;
        if (geo_distance_m(tx.sender_position, ep.position) > channel.radio_range_m) continue;
        // One draw per in-range candidate, even at loss 0, so the stream of
        // random numbers consumed is independent of the loss setting.
        double draw = coin(rng);
        if (draw < channel.loss_probability) continue;
        ReceptionEvent rx;
        rx.time = tx.time + channel.latency;
        rx.receiver = ep.name;
        rx.receiver_position = ep.position;
        rx.sender = tx.sender;
        rx.message = tx.message;
        receptions.push_back(rx);
    }
    return receptions;
}

}  // namespace vanet
