#include "vanetsim/detect.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "vanetsim/errors.hpp"
#include "vanetsim/geo.hpp"

namespace vanet {

const char* anomaly_kind_name(AnomalyKind kind) {
    switch (kind) {
        case AnomalyKind::DuplicateId: return "DUPLICATE_ID";
        case AnomalyKind::StaleMessage: return "STALE_MESSAGE";
        case AnomalyKind::UncorroboratedEvent: return "UNCORROBORATED_EVENT";
    }
    return "?";
}

std::vector<Anomaly> detect_replay(const std::vector<TransmissionRow>& transmissions,
                                   const std::vector<ReceptionRow>& receptions,
                                   const DetectorParams& params) {
    // The tables carry no generation time; the first transmission of an id
    // is its creation and dates the payload for the freshness check.
    std::map<std::int64_t, Nanos> first_tx;
    for (const TransmissionRow& tx : transmissions) {
        auto [it, inserted] = first_tx.try_emplace(tx.message_id, tx.time);
        if (!inserted && tx.time < it->second) it->second = tx.time;
    }

    std::vector<Anomaly> anomalies;
    std::map<std::pair<std::string, std::int64_t>, int> seen;
    for (const ReceptionRow& rx : receptions) {
        auto gen = first_tx.find(rx.message_id);
        if (gen == first_tx.end()) {
            throw ValidationError("reception of message id " + std::to_string(rx.message_id) +
                                  " that was never transmitted");
        }
        int count = ++seen[{rx.receiver_name, rx.message_id}];
        if (count > 1) {
            Anomaly a;
            a.kind = AnomalyKind::DuplicateId;
            a.message_id = rx.message_id;
            a.receiver_name = rx.receiver_name;
            a.time = rx.time;
            a.detail = "reception " + std::to_string(count) + " of message id " +
                       std::to_string(rx.message_id) + " at " + rx.receiver_name;
            anomalies.push_back(std::move(a));
        }
        Nanos delay = rx.time - gen->second;
        if (delay > params.max_delivery_time) {
            Anomaly a;
            a.kind = AnomalyKind::StaleMessage;
            a.message_id = rx.message_id;
            a.receiver_name = rx.receiver_name;
            a.time = rx.time;
            a.detail = "delivery delay " + std::to_string(delay) + " ns exceeds " +
                       std::to_string(params.max_delivery_time) + " ns";
            anomalies.push_back(std::move(a));
        }
    }
    std::stable_sort(anomalies.begin(), anomalies.end(), [](const Anomaly& a, const Anomaly& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.receiver_name < b.receiver_name;
    });
    return anomalies;
}

Verdict detect_bogus(const DenmRecord& denm, const std::vector<VehicleUpdateRow>& updates,
                     const std::vector<GeoPoint>& rsu_positions, const DetectorParams& params) {
    (void)rsu_positions;
    std::set<std::string> witnesses;
    for (const VehicleUpdateRow& row : updates) {
        if (row.name == denm.source_name) continue;  // the reporter cannot vouch for itself
        Nanos offset = row.time - denm.event_time;
        if (offset < -params.witness_window || offset > params.witness_window) continue;
        GeoPoint pos{row.latitude, row.longitude, row.altitude};
        if (geo_distance_m(pos, denm.event_position) > params.witness_radius_m) continue;
        if (row.speed <= params.stopped_speed_threshold_mps || row.stopped) {
            witnesses.insert(row.name);
        }
    }
    return static_cast<int>(witnesses.size()) >= params.min_witnesses ? Verdict::Corroborated
                                                                      : Verdict::Uncorroborated;
}

std::vector<Anomaly> detect_bogus_in_rows(const std::vector<TransmissionRow>& transmissions,
                                          const std::vector<VehicleUpdateRow>& updates,
                                          const DetectorParams& params) {
    std::vector<Anomaly> anomalies;
    for (const TransmissionRow& tx : transmissions) {
        if (tx.type != MessageType::Denm) continue;
        DenmRecord denm;
        denm.message_id = tx.message_id;
        denm.source_name = tx.source_name;
        denm.event_time = tx.time;
        denm.event_position = {tx.latitude, tx.longitude, tx.altitude};
        if (detect_bogus(denm, updates, {}, params) == Verdict::Uncorroborated) {
            Anomaly a;
            a.kind = AnomalyKind::UncorroboratedEvent;
            a.message_id = tx.message_id;
            a.time = tx.time;
            a.detail = "no stopped witness near the reported event"
                       " (transmitter position used as event proxy)";
            anomalies.push_back(std::move(a));
        }
    }
    return anomalies;
}

EvalMetrics evaluate(const std::vector<Anomaly>& anomalies, const GroundTruthLabels& labels) {
    EvalMetrics m;
    m.anomaly_count = static_cast<int>(anomalies.size());
    std::set<std::int64_t> flagged;
    for (const Anomaly& a : anomalies) {
        flagged.insert(a.message_id);
        switch (a.kind) {
            case AnomalyKind::DuplicateId: m.duplicate_id_count++; break;
            case AnomalyKind::StaleMessage: m.stale_message_count++; break;
            case AnomalyKind::UncorroboratedEvent: m.uncorroborated_event_count++; break;
        }
    }
    const std::set<std::int64_t>& truth = labels.malicious_message_ids;
    for (std::int64_t id : flagged) {
        if (truth.count(id)) {
            m.true_positive_ids++;
        } else {
            m.false_positive_ids++;
        }
    }
    for (std::int64_t id : truth) {
        if (!flagged.count(id)) m.false_negative_ids++;
    }
    if (!flagged.empty()) {
        m.precision = static_cast<double>(m.true_positive_ids) / static_cast<double>(flagged.size());
    }
    if (!truth.empty()) {
        m.recall = static_cast<double>(m.true_positive_ids) / static_cast<double>(truth.size());
    }
    return m;
}

std::string export_anomalies(const std::vector<Anomaly>& anomalies) {
    std::string out = "Kind,MessageId,ReceiverName,Time,Detail\n";
    for (const Anomaly& a : anomalies) {
        out += anomaly_kind_name(a.kind);
        out += ',';
        out += std::to_string(a.message_id);
        out += ',';
        out += a.receiver_name;
        out += ',';
        out += std::to_string(a.time);
        out += ',';
        out += a.detail;
        out += '\n';
    }
    return out;
}

namespace {

std::string ratio_text(const std::optional<double>& value) {
    if (!value) return "undefined";
    return format_double(*value);
}

}  // namespace

std::string format_metrics(const EvalMetrics& m) {
    std::ostringstream out;
    out << "[metrics]\n";
    out << "anomalies = " << m.anomaly_count << '\n';
    out << "duplicate_id = " << m.duplicate_id_count << '\n';
    out << "stale_message = " << m.stale_message_count << '\n';
    out << "uncorroborated_event = " << m.uncorroborated_event_count << '\n';
    out << "true_positive_ids = " << m.true_positive_ids << '\n';
    out << "false_positive_ids = " << m.false_positive_ids << '\n';
    out << "false_negative_ids = " << m.false_negative_ids << '\n';
    out << "precision = " << ratio_text(m.precision) << '\n';
    out << "recall = " << ratio_text(m.recall) << '\n';
    return out.str();
}

}  // namespace vanet
