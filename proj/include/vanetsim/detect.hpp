#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vanetsim/engine.hpp"
#include "vanetsim/recorder.hpp"

namespace vanet {

enum class AnomalyKind { DuplicateId, StaleMessage, UncorroboratedEvent };

const char* anomaly_kind_name(AnomalyKind kind);

struct Anomaly {
    AnomalyKind kind = AnomalyKind::DuplicateId;
    std::int64_t message_id = 0;
    std::string receiver_name;  // empty for event-level anomalies
    Nanos time = 0;
    std::string detail;         // comma-free, one human-readable clause
};

struct DetectorParams {
    Nanos max_delivery_time = 100'000'000;          // replay freshness bound
    double witness_radius_m = 200.0;                // plausibility disc
    Nanos witness_window = 10 * kNanosPerSecond;    // +- around the event time
    int min_witnesses = 1;
    double stopped_speed_threshold_mps = 0.5;
};

// Replay heuristics over the exported tables. Each reception of an already
// seen (receiver, message id) pair is a DUPLICATE_ID; each reception whose
// delay since the id's first transmission exceeds max_delivery_time
// (strictly) is a STALE_MESSAGE. Output sorted by time, then receiver.
// Receptions of ids absent from the transmission log are rejected.
std::vector<Anomaly> detect_replay(const std::vector<TransmissionRow>& transmissions,
                                   const std::vector<ReceptionRow>& receptions,
                                   const DetectorParams& params);

enum class Verdict { Corroborated, Uncorroborated };

// An accident notification to be checked against logged traffic.
struct DenmRecord {
    std::int64_t message_id = 0;
    std::string source_name;
    Nanos event_time = 0;
    GeoPoint event_position;
};

// Witness plausibility: the report stands when enough distinct non-source
// vehicles were logged (near-)stationary inside the radius around the
// claimed position within the window. RSU positions feed the detail text
// only; the witness signal is logged ground movement.
Verdict detect_bogus(const DenmRecord& denm, const std::vector<VehicleUpdateRow>& updates,
                     const std::vector<GeoPoint>& rsu_positions, const DetectorParams& params);

// Convenience pass: judges every DENM in a transmission table, using the
// transmitter coordinates as the event-position proxy (the reception-side
// tables do not carry the payload's event fields), and returns an
// UNCORROBORATED_EVENT anomaly per failed check.
std::vector<Anomaly> detect_bogus_in_rows(const std::vector<TransmissionRow>& transmissions,
                                          const std::vector<VehicleUpdateRow>& updates,
                                          const DetectorParams& params);

struct EvalMetrics {
    int anomaly_count = 0;
    int duplicate_id_count = 0;
    int stale_message_count = 0;
    int uncorroborated_event_count = 0;
    int true_positive_ids = 0;
    int false_positive_ids = 0;
    int false_negative_ids = 0;
    std::optional<double> precision;  // empty when nothing was flagged
    std::optional<double> recall;     // empty when the run has no labels
};

// Message-id set comparison of flagged ids against the ground truth.
// Undefined ratios stay undefined; they are never reported as zero.
EvalMetrics evaluate(const std::vector<Anomaly>& anomalies, const GroundTruthLabels& labels);

// Report renderers: anomalies as CSV, metrics as sectioned text.
std::string export_anomalies(const std::vector<Anomaly>& anomalies);
std::string format_metrics(const EvalMetrics& metrics);

}  // namespace vanet
