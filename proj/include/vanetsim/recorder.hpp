#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vanetsim/engine.hpp"

namespace vanet {

// Shortest fixed-notation decimal that parses back to the same double; no
// exponent, no padding ("-0" collapses to "0"). All CSV numerics use this,
// which is what makes parse -> export a byte-identical round trip.
std::string format_double(double value);

// One row of each table, typed. Exporters render these; parsers rebuild
// them. Field order mirrors the column order.
struct VehicleUpdateRow {
    Nanos time = 0;
    std::string name;
    double speed = 0.0;
    double heading = 0.0;
    double latitude = 0.0;
    double longitude = 0.0;
    double altitude = 0.0;
    double distance_driven = 0.0;
    double longitudinal_accel = 0.0;
    double slope = 0.0;
    bool stopped = false;
    int route_id = 0;
    std::string connection_id;
    int lane_index = 0;
    bool blinker_right = false;
    bool blinker_left = false;
    bool brake_light = false;

    bool operator==(const VehicleUpdateRow&) const = default;
};

struct TransmissionRow {
    Nanos time = 0;
    MessageType type = MessageType::Cam;
    std::int64_t message_id = 0;
    std::string source_name;
    double latitude = 0.0;   // transmitter position, not the payload claim
    double longitude = 0.0;
    double altitude = 0.0;
    std::string adhoc_channel = "CCH";

    bool operator==(const TransmissionRow&) const = default;
};

struct ReceptionRow {
    Nanos time = 0;
    MessageType type = MessageType::Cam;
    std::int64_t message_id = 0;
    std::string receiver_name;

    bool operator==(const ReceptionRow&) const = default;
};

std::vector<VehicleUpdateRow> vehicle_rows(const RunLog& log);
std::vector<TransmissionRow> transmission_rows(const RunLog& log);
std::vector<ReceptionRow> reception_rows(const RunLog& log);

std::string export_vehicle_updates(const std::vector<VehicleUpdateRow>& rows);
std::string export_transmissions(const std::vector<TransmissionRow>& rows);
std::string export_receptions(const std::vector<ReceptionRow>& rows);
std::string export_vehicle_updates(const RunLog& log);
std::string export_transmissions(const RunLog& log);
std::string export_receptions(const RunLog& log);

// Parsers reject wrong headers, wrong column counts and malformed values
// with ParseError naming the 1-based line.
std::vector<VehicleUpdateRow> parse_vehicle_updates(const std::string& text);
std::vector<TransmissionRow> parse_transmissions(const std::string& text);
std::vector<ReceptionRow> parse_receptions(const std::string& text);

// Ground-truth sidecar (one per run, separate from the tables).
std::string export_labels(const GroundTruthLabels& labels);
GroundTruthLabels parse_labels(const std::string& text);

// ------------------------------------------------------------------ bundle
//
// On-disk dataset layout:
//   <bundle>/run_000/vehicle_updates.csv
//   <bundle>/run_000/v2x_transmissions.csv
//   <bundle>/run_000/v2x_receptions.csv
//   <bundle>/run_000/labels.txt
//   ...
//   <bundle>/manifest.txt

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVehicleUpdatesFile = "vehicle_updates.csv";
inline constexpr const char* kTransmissionsFile = "v2x_transmissions.csv";
inline constexpr const char* kReceptionsFile = "v2x_receptions.csv";
inline constexpr const char* kLabelsFile = "labels.txt";
inline constexpr const char* kManifestFile = "manifest.txt";

struct BundleManifest {
    std::string scenario;
    AttackMode attack_mode = AttackMode::None;
    int schema_version = kSchemaVersion;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> runs;  // run directory names, run order
};

// Writes one run's three tables + labels into `dir`.
void write_run_files(const std::string& dir, const RunLog& log);

// Writes a whole bundle (per-run directories + manifest) and returns the
// manifest. Run ids are run_000, run_001, ... in input order.
BundleManifest consolidate(const std::string& bundle_dir, const std::vector<RunLog>& runs);

BundleManifest read_manifest(const std::string& bundle_dir);

struct LoadedRun {
    std::vector<VehicleUpdateRow> vehicle_updates;
    std::vector<TransmissionRow> transmissions;
    std::vector<ReceptionRow> receptions;
    GroundTruthLabels labels;
};

LoadedRun read_run_files(const std::string& dir);

}  // namespace vanet
