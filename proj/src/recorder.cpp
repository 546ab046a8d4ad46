#include "vanetsim/recorder.hpp"

#include <array>
#include <charconv>
#include <filesystem>
#include <sstream>

#include "vanetsim/errors.hpp"
#include "vanetsim/io.hpp"
#include "vanetsim/textconfig.hpp"

namespace vanet {

namespace {

constexpr const char* kVehicleHeader =
    "Message Type,Time,Name,Speed,Heading,Latitude,Longitude,Altitude,DistanceDriven,"
    "LongitudinalAcceleration,Slope,Stopped,RouteId,Connection.Id,LaneIndex,BlinkerRight,"
    "BlinkerLeft,BrakeLight";
constexpr const char* kTxHeader =
    "Message Type,Time,Type,MessageId,SourceName,Latitude,Longitude,Altitude,Destination.Type,"
    "IPv4Address,AdhocChannelId";
// Note the ID casing: the reception table spells it "MessageID".
constexpr const char* kRxHeader =
    "Message Type,Time,Type,MessageID,ReceiverName,ReceiveSignalStrength";

const char* bool_text(bool b) { return b ? "TRUE" : "FALSE"; }

[[noreturn]] void bad_row(const char* table, std::size_t line, const std::string& why) {
    throw ParseError(std::string(table) + " line " + std::to_string(line) + ": " + why);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

double parse_num(const std::string& field, const char* table, std::size_t line) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [p, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || p != end) bad_row(table, line, "bad number '" + field + "'");
    return value;
}

std::int64_t parse_i64(const std::string& field, const char* table, std::size_t line) {
    std::int64_t value = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [p, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || p != end) bad_row(table, line, "bad integer '" + field + "'");
    return value;
}

bool parse_bool(const std::string& field, const char* table, std::size_t line) {
    if (field == "TRUE") return true;
    if (field == "FALSE") return false;
    bad_row(table, line, "bad boolean '" + field + "'");
}

MessageType parse_type(const std::string& field, const char* table, std::size_t line) {
    if (field == "Cam") return MessageType::Cam;
    if (field == "Denm") return MessageType::Denm;
    bad_row(table, line, "bad message type '" + field + "'");
}

// Shared scaffolding: verifies the header, then hands each data line's
// fields to `consume`.
template <typename Fn>
void parse_table(const std::string& text, const char* table, const char* header,
                 std::size_t columns, Fn&& consume) {
    std::vector<std::string> lines = split_lines(text);
    if (lines.empty() || lines[0] != header) {
        throw ParseError(std::string(table) + ": missing or mismatched header");
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;  // tolerate a trailing newline
        std::vector<std::string> f = split_csv(lines[i]);
        if (f.size() != columns) {
            bad_row(table, i + 1,
                    "expected " + std::to_string(columns) + " fields, got " +
                        std::to_string(f.size()));
        }
        consume(f, i + 1);
    }
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 64> buf;
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::fixed);
    std::string s(buf.data(), static_cast<std::size_t>(p - buf.data()));
    if (s == "-0") return "0";
    return s;
}

std::vector<VehicleUpdateRow> vehicle_rows(const RunLog& log) {
    std::vector<VehicleUpdateRow> rows;
    rows.reserve(log.vehicle_updates.size());
    for (const VehicleRecord& r : log.vehicle_updates) {
        VehicleUpdateRow row;
        row.time = r.time;
        row.name = r.name;
        row.speed = r.speed_mps;
        row.heading = r.heading_deg;
        row.latitude = r.position.latitude;
        row.longitude = r.position.longitude;
        row.altitude = r.position.altitude;
        row.distance_driven = r.distance_driven_m;
        row.longitudinal_accel = r.longitudinal_accel_mps2;
        row.slope = r.slope_deg;
        row.stopped = r.stopped;
        row.route_id = r.route_id;
        row.connection_id = r.connection_id;
        row.lane_index = r.lane_index;
        row.blinker_right = r.blinker_right;
        row.blinker_left = r.blinker_left;
        row.brake_light = r.brake_light;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<TransmissionRow> transmission_rows(const RunLog& log) {
    std::vector<TransmissionRow> rows;
    rows.reserve(log.transmissions.size());
    for (const TransmissionEvent& tx : log.transmissions) {
        TransmissionRow row;
        row.time = tx.time;
        row.type = tx.message.type;
        row.message_id = tx.message.message_id;
        row.source_name = tx.message.source;  // replayed rows keep the victim's name
        row.latitude = tx.sender_position.latitude;
        row.longitude = tx.sender_position.longitude;
        row.altitude = tx.sender_position.altitude;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ReceptionRow> reception_rows(const RunLog& log) {
    std::vector<ReceptionRow> rows;
    rows.reserve(log.receptions.size());
    for (const ReceptionEvent& rx : log.receptions) {
        rows.push_back({rx.time, rx.message.type, rx.message.message_id, rx.receiver});
    }
    return rows;
}

std::string export_vehicle_updates(const std::vector<VehicleUpdateRow>& rows) {
    std::string out(kVehicleHeader);
    out += '\n';
    for (const VehicleUpdateRow& r : rows) {
        out += "VEHICLE_UPDATES,";
        out += std::to_string(r.time);
        out += ',';
        out += r.name;
        out += ',';
        out += format_double(r.speed);
        out += ',';
        out += format_double(r.heading);
        out += ',';
        out += format_double(r.latitude);
        out += ',';
        out += format_double(r.longitude);
        out += ',';
        out += format_double(r.altitude);
        out += ',';
        out += format_double(r.distance_driven);
        out += ',';
        out += format_double(r.longitudinal_accel);
        out += ',';
        out += format_double(r.slope);
        out += ',';
        out += bool_text(r.stopped);
        out += ',';
        out += std::to_string(r.route_id);
        out += ',';
        out += r.connection_id;
        out += ',';
        out += std::to_string(r.lane_index);
        out += ',';
        out += bool_text(r.blinker_right);
        out += ',';
        out += bool_text(r.blinker_left);
        out += ',';
        out += bool_text(r.brake_light);
        out += '\n';
    }
    return out;
}

std::string export_transmissions(const std::vector<TransmissionRow>& rows) {
    std::string out(kTxHeader);
    out += '\n';
    for (const TransmissionRow& r : rows) {
        out += "V2X_MESSAGE_TRANSMISSION,";
        out += std::to_string(r.time);
        out += ',';
        out += message_type_name(r.type);
        out += ',';
        out += std::to_string(r.message_id);
        out += ',';
        out += r.source_name;
        out += ',';
        out += format_double(r.latitude);
        out += ',';
        out += format_double(r.longitude);
        out += ',';
        out += format_double(r.altitude);
        out += ",AD_HOC_TOPOCAST,/255.255.255.255,";
        out += r.adhoc_channel;
        out += '\n';
    }
    return out;
}

std::string export_receptions(const std::vector<ReceptionRow>& rows) {
    std::string out(kRxHeader);
    out += '\n';
    for (const ReceptionRow& r : rows) {
        out += "V2X_MESSAGE_RECEPTION,";
        out += std::to_string(r.time);
        out += ',';
        out += message_type_name(r.type);
        out += ',';
        out += std::to_string(r.message_id);
        out += ',';
        out += r.receiver_name;
        out += ",0\n";
    }
    return out;
}

std::string export_vehicle_updates(const RunLog& log) {
    return export_vehicle_updates(vehicle_rows(log));
}
std::string export_transmissions(const RunLog& log) {
    return export_transmissions(transmission_rows(log));
}
std::string export_receptions(const RunLog& log) {
    return export_receptions(reception_rows(log));
}

std::vector<VehicleUpdateRow> parse_vehicle_updates(const std::string& text) {
    std::vector<VehicleUpdateRow> rows;
    parse_table(text, "vehicle_updates", kVehicleHeader, 18,
                [&](const std::vector<std::string>& f, std::size_t line) {
                    const char* tbl = "vehicle_updates";
                    if (f[0] != "VEHICLE_UPDATES") bad_row(tbl, line, "bad Message Type");
                    VehicleUpdateRow r;
                    r.time = parse_i64(f[1], tbl, line);
                    r.name = f[2];
                    r.speed = parse_num(f[3], tbl, line);
                    r.heading = parse_num(f[4], tbl, line);
                    r.latitude = parse_num(f[5], tbl, line);
                    r.longitude = parse_num(f[6], tbl, line);
                    r.altitude = parse_num(f[7], tbl, line);
                    r.distance_driven = parse_num(f[8], tbl, line);
                    r.longitudinal_accel = parse_num(f[9], tbl, line);
                    r.slope = parse_num(f[10], tbl, line);
                    r.stopped = parse_bool(f[11], tbl, line);
                    r.route_id = static_cast<int>(parse_i64(f[12], tbl, line));
                    r.connection_id = f[13];
                    r.lane_index = static_cast<int>(parse_i64(f[14], tbl, line));
                    r.blinker_right = parse_bool(f[15], tbl, line);
                    r.blinker_left = parse_bool(f[16], tbl, line);
                    r.brake_light = parse_bool(f[17], tbl, line);
                    rows.push_back(std::move(r));
                });
    return rows;
}

std::vector<TransmissionRow> parse_transmissions(const std::string& text) {
    std::vector<TransmissionRow> rows;
    parse_table(text, "v2x_transmissions", kTxHeader, 11,
                [&](const std::vector<std::string>& f, std::size_t line) {
                    const char* tbl = "v2x_transmissions";
                    if (f[0] != "V2X_MESSAGE_TRANSMISSION") bad_row(tbl, line, "bad Message Type");
                    if (f[8] != "AD_HOC_TOPOCAST") bad_row(tbl, line, "bad Destination.Type");
                    if (f[9] != "/255.255.255.255") bad_row(tbl, line, "bad IPv4Address");
                    if (f[10] != "CCH" && f[10] != "SCH") bad_row(tbl, line, "bad AdhocChannelId");
                    TransmissionRow r;
                    r.time = parse_i64(f[1], tbl, line);
                    r.type = parse_type(f[2], tbl, line);
                    r.message_id = parse_i64(f[3], tbl, line);
                    r.source_name = f[4];
                    r.latitude = parse_num(f[5], tbl, line);
                    r.longitude = parse_num(f[6], tbl, line);
                    r.altitude = parse_num(f[7], tbl, line);
                    r.adhoc_channel = f[10];
                    rows.push_back(std::move(r));
                });
    return rows;
}

std::vector<ReceptionRow> parse_receptions(const std::string& text) {
    std::vector<ReceptionRow> rows;
    parse_table(text, "v2x_receptions", kRxHeader, 6,
                [&](const std::vector<std::string>& f, std::size_t line) {
                    const char* tbl = "v2x_receptions";
                    if (f[0] != "V2X_MESSAGE_RECEPTION") bad_row(tbl, line, "bad Message Type");
                    if (f[5] != "0") bad_row(tbl, line, "bad ReceiveSignalStrength");
                    ReceptionRow r;
                    r.time = parse_i64(f[1], tbl, line);
                    r.type = parse_type(f[2], tbl, line);
                    r.message_id = parse_i64(f[3], tbl, line);
                    r.receiver_name = f[4];
                    rows.push_back(std::move(r));
                });
    return rows;
}

std::string export_labels(const GroundTruthLabels& labels) {
    std::ostringstream out;
    out << "[labels]\n";
    out << "attack_mode = " << attack_mode_name(labels.attack_mode) << '\n';
    out << "attacker = " << labels.attacker << '\n';
    if (labels.attack_interval) {
        out << "attack_start_ns = " << labels.attack_interval->first << '\n';
        out << "attack_end_ns = " << labels.attack_interval->second << '\n';
    }
    out << "malicious_message_ids =";
    for (std::int64_t id : labels.malicious_message_ids) out << ' ' << id;
    out << '\n';
    return out.str();
}

GroundTruthLabels parse_labels(const std::string& text) {
    ConfigFile cfg = parse_config(text);
    const ConfigSection* sec = cfg.find("labels");
    if (!sec) throw ParseError("labels sidecar: missing [labels] section");
    GroundTruthLabels labels;
    std::string mode = sec->get("attack_mode");
    std::optional<AttackMode> parsed = attack_mode_from_name(mode);
    if (!parsed) throw ParseError("labels sidecar: unknown attack_mode '" + mode + "'");
    labels.attack_mode = *parsed;
    labels.attacker = sec->get_or("attacker", "");
    if (sec->has("attack_start_ns") != sec->has("attack_end_ns")) {
        throw ParseError("labels sidecar: attack interval must have both endpoints");
    }
    if (sec->has("attack_start_ns")) {
        labels.attack_interval = {sec->get_int("attack_start_ns"), sec->get_int("attack_end_ns")};
    }
    for (const std::string& token : split_list(sec->get_or("malicious_message_ids", ""))) {
        labels.malicious_message_ids.insert(parse_i64(token, "labels", 0));
    }
    return labels;
}

void write_run_files(const std::string& dir, const RunLog& log) {
    std::filesystem::path base(dir);
    write_file((base / kVehicleUpdatesFile).string(), export_vehicle_updates(log));
    write_file((base / kTransmissionsFile).string(), export_transmissions(log));
    write_file((base / kReceptionsFile).string(), export_receptions(log));
    write_file((base / kLabelsFile).string(), export_labels(log.ground_truth));
}

namespace {

std::string run_dir_name(std::size_t index) {
    std::string digits = std::to_string(index);
    while (digits.size() < 3) digits.insert(digits.begin(), '0');
    return "run_" + digits;
}

}  // namespace

BundleManifest consolidate(const std::string& bundle_dir, const std::vector<RunLog>& runs) {
    if (runs.empty()) throw ValidationError("cannot consolidate an empty run list");
    BundleManifest manifest;
    manifest.scenario = runs.front().scenario_name;
    manifest.attack_mode = runs.front().attack_mode;
    std::filesystem::path base(bundle_dir);
    for (std::size_t i = 0; i < runs.size(); ++i) {
        std::string id = run_dir_name(i);
        write_run_files((base / id).string(), runs[i]);
        manifest.runs.push_back(id);
        manifest.seeds.push_back(runs[i].seed);
    }

    std::ostringstream out;
    out << "[manifest]\n";
    out << "scenario = " << manifest.scenario << '\n';
    out << "attack_mode = " << attack_mode_name(manifest.attack_mode) << '\n';
    out << "schema_version = " << manifest.schema_version << '\n';
    out << "iterations = " << runs.size() << '\n';
    out << "seeds =";
    for (std::uint64_t s : manifest.seeds) out << ' ' << s;
    out << '\n';
    out << "runs =";
    for (const std::string& id : manifest.runs) out << ' ' << id;
    out << '\n';
    write_file((base / kManifestFile).string(), out.str());
    return manifest;
}

BundleManifest read_manifest(const std::string& bundle_dir) {
    std::filesystem::path base(bundle_dir);
    ConfigFile cfg = parse_config(read_file((base / kManifestFile).string()));
    const ConfigSection* sec = cfg.find("manifest");
    if (!sec) throw ParseError("manifest: missing [manifest] section");
    BundleManifest manifest;
    manifest.scenario = sec->get("scenario");
    std::string mode = sec->get("attack_mode");
    std::optional<AttackMode> parsed = attack_mode_from_name(mode);
    if (!parsed) throw ParseError("manifest: unknown attack_mode '" + mode + "'");
    manifest.attack_mode = *parsed;
    manifest.schema_version = static_cast<int>(sec->get_int("schema_version"));
    if (manifest.schema_version != kSchemaVersion) {
        throw ParseError("manifest: unsupported schema_version " +
                         std::to_string(manifest.schema_version));
    }
    for (const std::string& token : split_list(sec->get_or("seeds", ""))) {
        manifest.seeds.push_back(static_cast<std::uint64_t>(parse_i64(token, "manifest", 0)));
    }
    manifest.runs = split_list(sec->get("runs"));
    if (manifest.runs.empty()) throw ParseError("manifest: empty run list");
    return manifest;
}

LoadedRun read_run_files(const std::string& dir) {
    std::filesystem::path base(dir);
    LoadedRun run;
    run.vehicle_updates = parse_vehicle_updates(read_file((base / kVehicleUpdatesFile).string()));
    run.transmissions = parse_transmissions(read_file((base / kTransmissionsFile).string()));
    run.receptions = parse_receptions(read_file((base / kReceptionsFile).string()));
    run.labels = parse_labels(read_file((base / kLabelsFile).string()));
    return run;
}

}  // namespace vanet
