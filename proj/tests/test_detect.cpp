#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "vanetsim/detect.hpp"
#include "vanetsim/errors.hpp"

using namespace vanet;

namespace {

constexpr Nanos kSec = kNanosPerSecond;

TransmissionRow tx_row(Nanos time, std::int64_t id, const std::string& source,
                       MessageType type = MessageType::Cam) {
    TransmissionRow row;
    row.time = time;
    row.type = type;
    row.message_id = id;
    row.source_name = source;
    row.latitude = 52.96;
    row.longitude = -1.179;
    return row;
}

ReceptionRow rx_row(Nanos time, std::int64_t id, const std::string& receiver,
                    MessageType type = MessageType::Cam) {
    ReceptionRow row;
    row.time = time;
    row.type = type;
    row.message_id = id;
    row.receiver_name = receiver;
    return row;
}

VehicleUpdateRow update_row(Nanos time, const std::string& name, GeoPoint pos, double speed,
                            bool stopped) {
    VehicleUpdateRow row;
    row.time = time;
    row.name = name;
    row.latitude = pos.latitude;
    row.longitude = pos.longitude;
    row.speed = speed;
    row.stopped = stopped;
    row.route_id = 1;
    return row;
}

}  // namespace

TEST_CASE("fresh single receptions raise no replay anomalies") {
    std::vector<TransmissionRow> tx{tx_row(0, 0, "rsu_0"), tx_row(1 * kSec, 1, "veh_0")};
    std::vector<ReceptionRow> rx{rx_row(1'000'000, 0, "veh_0"),
                                 rx_row(1 * kSec + 1'000'000, 1, "rsu_0")};
    CHECK(detect_replay(tx, rx, DetectorParams{}).empty());
}

TEST_CASE("every repeated (receiver, id) reception is flagged as DUPLICATE_ID") {
    std::vector<TransmissionRow> tx{tx_row(0, 0, "ev_0")};
    std::vector<ReceptionRow> rx{
        rx_row(1'000'000, 0, "veh_A"),
        rx_row(2 * kSec, 0, "veh_A"),   // second hearing: anomaly
        rx_row(3 * kSec, 0, "veh_A"),   // third hearing: anomaly again
        rx_row(1'000'000, 0, "veh_B"),  // different receiver: clean
    };
    DetectorParams params;
    params.max_delivery_time = 10 * kSec;  // keep staleness out of this test

    std::vector<Anomaly> anomalies = detect_replay(tx, rx, params);
    REQUIRE(anomalies.size() == 2);
    for (const Anomaly& a : anomalies) {
        CHECK(a.kind == AnomalyKind::DuplicateId);
        CHECK(a.message_id == 0);
        CHECK(a.receiver_name == "veh_A");
    }
    CHECK(anomalies[0].time == 2 * kSec);
    CHECK(anomalies[1].time == 3 * kSec);
}

TEST_CASE("staleness is measured against the id's first transmission, strictly") {
    DetectorParams params;  // max_delivery_time = 100 ms
    std::vector<TransmissionRow> tx{tx_row(10 * kSec, 5, "ev_0")};

    // Exactly at the bound: still fresh.
    std::vector<ReceptionRow> at{rx_row(10 * kSec + params.max_delivery_time, 5, "veh_A")};
    CHECK(detect_replay(tx, at, params).empty());

    // One nanosecond past it: stale.
    std::vector<ReceptionRow> past{rx_row(10 * kSec + params.max_delivery_time + 1, 5, "veh_A")};
    std::vector<Anomaly> anomalies = detect_replay(tx, past, params);
    REQUIRE(anomalies.size() == 1);
    CHECK(anomalies[0].kind == AnomalyKind::StaleMessage);
    CHECK(anomalies[0].message_id == 5);

    // A replayed id keeps its first transmission time as the reference, so
    // a reception right after the re-transmission is still stale; it is
    // also the receiver's second hearing, hence flagged twice.
    std::vector<TransmissionRow> twice{tx_row(10 * kSec, 5, "ev_0"),
                                       tx_row(38 * kSec, 5, "veh_D")};
    std::vector<ReceptionRow> both{rx_row(10 * kSec + 1'000'000, 5, "veh_A"),
                                   rx_row(38 * kSec + 1'000'000, 5, "veh_A")};
    std::vector<Anomaly> flagged = detect_replay(twice, both, params);
    REQUIRE(flagged.size() == 2);
    CHECK(flagged[0].kind == AnomalyKind::DuplicateId);
    CHECK(flagged[1].kind == AnomalyKind::StaleMessage);
}

TEST_CASE("receptions of never-transmitted ids are rejected") {
    std::vector<TransmissionRow> tx{tx_row(0, 0, "rsu_0")};
    std::vector<ReceptionRow> rx{rx_row(1'000'000, 3, "veh_A")};
    CHECK_THROWS_AS(detect_replay(tx, rx, DetectorParams{}), ValidationError);
}

TEST_CASE("detect_replay agrees with a brute-force oracle on random logs") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::int64_t> id_dist(0, 19);
    std::uniform_int_distribution<int> rxr_dist(0, 3);
    std::uniform_int_distribution<Nanos> delay_dist(0, 200'000'000);

    DetectorParams params;
    std::vector<TransmissionRow> tx;
    for (std::int64_t id = 0; id < 20; ++id) {
        tx.push_back(tx_row(id * kSec, id, "veh_0"));
    }
    std::vector<ReceptionRow> rx;
    for (int i = 0; i < 500; ++i) {
        std::int64_t id = id_dist(rng);
        rx.push_back(rx_row(id * kSec + delay_dist(rng), id,
                            "veh_" + std::to_string(1 + rxr_dist(rng))));
    }

    // Oracle: quadratic duplicate scan + first-tx staleness map.
    int dup = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (rx[j].message_id == rx[i].message_id &&
                rx[j].receiver_name == rx[i].receiver_name) {
                ++dup;
                break;
            }
        }
    }
    std::map<std::int64_t, Nanos> first_tx;
    for (const TransmissionRow& t : tx) {
        if (!first_tx.count(t.message_id)) first_tx[t.message_id] = t.time;
    }
    int stale = 0;
    for (const ReceptionRow& r : rx) {
        if (r.time - first_tx.at(r.message_id) > params.max_delivery_time) ++stale;
    }

    std::vector<Anomaly> anomalies = detect_replay(tx, rx, params);
    int got_dup = 0;
    int got_stale = 0;
    for (const Anomaly& a : anomalies) {
        if (a.kind == AnomalyKind::DuplicateId) ++got_dup;
        if (a.kind == AnomalyKind::StaleMessage) ++got_stale;
    }
    CHECK(got_dup == dup);
    CHECK(got_stale == stale);

    // Output ordering: non-decreasing time, receiver breaking ties.
    for (std::size_t i = 1; i < anomalies.size(); ++i) {
        bool ordered = anomalies[i - 1].time < anomalies[i].time ||
                       (anomalies[i - 1].time == anomalies[i].time &&
                        anomalies[i - 1].receiver_name <= anomalies[i].receiver_name);
        CHECK(ordered);
    }
}

TEST_CASE("witness corroboration honours every boundary") {
    DetectorParams params;  // radius 200 m, window 10 s, min 1, speed 0.5
    GeoPoint event{52.96, -1.179, 0.0};
    DenmRecord denm;
    denm.message_id = 122;
    denm.source_name = "veh_0";
    denm.event_time = 30 * kSec;
    denm.event_position = event;

    // ~167 m north of the event: inside the disc.
    GeoPoint near{52.9615, -1.179, 0.0};
    // ~222 m north: outside.
    GeoPoint far{52.962, -1.179, 0.0};

    auto verdict = [&](const std::vector<VehicleUpdateRow>& updates) {
        return detect_bogus(denm, updates, {}, params);
    };

    CHECK(verdict({update_row(30 * kSec, "veh_w", near, 0.0, true)}) == Verdict::Corroborated);

    // The source itself never counts as a witness.
    CHECK(verdict({update_row(30 * kSec, "veh_0", near, 0.0, true)}) == Verdict::Uncorroborated);

    // Distance boundary.
    CHECK(verdict({update_row(30 * kSec, "veh_w", far, 0.0, true)}) == Verdict::Uncorroborated);

    // Time window is inclusive on both sides.
    CHECK(verdict({update_row(20 * kSec, "veh_w", near, 0.0, true)}) == Verdict::Corroborated);
    CHECK(verdict({update_row(40 * kSec, "veh_w", near, 0.0, true)}) == Verdict::Corroborated);
    CHECK(verdict({update_row(40 * kSec + 1, "veh_w", near, 0.0, true)}) ==
          Verdict::Uncorroborated);
    CHECK(verdict({update_row(20 * kSec - 1, "veh_w", near, 0.0, true)}) ==
          Verdict::Uncorroborated);

    // Stationary means speed <= 0.5 or the Stopped flag.
    CHECK(verdict({update_row(30 * kSec, "veh_w", near, 0.5, false)}) == Verdict::Corroborated);
    CHECK(verdict({update_row(30 * kSec, "veh_w", near, 0.6, false)}) == Verdict::Uncorroborated);
    CHECK(verdict({update_row(30 * kSec, "veh_w", near, 0.6, true)}) == Verdict::Corroborated);
}

TEST_CASE("min_witnesses counts distinct vehicles, not rows") {
    DetectorParams params;
    params.min_witnesses = 2;
    DenmRecord denm;
    denm.source_name = "veh_0";
    denm.event_time = 30 * kSec;
    denm.event_position = GeoPoint{52.96, -1.179, 0.0};
    GeoPoint near{52.9605, -1.179, 0.0};

    // One vehicle logged many times is still one witness.
    std::vector<VehicleUpdateRow> one{update_row(29 * kSec, "veh_w", near, 0.0, true),
                                      update_row(30 * kSec, "veh_w", near, 0.0, true),
                                      update_row(31 * kSec, "veh_w", near, 0.0, true)};
    CHECK(detect_bogus(denm, one, {}, params) == Verdict::Uncorroborated);

    std::vector<VehicleUpdateRow> two = one;
    two.push_back(update_row(30 * kSec, "veh_x", near, 0.0, true));
    CHECK(detect_bogus(denm, two, {}, params) == Verdict::Corroborated);
}

TEST_CASE("detect_bogus_in_rows judges every DENM in the transmission table") {
    DetectorParams params;
    std::vector<TransmissionRow> tx{tx_row(0, 0, "rsu_0"),
                                    tx_row(30 * kSec, 122, "veh_0", MessageType::Denm)};

    // No witnesses anywhere: the DENM is flagged.
    std::vector<Anomaly> flagged = detect_bogus_in_rows(tx, {}, params);
    REQUIRE(flagged.size() == 1);
    CHECK(flagged[0].kind == AnomalyKind::UncorroboratedEvent);
    CHECK(flagged[0].message_id == 122);
    CHECK(flagged[0].receiver_name.empty());
    CHECK(flagged[0].time == 30 * kSec);

    // A stopped bystander near the transmitter position clears it.
    std::vector<VehicleUpdateRow> updates{
        update_row(32 * kSec, "veh_w", GeoPoint{52.96, -1.179, 0.0}, 0.0, true)};
    CHECK(detect_bogus_in_rows(tx, updates, params).empty());

    // A CAM-only table has nothing to judge.
    std::vector<TransmissionRow> cams{tx_row(0, 0, "rsu_0")};
    CHECK(detect_bogus_in_rows(cams, {}, params).empty());
}

TEST_CASE("evaluate compares flagged ids with the labelled truth as sets") {
    GroundTruthLabels labels;
    labels.malicious_message_ids = {2, 3, 4};

    std::vector<Anomaly> anomalies;
    for (std::int64_t id : {1, 2, 3, 3}) {  // 3 flagged twice: one id
        Anomaly a;
        a.kind = AnomalyKind::DuplicateId;
        a.message_id = id;
        anomalies.push_back(a);
    }

    EvalMetrics m = evaluate(anomalies, labels);
    CHECK(m.anomaly_count == 4);
    CHECK(m.duplicate_id_count == 4);
    CHECK(m.true_positive_ids == 2);
    CHECK(m.false_positive_ids == 1);
    CHECK(m.false_negative_ids == 1);
    REQUIRE(m.precision.has_value());
    REQUIRE(m.recall.has_value());
    CHECK(*m.precision == doctest::Approx(2.0 / 3.0));
    CHECK(*m.recall == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("undefined ratios stay undefined instead of reading as zero") {
    // Nothing flagged, nothing labelled: both ratios are undefined.
    EvalMetrics none = evaluate({}, GroundTruthLabels{});
    CHECK_FALSE(none.precision.has_value());
    CHECK_FALSE(none.recall.has_value());
    CHECK(format_metrics(none).find("precision = undefined") != std::string::npos);
    CHECK(format_metrics(none).find("recall = undefined") != std::string::npos);

    // Nothing flagged but attacks labelled: recall is a hard zero.
    GroundTruthLabels labels;
    labels.malicious_message_ids = {7};
    EvalMetrics missed = evaluate({}, labels);
    CHECK_FALSE(missed.precision.has_value());
    REQUIRE(missed.recall.has_value());
    CHECK(*missed.recall == 0.0);

    // Flags on a clean run: precision is a hard zero, recall undefined.
    Anomaly a;
    a.message_id = 9;
    EvalMetrics noisy = evaluate({a}, GroundTruthLabels{});
    REQUIRE(noisy.precision.has_value());
    CHECK(*noisy.precision == 0.0);
    CHECK_FALSE(noisy.recall.has_value());
}

TEST_CASE("anomaly export uses the fixed header and one line per anomaly") {
    Anomaly a;
    a.kind = AnomalyKind::StaleMessage;
    a.message_id = 5;
    a.receiver_name = "veh_A";
    a.time = 38 * kSec;
    a.detail = "first transmitted 28 s earlier";

    std::string csv = export_anomalies({a});
    CHECK(csv.find("Kind,MessageId,ReceiverName,Time,Detail\n") == 0);
    CHECK(csv.find("STALE_MESSAGE,5,veh_A,38000000000,first transmitted 28 s earlier\n") !=
          std::string::npos);

    CHECK(std::string(anomaly_kind_name(AnomalyKind::DuplicateId)) == "DUPLICATE_ID");
    CHECK(std::string(anomaly_kind_name(AnomalyKind::UncorroboratedEvent)) ==
          "UNCORROBORATED_EVENT");
}
