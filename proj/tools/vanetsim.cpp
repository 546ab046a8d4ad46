// vanetsim — run VANET attack scenarios, build labeled datasets, run the
// rule-based detectors and render result charts from the exported tables.

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vanetsim/chart.hpp"
#include "vanetsim/detect.hpp"
#include "vanetsim/engine.hpp"
#include "vanetsim/errors.hpp"
#include "vanetsim/io.hpp"
#include "vanetsim/recorder.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;  // bad flags, bad config
constexpr int kExitData = 3;   // unreadable/corrupt dataset files

vanet::AttackMode parse_mode_flag(const std::string& text) {
    std::optional<vanet::AttackMode> mode = vanet::attack_mode_from_name(text);
    if (!mode) throw vanet::ValidationError("unknown attack mode '" + text + "'");
    return *mode;
}

std::string seconds_text(vanet::Nanos ns) {
    return vanet::format_double(vanet::nanos_to_seconds(ns));
}

// Arrival table, earliest arrival first; optionally with deltas against a
// baseline run of the same scenario.
void print_arrivals(const vanet::RunLog& log, const vanet::RunLog* baseline) {
    std::vector<vanet::ArrivalInfo> rows = log.arrivals;
    std::sort(rows.begin(), rows.end(),
              [](const vanet::ArrivalInfo& a, const vanet::ArrivalInfo& b) {
                  if (a.arrival.has_value() != b.arrival.has_value()) return a.arrival.has_value();
                  if (a.arrival != b.arrival) return a.arrival < b.arrival;
                  return a.name < b.name;
              });
    std::map<std::string, std::optional<vanet::Nanos>> base;
    if (baseline) {
        for (const vanet::ArrivalInfo& a : baseline->arrivals) base[a.name] = a.arrival;
    }

    std::cout << "  " << std::left << std::setw(12) << "vehicle" << std::right << std::setw(10)
              << "depart_s" << std::setw(12) << "arrival_s" << std::setw(11) << "travel_s";
    if (baseline) std::cout << std::setw(18) << "vs_baseline_s";
    std::cout << '\n';
    for (const vanet::ArrivalInfo& a : rows) {
        std::cout << "  " << std::left << std::setw(12) << a.name << std::right << std::setw(10)
                  << seconds_text(a.departure);
        if (a.arrival) {
            std::cout << std::setw(12) << seconds_text(*a.arrival) << std::setw(11)
                      << seconds_text(*a.arrival - a.departure);
            if (baseline) {
                auto it = base.find(a.name);
                if (it != base.end() && it->second) {
                    std::cout << std::setw(18) << seconds_text(*a.arrival - *it->second);
                } else {
                    std::cout << std::setw(18) << "-";
                }
            }
        } else {
            std::cout << std::setw(12) << "-" << std::setw(11) << "-";
            if (baseline) std::cout << std::setw(18) << "-";
        }
        std::cout << '\n';
    }
}

int cmd_run(const std::string& config_path, std::uint64_t seed,
            const std::optional<std::string>& mode_flag, const std::string& out_dir) {
    vanet::Scenario scenario;
    try {
        std::optional<vanet::AttackMode> override;
        if (mode_flag) override = parse_mode_flag(*mode_flag);
        std::string base_dir = std::filesystem::path(config_path).parent_path().string();
        scenario = vanet::load_scenario(vanet::read_file(config_path), base_dir, override);
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    vanet::RunLog log = vanet::run(scenario, seed);
    vanet::write_run_files(out_dir, log);
    std::cout << "wrote " << out_dir << " (" << scenario.name << ", mode "
              << vanet::attack_mode_name(log.attack_mode) << ", seed " << seed << ")\n";
    print_arrivals(log, nullptr);
    return kExitOk;
}

int cmd_dataset(const std::string& config_path, int iterations, std::uint64_t seed_base,
                const std::optional<std::string>& mode_flag, const std::string& out_dir) {
    std::string base_dir = std::filesystem::path(config_path).parent_path().string();
    std::string config_text;
    vanet::Scenario configured;
    try {
        config_text = vanet::read_file(config_path);
        configured = vanet::load_scenario(config_text, base_dir);
        if (iterations < 1) throw vanet::ValidationError("--iterations must be >= 1");
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    std::vector<vanet::AttackMode> modes;
    if (mode_flag) {
        try {
            vanet::AttackMode m = parse_mode_flag(*mode_flag);
            if (m != vanet::AttackMode::None && m != configured.attack_mode) {
                throw vanet::ValidationError(
                    std::string("scenario is configured for ") +
                    vanet::attack_mode_name(configured.attack_mode) + ", cannot run " +
                    vanet::attack_mode_name(m));
            }
            modes.push_back(m);
        } catch (const std::runtime_error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitUsage;
        }
    } else {
        modes.push_back(vanet::AttackMode::None);
        if (configured.attack_mode != vanet::AttackMode::None) {
            modes.push_back(configured.attack_mode);
        }
    }

    std::map<vanet::AttackMode, std::vector<vanet::RunLog>> bundles;
    for (vanet::AttackMode mode : modes) {
        vanet::Scenario scenario = configured;
        scenario.attack_mode = mode;
        std::vector<vanet::RunLog> runs = vanet::iterate(scenario, iterations, seed_base);
        std::string bundle_dir =
            (std::filesystem::path(out_dir) / vanet::attack_mode_name(mode)).string();
        vanet::consolidate(bundle_dir, runs);
        std::cout << "wrote bundle " << bundle_dir << " (" << iterations << " runs, seeds "
                  << seed_base << ".." << (seed_base + static_cast<std::uint64_t>(iterations) - 1)
                  << ")\n";
        bundles[mode] = std::move(runs);
    }

    const vanet::RunLog* baseline = nullptr;
    if (auto it = bundles.find(vanet::AttackMode::None); it != bundles.end()) {
        baseline = &it->second.front();
    }
    for (const auto& [mode, runs] : bundles) {
        std::cout << "arrivals, mode " << vanet::attack_mode_name(mode) << " (first run):\n";
        print_arrivals(runs.front(), mode == vanet::AttackMode::None ? nullptr : baseline);
    }
    return kExitOk;
}

int cmd_detect(const std::string& bundle_dir, const vanet::DetectorParams& params) {
    try {
        vanet::BundleManifest manifest = vanet::read_manifest(bundle_dir);
        std::cout << "bundle " << bundle_dir << ": scenario " << manifest.scenario << ", mode "
                  << vanet::attack_mode_name(manifest.attack_mode) << ", " << manifest.runs.size()
                  << " runs\n";

        vanet::EvalMetrics total;
        for (const std::string& run_id : manifest.runs) {
            std::string run_dir = (std::filesystem::path(bundle_dir) / run_id).string();
            vanet::LoadedRun run = vanet::read_run_files(run_dir);

            std::vector<vanet::Anomaly> anomalies =
                vanet::detect_replay(run.transmissions, run.receptions, params);
            for (vanet::Anomaly& a :
                 vanet::detect_bogus_in_rows(run.transmissions, run.vehicle_updates, params)) {
                anomalies.push_back(std::move(a));
            }

            vanet::EvalMetrics m = vanet::evaluate(anomalies, run.labels);
            vanet::write_file(
                (std::filesystem::path(run_dir) / "anomalies.csv").string(),
                vanet::export_anomalies(anomalies));
            vanet::write_file((std::filesystem::path(run_dir) / "metrics.txt").string(),
                              vanet::format_metrics(m));

            std::cout << "  " << run_id << ": anomalies " << m.anomaly_count << ", precision "
                      << (m.precision ? vanet::format_double(*m.precision) : "undefined")
                      << ", recall "
                      << (m.recall ? vanet::format_double(*m.recall) : "undefined") << '\n';

            total.anomaly_count += m.anomaly_count;
            total.duplicate_id_count += m.duplicate_id_count;
            total.stale_message_count += m.stale_message_count;
            total.uncorroborated_event_count += m.uncorroborated_event_count;
            total.true_positive_ids += m.true_positive_ids;
            total.false_positive_ids += m.false_positive_ids;
            total.false_negative_ids += m.false_negative_ids;
        }
        if (total.true_positive_ids + total.false_positive_ids > 0) {
            total.precision = static_cast<double>(total.true_positive_ids) /
                              (total.true_positive_ids + total.false_positive_ids);
        }
        if (total.true_positive_ids + total.false_negative_ids > 0) {
            total.recall = static_cast<double>(total.true_positive_ids) /
                           (total.true_positive_ids + total.false_negative_ids);
        }
        vanet::write_file((std::filesystem::path(bundle_dir) / "metrics.txt").string(),
                          vanet::format_metrics(total));
        std::cout << "aggregated: anomalies " << total.anomaly_count << ", precision "
                  << (total.precision ? vanet::format_double(*total.precision) : "undefined")
                  << ", recall "
                  << (total.recall ? vanet::format_double(*total.recall) : "undefined") << '\n';
        return kExitOk;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}

int cmd_plot(const std::string& run_dir, const std::string& chart_flag,
             const std::string& out_path) {
    std::optional<vanet::ChartKind> kind = vanet::chart_kind_from_name(chart_flag);
    if (!kind) {
        std::cerr << "error: unknown chart kind '" << chart_flag
                  << "' (expected SPEED_VS_TIME, DISTANCE_VS_TIME or ROUTE_VS_TIME)\n";
        return kExitUsage;
    }
    try {
        std::string table = vanet::read_file(
            (std::filesystem::path(run_dir) / vanet::kVehicleUpdatesFile).string());
        std::vector<vanet::VehicleUpdateRow> rows = vanet::parse_vehicle_updates(table);
        std::string title = std::string(vanet::chart_kind_name(*kind)) + " - " +
                            std::filesystem::path(run_dir).filename().string();
        vanet::write_file(out_path, vanet::chart_svg(*kind, rows, title));
        std::string tidy_path =
            std::filesystem::path(out_path).replace_extension(".csv").string();
        vanet::write_file(tidy_path, vanet::chart_tidy_csv(*kind, rows));
        std::cout << "wrote " << out_path << " and " << tidy_path << '\n';
        return kExitOk;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"VANET attack simulator and dataset generator"};
    app.require_subcommand(1);

    std::string config_path, out_dir, bundle_dir, run_dir, chart_flag, out_path;
    std::optional<std::string> mode_flag;
    std::uint64_t seed = 1;
    int iterations = 10;
    double max_delivery_ms = 100.0, witness_radius = 200.0, witness_window_s = 10.0;
    int min_witnesses = 1;

    CLI::App* run_cmd = app.add_subcommand("run", "execute one scenario run");
    run_cmd->add_option("--config", config_path, "scenario config file")->required();
    run_cmd->add_option("--seed", seed, "run seed (default 1)");
    run_cmd->add_option("--mode", mode_flag, "attack mode override (NONE or the configured mode)");
    run_cmd->add_option("--out", out_dir, "output directory for the run files")->required();

    CLI::App* dataset_cmd = app.add_subcommand("dataset", "generate multi-iteration bundles");
    dataset_cmd->add_option("--config", config_path, "scenario config file")->required();
    dataset_cmd->add_option("--iterations", iterations, "runs per bundle (default 10)");
    dataset_cmd->add_option("--seed", seed, "seed of the first run (default 1)");
    dataset_cmd->add_option("--mode", mode_flag,
                            "restrict to one mode (default: NONE plus the configured attack)");
    dataset_cmd->add_option("--out", out_dir, "output directory for the bundles")->required();

    CLI::App* detect_cmd = app.add_subcommand("detect", "run the detectors over a bundle");
    detect_cmd->add_option("bundle", bundle_dir, "bundle directory (from `dataset`)")->required();
    detect_cmd->add_option("--max-delivery-ms", max_delivery_ms,
                           "freshness bound for STALE_MESSAGE (default 100)");
    detect_cmd->add_option("--witness-radius", witness_radius,
                           "plausibility radius in metres (default 200)");
    detect_cmd->add_option("--witness-window-s", witness_window_s,
                           "plausibility window around the event (default 10)");
    detect_cmd->add_option("--min-witnesses", min_witnesses,
                           "witnesses required to corroborate (default 1)");

    CLI::App* plot_cmd = app.add_subcommand("plot", "render a chart from run CSVs");
    plot_cmd->add_option("run", run_dir, "run directory (CSV files)")->required();
    plot_cmd->add_option("--chart", chart_flag,
                         "SPEED_VS_TIME | DISTANCE_VS_TIME | ROUTE_VS_TIME")
        ->required();
    plot_cmd->add_option("--out", out_path, "output SVG path (tidy CSV lands beside it)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (*run_cmd) return cmd_run(config_path, seed, mode_flag, out_dir);
    if (*dataset_cmd) return cmd_dataset(config_path, iterations, seed, mode_flag, out_dir);
    if (*detect_cmd) {
        vanet::DetectorParams params;
        params.max_delivery_time = vanet::seconds_to_nanos(max_delivery_ms / 1000.0);
        params.witness_radius_m = witness_radius;
        params.witness_window = vanet::seconds_to_nanos(witness_window_s);
        params.min_witnesses = min_witnesses;
        return cmd_detect(bundle_dir, params);
    }
    if (*plot_cmd) return cmd_plot(run_dir, chart_flag, out_path);
    return kExitUsage;
}
