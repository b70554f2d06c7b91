#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "stands/errors.hpp"
#include "stands/harness.hpp"
#include "stands/scenario_config.hpp"
#include "stands/trace_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitRuntime = 4;

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        std::string_view item{text.data() + pos, comma - pos};
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
            if (ec != std::errc{} || ptr != item.data() + item.size()) {
                throw stands::ParseError(fmt::format("--values: '{}' is not a number", item));
            }
            values.push_back(v);
        }
        pos = comma + 1;
    }
    return values;
}

int run_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed_override) {
    stands::ScenarioSpec spec = stands::parse_scenario_file(config_path);
    if (seed_override) spec.seed = *seed_override;

    const stands::ScenarioResult result = stands::run_scenario(spec);
    stands::emit_outputs(out_dir, result);

    const stands::RunMetrics& m = result.metrics;
    fmt::print("runs={} attacked_runs={} clean_runs={}\n", spec.runs, m.attacked_runs, m.clean_runs);
    fmt::print("spatial_threshold={} chi_squared_eta={} temporal_threshold={}\n",
               stands::format_double(m.threshold_used), stands::format_double(m.chi_squared_eta),
               stands::format_double(m.temporal_threshold));
    fmt::print("false_positive_rate={} detection_rate={}\n",
               stands::format_double(m.false_positive_rate), stands::format_double(m.detection_rate));
    fmt::print("wrote {}/trace.csv, metrics.csv, scenario.echo.cfg\n", out_dir);
    return kExitOk;
}

int run_calibrate(const std::string& config_path, std::optional<int> runs_override) {
    stands::ScenarioSpec spec = stands::parse_scenario_file(config_path);
    if (runs_override) spec.calibration_runs = *runs_override;
    spec.validate(true);

    const stands::CalibrationSummary s = stands::calibrate_scenario(spec);
    fmt::print("baseline_runs          {}\n", s.runs);
    fmt::print("baseline_mean          {}   (reference {})\n", stands::format_double(s.mean),
               stands::kReferenceBaselineMean);
    fmt::print("baseline_std           {}   (reference {})\n", stands::format_double(s.stddev),
               stands::kReferenceBaselineStd);
    fmt::print("calibrated_threshold   {}   (mean + {}*std; reference {})\n",
               stands::format_double(s.calibrated_threshold),
               stands::format_double(spec.detector.k),
               stands::kReferenceBaselineMean + 2.0 * stands::kReferenceBaselineStd);
    fmt::print("chi_squared_eta        {}   (sigma={}, dof={}, alpha={})\n",
               stands::format_double(s.chi_squared_eta), stands::format_double(spec.detector.sigma),
               spec.detector.dof, stands::format_double(spec.detector.alpha));
    fmt::print("temporal_threshold     {}   (max |dd| {} over the baseline)\n",
               stands::format_double(s.temporal_threshold), stands::format_double(s.max_abs_delta));
    return kExitOk;
}

int run_detect(const std::string& config_path, const std::string& frames_path) {
    stands::ScenarioSpec spec = stands::parse_scenario_file(config_path);
    const stands::CalibrationSummary summary = stands::calibrate_scenario(spec);

    stands::DetectorConfig config = spec.detector;
    config.temporal_threshold = summary.temporal_threshold;

    const std::vector<stands::FrameRecord> frames =
        stands::read_frames_csv(frames_path, spec.layout.sensor_count());

    // Decisions only on stdout so the stream can be captured as a CSV file.
    fmt::print("{}\n", stands::decisions_csv_header(spec.layout));
    std::optional<stands::MeasurementFrame> prev;
    for (const stands::FrameRecord& record : frames) {
        stands::MeasurementFrame frame;
        frame.run_index = record.run_index;
        frame.ranges = record.ranges;
        frame.attacked_mask.assign(record.ranges.size(), false);
        if (prev && prev->run_index + 1 != frame.run_index) {
            prev.reset();  // gap in the recording: restart the temporal stage
        }
        const stands::AlarmDecision decision = stands::evaluate(
            frame, prev ? &*prev : nullptr, spec.layout, config, summary.spatial_threshold);
        fmt::print("{}\n", stands::decisions_csv_row(frame.run_index, decision));
        prev = std::move(frame);
    }
    return kExitOk;
}

int run_sweep(const std::string& config_path, const std::string& param_name,
              const std::string& values_text, const std::string& out_dir, bool vary_seeds) {
    stands::ScenarioSpec spec = stands::parse_scenario_file(config_path);
    const stands::SweepParameter parameter = stands::parse_sweep_parameter(param_name);
    const std::vector<double> values = parse_value_list(values_text);

    const std::vector<stands::SweepPoint> points =
        stands::sweep(spec, parameter, values, vary_seeds);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error(
            fmt::format("cannot create output directory '{}': {}", out_dir, ec.message()));
    }
    const std::filesystem::path csv_path = std::filesystem::path(out_dir) / "sweep.csv";
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot open '{}' for writing", csv_path.string()));
    }
    out << stands::sweep_csv_header() << '\n';
    for (const stands::SweepPoint& point : points) {
        out << stands::sweep_csv_row(param_name, point, spec) << '\n';
    }
    if (!out) {
        throw std::runtime_error(fmt::format("write to '{}' failed", csv_path.string()));
    }
    fmt::print("wrote {} ({} points)\n", csv_path.string(), points.size());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stands — spatial-temporal anomaly detection for ToF sensor arrays"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string frames_path;
    std::string param_name;
    std::string values_text;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> calib_runs;
    bool vary_seeds = false;

    CLI::App* simulate = app.add_subcommand("simulate", "run a scenario and write trace/metrics CSVs");
    simulate->add_option("--config", config_path, "scenario config file")->required();
    simulate->add_option("--out", out_dir, "output directory")->required();
    simulate->add_option("--seed", seed_override, "override the scenario seed");

    CLI::App* calibrate =
        app.add_subcommand("calibrate", "run the attack-free baseline and print thresholds");
    calibrate->add_option("--config", config_path, "scenario config file")->required();
    calibrate->add_option("--runs", calib_runs, "override calibration_runs");

    CLI::App* detect =
        app.add_subcommand("detect", "run the detector over recorded frames, decisions CSV on stdout");
    detect->add_option("--config", config_path, "scenario config file")->required();
    detect->add_option("--frames", frames_path, "CSV with run_index and s<i> range columns")->required();

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "re-run a scenario across parameter values");
    sweep_cmd->add_option("--config", config_path, "scenario config file")->required();
    sweep_cmd->add_option("--param", param_name,
                          "spoof_range|temporal_threshold|k|sigma|alpha|noise_width")
        ->required();
    sweep_cmd->add_option("--values", values_text, "comma-separated values")->required();
    sweep_cmd->add_option("--out", out_dir, "output directory")->required();
    sweep_cmd->add_flag("--vary-seeds", vary_seeds,
                        "derive a fresh seed per point instead of sharing the base seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        if (simulate->parsed()) return run_simulate(config_path, out_dir, seed_override);
        if (calibrate->parsed()) return run_calibrate(config_path, calib_runs);
        if (detect->parsed()) return run_detect(config_path, frames_path);
        if (sweep_cmd->parsed()) return run_sweep(config_path, param_name, values_text, out_dir, vary_seeds);
    } catch (const stands::ParseError& e) {
        fmt::print(stderr, "parse error: {}\n", e.what());
        return kExitParse;
    } catch (const stands::ValidationError& e) {
        fmt::print(stderr, "validation error: {}\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitRuntime;
    }
    return kExitOk;
}
