#include "stands/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "stands/errors.hpp"
#include "stands/scenario_config.hpp"

namespace stands {
namespace {

void append_bool(std::string& row, bool v) {
    row += v ? ",1" : ",0";
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        fields.emplace_back(line.substr(pos, comma == std::string_view::npos ? line.size() - pos
                                                                             : comma - pos));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return fields;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
    }
    out << content;
    if (!out) {
        throw std::runtime_error(fmt::format("write to '{}' failed", path.string()));
    }
}

std::string latencies_field(const RunMetrics& metrics) {
    if (metrics.detection_latency.empty()) return "none";
    std::string out;
    for (std::size_t i = 0; i < metrics.detection_latency.size(); ++i) {
        if (i > 0) out += ';';
        out += metrics.detection_latency[i] ? fmt::format("{}", *metrics.detection_latency[i])
                                            : "missed";
    }
    return out;
}

}  // namespace

std::string format_double(double v) {
    return fmt::format("{}", v);
}

std::string trace_csv_header(const SensorLayout& layout) {
    std::string header = "run_index";
    for (int i = 0; i < layout.sensor_count(); ++i) header += fmt::format(",s{}", i);
    for (int i = 0; i < layout.sensor_count(); ++i) {
        if (i != layout.reference) header += fmt::format(",r{}", i);
    }
    header += ",aggregate";
    for (int i = 0; i < layout.sensor_count(); ++i) header += fmt::format(",dd{}", i);
    header += ",spatial_alarm";
    for (int i = 0; i < layout.sensor_count(); ++i) header += fmt::format(",temporal_alarm_{}", i);
    header += ",infeasibility_alarm,fused_alarm,attacked";
    return header;
}

std::string trace_csv_row(const TraceRow& row, const SensorLayout& layout) {
    std::string out = fmt::format("{}", row.run_index);
    for (double s : row.ranges) out += fmt::format(",{}", format_double(s));
    for (const PairResidual& pair : row.report.pairs) {
        out += fmt::format(",{}", format_double(pair.value));
    }
    out += fmt::format(",{}", format_double(row.report.aggregate));
    if (row.decision.deltas.empty()) {
        for (int i = 0; i < layout.sensor_count(); ++i) out += ",nan";
    } else {
        for (double d : row.decision.deltas) out += fmt::format(",{}", format_double(d));
    }
    append_bool(out, row.decision.spatial_alarm);
    for (const bool alarm : row.decision.temporal_alarms) append_bool(out, alarm);
    append_bool(out, row.decision.infeasibility_alarm);
    append_bool(out, row.decision.fused);
    append_bool(out, row.attacked);
    return out;
}

std::string metrics_csv_header() {
    return "runs,calibration_runs,clean_runs,attacked_runs,false_positives,false_positive_rate,"
           "detection_rate,spatial_threshold,chi_squared_eta,temporal_threshold,baseline_mean,"
           "baseline_std,latencies,seed";
}

std::string metrics_csv_row(const RunMetrics& metrics, const ScenarioSpec& spec) {
    return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}", spec.runs, spec.calibration_runs,
                       metrics.clean_runs, metrics.attacked_runs, metrics.false_positives,
                       format_double(metrics.false_positive_rate),
                       format_double(metrics.detection_rate), format_double(metrics.threshold_used),
                       format_double(metrics.chi_squared_eta),
                       format_double(metrics.temporal_threshold),
                       format_double(metrics.baseline_mean), format_double(metrics.baseline_std),
                       latencies_field(metrics), spec.seed);
}

std::string decisions_csv_header(const SensorLayout& layout) {
    std::string header = "run_index,aggregate,spatial_alarm";
    for (int i = 0; i < layout.sensor_count(); ++i) header += fmt::format(",temporal_alarm_{}", i);
    header += ",infeasibility_alarm,fused_alarm";
    return header;
}

std::string decisions_csv_row(int run_index, const AlarmDecision& decision) {
    std::string out = fmt::format("{},{}", run_index, format_double(decision.aggregate));
    append_bool(out, decision.spatial_alarm);
    for (const bool alarm : decision.temporal_alarms) append_bool(out, alarm);
    append_bool(out, decision.infeasibility_alarm);
    append_bool(out, decision.fused);
    return out;
}

void emit_outputs(const std::filesystem::path& out_dir, const ScenarioResult& result) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error(
            fmt::format("cannot create output directory '{}': {}", out_dir.string(), ec.message()));
    }

    const SensorLayout& layout = result.resolved_spec.layout;
    std::string trace = trace_csv_header(layout);
    trace += '\n';
    for (const TraceRow& row : result.trace) {
        trace += trace_csv_row(row, layout);
        trace += '\n';
    }
    write_file(out_dir / "trace.csv", trace);

    std::string metrics = metrics_csv_header();
    metrics += '\n';
    metrics += metrics_csv_row(result.metrics, result.resolved_spec);
    metrics += '\n';
    write_file(out_dir / "metrics.csv", metrics);

    write_file(out_dir / "scenario.echo.cfg", echo_scenario(result.resolved_spec, &result.calibration));
}

std::vector<FrameRecord> read_frames_csv(const std::filesystem::path& path, int sensor_count) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open frames file '{}'", path.string()));
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(fmt::format("{}: empty frames file", path.string()));
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const std::vector<std::string> header = split_csv_line(line);
    int run_col = -1;
    std::vector<int> range_cols(static_cast<std::size_t>(sensor_count), -1);
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "run_index") run_col = static_cast<int>(c);
        for (int s = 0; s < sensor_count; ++s) {
            if (header[c] == fmt::format("s{}", s)) range_cols[static_cast<std::size_t>(s)] =
                static_cast<int>(c);
        }
    }
    if (run_col < 0) {
        throw ParseError(fmt::format("{}: header has no run_index column", path.string()));
    }
    for (int s = 0; s < sensor_count; ++s) {
        if (range_cols[static_cast<std::size_t>(s)] < 0) {
            throw ParseError(fmt::format("{}: header has no s{} column", path.string(), s));
        }
    }

    std::vector<FrameRecord> frames;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ParseError(fmt::format("{}:{}: expected {} fields, got {}", path.string(), line_no,
                                         header.size(), fields.size()));
        }
        FrameRecord record;
        const std::string& run_text = fields[static_cast<std::size_t>(run_col)];
        auto [ptr, ec] = std::from_chars(run_text.data(), run_text.data() + run_text.size(),
                                         record.run_index);
        if (ec != std::errc{} || ptr != run_text.data() + run_text.size()) {
            throw ParseError(fmt::format("{}:{}: run_index '{}' is not an integer", path.string(),
                                         line_no, run_text));
        }
        record.ranges.resize(static_cast<std::size_t>(sensor_count));
        for (int s = 0; s < sensor_count; ++s) {
            const std::string& text = fields[static_cast<std::size_t>(range_cols[static_cast<std::size_t>(s)])];
            double v = 0.0;
            auto [p2, ec2] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (ec2 != std::errc{} || p2 != text.data() + text.size()) {
                throw ParseError(fmt::format("{}:{}: range '{}' is not a number", path.string(),
                                             line_no, text));
            }
            record.ranges[static_cast<std::size_t>(s)] = v;
        }
        frames.push_back(std::move(record));
    }
    return frames;
}

std::string sweep_csv_header() {
    return fmt::format("parameter,value,{}", metrics_csv_header());
}

std::string sweep_csv_row(std::string_view parameter, const SweepPoint& point,
                          const ScenarioSpec& spec) {
    return fmt::format("{},{},{}", parameter, format_double(point.value),
                       metrics_csv_row(point.metrics, spec));
}

}  // namespace stands
