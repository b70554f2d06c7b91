#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "stands/harness.hpp"

namespace stands {

// CSV schemas (3-sensor layout with reference 1 shown; columns scale with the
// layout):
//
//   trace.csv     run_index,s0,s1,s2,r0,r2,aggregate,dd0,dd1,dd2,
//                 spatial_alarm,temporal_alarm_0..2,infeasibility_alarm,
//                 fused_alarm,attacked
//   metrics.csv   one summary row, see metrics_csv_header()
//   decisions.csv run_index,aggregate,spatial_alarm,temporal_alarm_0..2,
//                 infeasibility_alarm,fused_alarm
//
// s<i> is the measured range of sensor i, r<i> the signed pair residual of
// non-reference sensor i ("nan" when infeasible), dd<i> the per-sensor step
// change ("nan" on the first row of a stream). Alarm bits are 0/1. Doubles
// are serialized with shortest round-trip formatting, so reading a value back
// reproduces the exact binary double that was written.

/// Shortest-round-trip decimal form of v ("nan"/"inf" for non-finite).
std::string format_double(double v);

std::string trace_csv_header(const SensorLayout& layout);
std::string trace_csv_row(const TraceRow& row, const SensorLayout& layout);

std::string metrics_csv_header();
std::string metrics_csv_row(const RunMetrics& metrics, const ScenarioSpec& spec);

std::string decisions_csv_header(const SensorLayout& layout);
std::string decisions_csv_row(int run_index, const AlarmDecision& decision);

/// Writes trace.csv, metrics.csv and scenario.echo.cfg into out_dir (created
/// if missing). Throws std::runtime_error with the offending path on IO
/// failure.
void emit_outputs(const std::filesystem::path& out_dir, const ScenarioResult& result);

/// Externally supplied frames for replay: run index plus per-sensor ranges.
struct FrameRecord {
    int run_index = 0;
    std::vector<double> ranges;
};

/// Reads frames from a CSV that has a run_index column and s0..s<n-1> range
/// columns (extra columns, such as the rest of a trace.csv, are ignored).
/// Throws ParseError on malformed content, std::runtime_error on IO failure.
std::vector<FrameRecord> read_frames_csv(const std::filesystem::path& path, int sensor_count);

/// sweep.csv: parameter name and value in front of the metrics columns.
std::string sweep_csv_header();
std::string sweep_csv_row(std::string_view parameter, const SweepPoint& point,
                          const ScenarioSpec& spec);

}  // namespace stands
