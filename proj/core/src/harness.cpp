#include "stands/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "stands/errors.hpp"

namespace stands {
namespace {

constexpr double kTemporalAutoFactor = 1.5;
// Floor for the derived temporal bound; keeps the "threshold > 0" invariant
// on noise-free baselines where the largest observed step is exactly zero.
constexpr double kTemporalAutoFloor = 1e-9;

struct BaselineStats {
    std::vector<ResidualReport> reports;
    double mean = std::numeric_limits<double>::quiet_NaN();
    double stddev = std::numeric_limits<double>::quiet_NaN();
    double max_abs_delta = 0.0;
};

BaselineStats run_calibration_pass(const ScenarioSpec& spec) {
    BaselineStats stats;
    if (spec.calibration_runs <= 0) return stats;

    const std::vector<double> truth = spec.effective_truth();
    const NoiseStreams streams(spec.seed, StreamPhase::Calibration);
    stats.reports.reserve(static_cast<std::size_t>(spec.calibration_runs));

    MeasurementFrame prev;
    for (int run = 0; run < spec.calibration_runs; ++run) {
        MeasurementFrame frame = measure(truth, spec.noise, streams, run);
        stats.reports.push_back(residuals(frame, spec.layout));
        if (run > 0) {
            for (double d : temporal_change(prev, frame)) {
                stats.max_abs_delta = std::max(stats.max_abs_delta, std::abs(d));
            }
        }
        prev = std::move(frame);
    }

    double mean = 0.0;
    for (const ResidualReport& r : stats.reports) mean += r.aggregate;
    mean /= static_cast<double>(stats.reports.size());
    stats.mean = mean;
    if (stats.reports.size() >= 2) {
        double ss = 0.0;
        for (const ResidualReport& r : stats.reports) {
            const double d = r.aggregate - mean;
            ss += d * d;
        }
        stats.stddev = std::sqrt(ss / static_cast<double>(stats.reports.size() - 1));
    }
    return stats;
}

CalibrationSummary summarize(const ScenarioSpec& spec, const BaselineStats& stats) {
    CalibrationSummary summary;
    summary.runs = spec.calibration_runs;
    summary.mean = stats.mean;
    summary.stddev = stats.stddev;
    summary.max_abs_delta = stats.max_abs_delta;
    summary.chi_squared_eta = chi_squared_threshold(spec.detector);
    if (stats.reports.size() >= 2) {
        summary.calibrated_threshold = calibrate_threshold(stats.reports, spec.detector.k);
    } else {
        summary.calibrated_threshold = std::numeric_limits<double>::quiet_NaN();
    }

    if (spec.detector.threshold_mode == ThresholdMode::Calibrated) {
        if (stats.reports.size() < 2) {
            throw InsufficientBaseline(fmt::format(
                "calibrated threshold needs calibration_runs >= 2, got {}", spec.calibration_runs));
        }
        summary.spatial_threshold = summary.calibrated_threshold;
    } else {
        summary.spatial_threshold = summary.chi_squared_eta;
    }

    if (spec.detector.temporal_threshold) {
        summary.temporal_threshold = *spec.detector.temporal_threshold;
    } else {
        if (stats.reports.size() < 2) {
            throw InsufficientBaseline(fmt::format(
                "deriving the temporal threshold needs calibration_runs >= 2, got {}",
                spec.calibration_runs));
        }
        summary.temporal_threshold =
            std::max(kTemporalAutoFactor * stats.max_abs_delta, kTemporalAutoFloor);
    }
    return summary;
}

}  // namespace

std::vector<double> ScenarioSpec::effective_truth() const {
    if (range_override) return *range_override;
    return true_ranges(layout, object);
}

void ScenarioSpec::validate(bool strict_attack_magnitudes) const {
    layout.validate();
    object.validate();
    noise.validate();
    detector.validate();
    schedule.validate(layout.sensor_count());

    if (runs < 1) {
        throw ValidationError(fmt::format("sim: runs must be >= 1, got {}", runs));
    }
    if (calibration_runs < 0) {
        throw ValidationError(fmt::format("sim: calibration_runs must be >= 0, got {}", calibration_runs));
    }
    if (detector.threshold_mode == ThresholdMode::Calibrated && calibration_runs < 2) {
        throw InsufficientBaseline(fmt::format(
            "sim: calibrated threshold mode needs calibration_runs >= 2, got {}", calibration_runs));
    }
    if (!detector.temporal_threshold && calibration_runs < 2) {
        throw InsufficientBaseline(fmt::format(
            "sim: auto temporal threshold needs calibration_runs >= 2, got {}", calibration_runs));
    }
    if (range_override) {
        if (range_override->size() != static_cast<std::size_t>(layout.sensor_count())) {
            throw ValidationError(fmt::format("object: range_override has {} entries for {} sensors",
                                              range_override->size(), layout.sensor_count()));
        }
        for (double r : *range_override) {
            if (!std::isfinite(r) || r <= 0.0) {
                throw ValidationError(
                    fmt::format("object: range_override entries must be finite and > 0, got {}", r));
            }
        }
    }

    for (std::size_t i = 0; i < schedule.entries.size(); ++i) {
        const AttackEntry& e = schedule.entries[i];
        if (e.onset_run >= runs) {
            throw ValidationError(fmt::format(
                "attack entry {}: onset {} is past the end of the scenario ({} runs)", i, e.onset_run,
                runs));
        }
    }

    if (strict_attack_magnitudes) {
        const std::vector<double> truth = effective_truth();
        const double reference_truth = truth[static_cast<std::size_t>(layout.reference)];
        const double max_truth = *std::max_element(truth.begin(), truth.end());
        for (std::size_t i = 0; i < schedule.entries.size(); ++i) {
            const AttackEntry& e = schedule.entries[i];
            if (e.kind.variant == AttackKind::Variant::Triggering &&
                e.kind.spoof_range >= reference_truth) {
                throw ValidationError(fmt::format(
                    "attack entry {}: a triggering spoof must sit below the true reference distance "
                    "{}, got {}",
                    i, reference_truth, e.kind.spoof_range));
            }
            if (e.kind.variant == AttackKind::Variant::Deflection &&
                e.kind.spoof_range <= max_truth) {
                throw ValidationError(fmt::format(
                    "attack entry {}: a deflection spoof must sit beyond the true maximum range {}, "
                    "got {}",
                    i, max_truth, e.kind.spoof_range));
            }
        }
    }
}

CalibrationSummary calibrate_scenario(const ScenarioSpec& spec) {
    spec.validate(false);
    return summarize(spec, run_calibration_pass(spec));
}

ScenarioResult run_scenario(const ScenarioSpec& spec) {
    spec.validate(false);

    ScenarioResult result;
    const BaselineStats baseline = run_calibration_pass(spec);
    result.calibration = summarize(spec, baseline);

    // Pin derived defaults so the echoed spec replays identically.
    result.resolved_spec = spec;
    result.resolved_spec.detector.temporal_threshold = result.calibration.temporal_threshold;

    DetectorConfig detector_config = result.resolved_spec.detector;
    const double spatial_threshold = result.calibration.spatial_threshold;

    const std::vector<double> truth = spec.effective_truth();
    const NoiseStreams streams(spec.seed, StreamPhase::Evaluation);

    RunMetrics& metrics = result.metrics;
    metrics.threshold_used = spatial_threshold;
    metrics.chi_squared_eta = result.calibration.chi_squared_eta;
    metrics.temporal_threshold = result.calibration.temporal_threshold;
    metrics.baseline_mean = result.calibration.mean;
    metrics.baseline_std = result.calibration.stddev;
    metrics.residual_trace.reserve(static_cast<std::size_t>(spec.runs));
    result.trace.reserve(static_cast<std::size_t>(spec.runs));

    std::optional<MeasurementFrame> prev;
    for (int run = 0; run < spec.runs; ++run) {
        MeasurementFrame frame = inject(measure(truth, spec.noise, streams, run), spec.schedule);

        TraceRow row;
        row.run_index = run;
        row.ranges = frame.ranges;
        row.report = residuals(frame, spec.layout);
        row.decision = evaluate(frame, prev ? &*prev : nullptr, spec.layout, detector_config,
                                spatial_threshold);
        row.attacked = spec.schedule.any_active_at(run);

        metrics.residual_trace.push_back(row.report.aggregate);
        if (run > 0) metrics.delta_trace.push_back(row.decision.deltas);

        if (row.attacked) {
            ++metrics.attacked_runs;
            if (row.decision.fused) ++metrics.detected_attacked_runs;
        } else {
            ++metrics.clean_runs;
            if (row.decision.fused) ++metrics.false_positives;
        }

        result.trace.push_back(std::move(row));
        prev = std::move(frame);
    }

    metrics.false_positive_rate =
        metrics.clean_runs > 0
            ? static_cast<double>(metrics.false_positives) / static_cast<double>(metrics.clean_runs)
            : 0.0;
    metrics.detection_rate = metrics.attacked_runs > 0
                                 ? static_cast<double>(metrics.detected_attacked_runs) /
                                       static_cast<double>(metrics.attacked_runs)
                                 : 0.0;

    metrics.detection_latency.reserve(spec.schedule.entries.size());
    for (const AttackEntry& entry : spec.schedule.entries) {
        std::optional<int> latency;
        for (int run = entry.onset_run; run < spec.runs && entry.active_at(run); ++run) {
            if (result.trace[static_cast<std::size_t>(run)].decision.fused) {
                latency = run - entry.onset_run;
                break;
            }
        }
        metrics.detection_latency.push_back(latency);
    }
    return result;
}

SweepParameter parse_sweep_parameter(std::string_view name) {
    if (name == "spoof_range") return SweepParameter::SpoofRange;
    if (name == "temporal_threshold") return SweepParameter::TemporalThreshold;
    if (name == "k") return SweepParameter::K;
    if (name == "sigma") return SweepParameter::Sigma;
    if (name == "alpha") return SweepParameter::Alpha;
    if (name == "noise_width") return SweepParameter::NoiseWidth;
    throw UnknownParameter(fmt::format(
        "unknown sweep parameter '{}'; expected one of spoof_range, temporal_threshold, k, sigma, "
        "alpha, noise_width",
        name));
}

namespace {

ScenarioSpec apply_sweep_value(ScenarioSpec spec, SweepParameter parameter, double value) {
    switch (parameter) {
        case SweepParameter::SpoofRange:
            if (spec.schedule.entries.empty()) {
                throw ValidationError("sweep: spoof_range needs at least one attack entry");
            }
            for (AttackEntry& e : spec.schedule.entries) e.kind.spoof_range = value;
            break;
        case SweepParameter::TemporalThreshold:
            spec.detector.temporal_threshold = value;
            break;
        case SweepParameter::K:
            spec.detector.k = value;
            break;
        case SweepParameter::Sigma:
            spec.detector.sigma = value;
            break;
        case SweepParameter::Alpha:
            spec.detector.alpha = value;
            break;
        case SweepParameter::NoiseWidth:
            if (spec.noise.kind != NoiseModel::Kind::Uniform) {
                throw ValidationError("sweep: noise_width applies to uniform noise only");
            }
            spec.noise.hi = spec.noise.lo + value;
            break;
    }
    return spec;
}

}  // namespace

std::vector<SweepPoint> sweep(const ScenarioSpec& spec, SweepParameter parameter,
                              std::span<const double> values, bool vary_seeds) {
    std::vector<SweepPoint> points;
    points.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        ScenarioSpec point_spec = apply_sweep_value(spec, parameter, values[i]);
        if (vary_seeds) {
            point_spec.seed = derive_stream_seed(spec.seed, StreamPhase::Sweep, i, 0);
        }
        points.push_back({values[i], run_scenario(point_spec).metrics});
    }
    return points;
}

}  // namespace stands
