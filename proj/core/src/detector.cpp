#include "stands/detector.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "stands/errors.hpp"
#include "stands/stats.hpp"

namespace stands {

void DetectorConfig::validate() const {
    if (!std::isfinite(sigma) || sigma < 0.0) {
        throw ValidationError(fmt::format("detector: sigma must be finite and >= 0, got {}", sigma));
    }
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw ValidationError(fmt::format("detector: alpha must lie in (0, 1), got {}", alpha));
    }
    if (dof < 1) {
        throw ValidationError(fmt::format("detector: dof must be >= 1, got {}", dof));
    }
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw ValidationError(fmt::format("detector: k must be finite and > 0, got {}", k));
    }
    if (temporal_threshold && (!std::isfinite(*temporal_threshold) || *temporal_threshold <= 0.0)) {
        throw ValidationError(
            fmt::format("detector: temporal_threshold must be > 0, got {}", *temporal_threshold));
    }
}

double aggregate_residual(std::span<const PairResidual> pairs) {
    double sum = 0.0;
    for (const PairResidual& p : pairs) {
        if (p.feasible) sum += std::abs(p.value);
    }
    return sum;
}

ResidualReport residuals(const MeasurementFrame& frame, const SensorLayout& layout) {
    if (frame.ranges.size() != static_cast<std::size_t>(layout.sensor_count())) {
        throw ValidationError(fmt::format("residuals: frame has {} ranges for a {}-sensor layout",
                                          frame.ranges.size(), layout.sensor_count()));
    }
    ResidualReport report;
    const double reference_range = frame.ranges[static_cast<std::size_t>(layout.reference)];
    for (int i = 0; i < layout.sensor_count(); ++i) {
        if (i == layout.reference) continue;
        PairResidual pair;
        pair.sensor = i;
        const auto projected =
            project_to_reference(frame.ranges[static_cast<std::size_t>(i)], std::abs(layout.offset(i)));
        if (projected) {
            pair.value = reference_range - *projected;
            pair.feasible = true;
            report.signed_sum += pair.value;
        } else {
            pair.value = std::numeric_limits<double>::quiet_NaN();
            pair.feasible = false;
            report.infeasible_sensors.push_back(i);
        }
        report.pairs.push_back(pair);
    }
    report.aggregate = aggregate_residual(report.pairs);
    return report;
}

double chi_squared_threshold(const DetectorConfig& config) {
    config.validate();
    return config.sigma * std::sqrt(chi_squared_quantile(config.dof, config.alpha));
}

double calibrate_threshold(std::span<const ResidualReport> baseline, double k) {
    if (baseline.size() < 2) {
        throw InsufficientBaseline(fmt::format(
            "calibrate_threshold: need at least 2 baseline reports, got {}", baseline.size()));
    }
    double mean = 0.0;
    for (const ResidualReport& r : baseline) mean += r.aggregate;
    mean /= static_cast<double>(baseline.size());
    double ss = 0.0;
    for (const ResidualReport& r : baseline) {
        const double d = r.aggregate - mean;
        ss += d * d;
    }
    const double stddev = std::sqrt(ss / static_cast<double>(baseline.size() - 1));
    return mean + k * stddev;
}

std::vector<double> temporal_change(const MeasurementFrame& prev, const MeasurementFrame& curr) {
    if (prev.run_index + 1 != curr.run_index) {
        throw FrameGap(fmt::format("temporal_change: frames {} and {} are not consecutive",
                                   prev.run_index, curr.run_index));
    }
    if (prev.ranges.size() != curr.ranges.size()) {
        throw ValidationError(fmt::format("temporal_change: frame widths differ ({} vs {})",
                                          prev.ranges.size(), curr.ranges.size()));
    }
    std::vector<double> deltas(curr.ranges.size());
    for (std::size_t i = 0; i < curr.ranges.size(); ++i) {
        deltas[i] = curr.ranges[i] - prev.ranges[i];
    }
    return deltas;
}

AlarmDecision evaluate(const MeasurementFrame& frame, const MeasurementFrame* prev,
                       const SensorLayout& layout, const DetectorConfig& config,
                       double spatial_threshold) {
    AlarmDecision decision;
    const ResidualReport report = residuals(frame, layout);
    decision.aggregate = report.aggregate;
    decision.spatial_threshold = spatial_threshold;
    decision.spatial_alarm = report.aggregate > spatial_threshold;
    decision.infeasibility_alarm = !report.infeasible_sensors.empty();
    decision.temporal_alarms.assign(frame.ranges.size(), false);

    bool any_temporal = false;
    if (prev != nullptr) {
        if (!config.temporal_threshold) {
            throw std::logic_error("evaluate: temporal_threshold not resolved before temporal stage");
        }
        decision.deltas = temporal_change(*prev, frame);
        for (std::size_t i = 0; i < decision.deltas.size(); ++i) {
            // Two-sided: both attack onset and expiry produce signed jumps.
            if (std::abs(decision.deltas[i]) > *config.temporal_threshold) {
                decision.temporal_alarms[i] = true;
                any_temporal = true;
            }
        }
    }
    decision.fused = decision.spatial_alarm || any_temporal || decision.infeasibility_alarm;
    return decision;
}

Detector::Detector(SensorLayout layout, DetectorConfig config, double spatial_threshold)
    : layout_(std::move(layout)), config_(config), spatial_threshold_(spatial_threshold) {
    layout_.validate();
    config_.validate();
}

AlarmDecision Detector::step(const MeasurementFrame& frame) {
    AlarmDecision decision =
        evaluate(frame, prev_ ? &*prev_ : nullptr, layout_, config_, spatial_threshold_);
    prev_ = frame;
    return decision;
}

}  // namespace stands
