#pragma once

#include <optional>
#include <span>
#include <vector>

#include "stands/geometry.hpp"
#include "stands/sensing.hpp"

namespace stands {

enum class ThresholdMode { ChiSquared, Calibrated };

struct DetectorConfig {
    double sigma = 0.0;   ///< assumed measurement-error std [m]
    double alpha = 0.95;  ///< chi-squared confidence level, in (0, 1)
    int dof = 1;          ///< chi-squared degrees of freedom
    ThresholdMode threshold_mode = ThresholdMode::Calibrated;
    double k = 2.0;       ///< std multiplier for the calibrated threshold

    /// Per-sensor per-step expected-change bound [m]. Unset means the harness
    /// derives it from the attack-free baseline (1.5 x the largest observed
    /// step) before any temporal evaluation happens.
    std::optional<double> temporal_threshold;

    void validate() const;
};

/// Residual of one corroborating sensor against the reference. value is
/// signed (reference range minus projected range) and NaN when the projection
/// is infeasible.
struct PairResidual {
    int sensor = 0;
    double value = 0.0;
    bool feasible = true;
};

/// Spatial-stage report for one frame: one pair per non-reference sensor.
struct ResidualReport {
    std::vector<PairResidual> pairs;
    double aggregate = 0.0;   ///< sum of |value| over feasible pairs
    double signed_sum = 0.0;  ///< sum of signed values, kept for inspection
    std::vector<int> infeasible_sensors;
};

struct AlarmDecision {
    bool spatial_alarm = false;
    double aggregate = 0.0;          ///< residual that was compared
    double spatial_threshold = 0.0;  ///< threshold it was compared against
    std::vector<double> deltas;      ///< per-sensor step change; empty on the first frame
    std::vector<bool> temporal_alarms;
    bool infeasibility_alarm = false;
    bool fused = false;  ///< spatial OR any temporal OR infeasibility
};

/// Sum of absolute residuals over the feasible pairs.
double aggregate_residual(std::span<const PairResidual> pairs);

/// Corroborates the reference sensor against every other sensor: for each
/// non-reference i, value = ranges[reference] - project_to_reference(ranges[i],
/// |offset(i)|). Infeasible projections are excluded from the sums and
/// recorded; they are data for the caller, not a failure.
ResidualReport residuals(const MeasurementFrame& frame, const SensorLayout& layout);

/// Spatial alarm threshold sigma * sqrt(chi2_quantile(dof, alpha)). Computed
/// for any config so calibrated runs can log it side by side.
double chi_squared_threshold(const DetectorConfig& config);

/// mean + k * std of the aggregate residual over an attack-free baseline
/// (sample std, n-1 denominator). Throws InsufficientBaseline for fewer than
/// two reports.
double calibrate_threshold(std::span<const ResidualReport> baseline, double k);

/// Signed per-sensor step change curr - prev. Throws FrameGap unless
/// prev.run_index + 1 == curr.run_index.
std::vector<double> temporal_change(const MeasurementFrame& prev, const MeasurementFrame& curr);

/// Runs both stages on one frame. prev may be null (first frame of a stream:
/// no temporal verdicts). Spatial alarm iff aggregate > spatial_threshold;
/// temporal alarm per sensor iff |delta| > config.temporal_threshold;
/// infeasibility alarm iff any projection failed. Reads measured ranges only,
/// never the attacked_mask.
AlarmDecision evaluate(const MeasurementFrame& frame, const MeasurementFrame* prev,
                       const SensorLayout& layout, const DetectorConfig& config,
                       double spatial_threshold);

/// Streaming front end: holds the previous frame of one sensor stream. One
/// instance per stream; instances are independent of each other.
class Detector {
public:
    Detector(SensorLayout layout, DetectorConfig config, double spatial_threshold);

    /// Evaluates the next frame. Run indices must advance by exactly 1
    /// between consecutive calls (FrameGap otherwise).
    AlarmDecision step(const MeasurementFrame& frame);

    /// Forgets the previous frame; the next step starts a fresh stream.
    void reset() { prev_.reset(); }

    const SensorLayout& layout() const { return layout_; }
    double spatial_threshold() const { return spatial_threshold_; }

private:
    SensorLayout layout_;
    DetectorConfig config_;
    double spatial_threshold_;
    std::optional<MeasurementFrame> prev_;
};

}  // namespace stands
