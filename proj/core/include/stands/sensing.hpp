#pragma once

#include <cstdint>
#include <vector>

#include "stands/geometry.hpp"
#include "stands/rng.hpp"

namespace stands {

/// Additive measurement-error model for one range reading.
struct NoiseModel {
    enum class Kind { None, Uniform, Gaussian };

    Kind kind = Kind::None;
    double lo = 0.0;     ///< Uniform lower bound [m]
    double hi = 0.0;     ///< Uniform upper bound [m]
    double mean = 0.0;   ///< Gaussian mean [m]
    double sigma = 0.0;  ///< Gaussian standard deviation [m]

    static NoiseModel none() { return {}; }
    static NoiseModel uniform(double lo, double hi);
    static NoiseModel gaussian(double mean, double sigma);

    void validate() const;  ///< throws ValidationError (Uniform: lo <= hi; Gaussian: sigma >= 0)

    /// One error draw. Uniform consumes one stream value, Gaussian two
    /// (Box-Muller, hand-rolled so draws are bit-identical across platforms),
    /// None consumes nothing.
    double draw(SplitMix64& rng) const;
};

/// One time step of per-sensor measured ranges. attacked_mask is simulator
/// bookkeeping for scoring only; the detector never reads it.
struct MeasurementFrame {
    int run_index = 0;
    std::vector<double> ranges;        ///< measured range per sensor [m]
    std::vector<bool> attacked_mask;   ///< ground truth; defaults to all-false
};

/// Hands out the per-(run, sensor) noise streams for one phase, all derived
/// from a single master seed.
class NoiseStreams {
public:
    NoiseStreams(std::uint64_t master_seed, StreamPhase phase)
        : master_(master_seed), phase_(phase) {}

    SplitMix64 stream(int run_index, int sensor) const {
        return SplitMix64(derive_stream_seed(master_, phase_,
                                             static_cast<std::uint64_t>(run_index),
                                             static_cast<std::uint64_t>(sensor)));
    }

private:
    std::uint64_t master_;
    StreamPhase phase_;
};

/// Measures every sensor once: ranges[i] = truth[i] + draw(noise), clamped at
/// zero since a time-of-flight device cannot report a negative range. Each
/// sensor draws from its own (run, sensor) sub-stream, so frames are
/// bit-identical for a fixed (seed, config) regardless of evaluation order.
MeasurementFrame measure(const std::vector<double>& truth, const NoiseModel& noise,
                         const NoiseStreams& streams, int run_index);

/// Convenience overload deriving per-sensor truth from the scene geometry.
MeasurementFrame measure(const SensorLayout& layout, const ObjectState& object,
                         const NoiseModel& noise, const NoiseStreams& streams, int run_index);

}  // namespace stands
