#include "stands/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "stands/errors.hpp"

namespace stands {

NoiseModel NoiseModel::uniform(double lo, double hi) {
    NoiseModel m;
    m.kind = Kind::Uniform;
    m.lo = lo;
    m.hi = hi;
    m.validate();
    return m;
}

NoiseModel NoiseModel::gaussian(double mean, double sigma) {
    NoiseModel m;
    m.kind = Kind::Gaussian;
    m.mean = mean;
    m.sigma = sigma;
    m.validate();
    return m;
}

void NoiseModel::validate() const {
    switch (kind) {
        case Kind::None:
            break;
        case Kind::Uniform:
            if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
                throw ValidationError(
                    fmt::format("noise: uniform bounds must be finite with low <= high, got [{}, {}]",
                                lo, hi));
            }
            break;
        case Kind::Gaussian:
            if (!std::isfinite(mean) || !std::isfinite(sigma) || sigma < 0.0) {
                throw ValidationError(fmt::format(
                    "noise: gaussian needs finite mean and sigma >= 0, got mean={} sigma={}", mean,
                    sigma));
            }
            break;
    }
}

double NoiseModel::draw(SplitMix64& rng) const {
    switch (kind) {
        case Kind::None:
            return 0.0;
        case Kind::Uniform:
            return lo + (hi - lo) * rng.next_double();
        case Kind::Gaussian: {
            double u1 = rng.next_double();
            const double u2 = rng.next_double();
            if (u1 <= 0.0) u1 = 0x1.0p-53;  // Box-Muller needs u1 in (0, 1]
            const double radius = std::sqrt(-2.0 * std::log(u1));
            return mean + sigma * radius * std::cos(2.0 * std::numbers::pi * u2);
        }
    }
    return 0.0;
}

MeasurementFrame measure(const std::vector<double>& truth, const NoiseModel& noise,
                         const NoiseStreams& streams, int run_index) {
    MeasurementFrame frame;
    frame.run_index = run_index;
    frame.ranges.resize(truth.size());
    frame.attacked_mask.assign(truth.size(), false);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        SplitMix64 rng = streams.stream(run_index, static_cast<int>(i));
        // A ToF device cannot report a negative range.
        frame.ranges[i] = std::max(0.0, truth[i] + noise.draw(rng));
    }
    return frame;
}

MeasurementFrame measure(const SensorLayout& layout, const ObjectState& object,
                         const NoiseModel& noise, const NoiseStreams& streams, int run_index) {
    return measure(true_ranges(layout, object), noise, streams, run_index);
}

}  // namespace stands
