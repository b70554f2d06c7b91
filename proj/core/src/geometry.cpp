#include "stands/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "stands/errors.hpp"

namespace stands {

void SensorLayout::validate() const {
    if (sensor_count() < 2) {
        throw ValidationError("layout: need at least 2 sensors (one must corroborate the reference)");
    }
    if (reference < 0 || reference >= sensor_count()) {
        throw ValidationError(fmt::format("layout: reference index {} out of range [0, {})",
                                          reference, sensor_count()));
    }
    for (int i = 0; i < sensor_count(); ++i) {
        if (!std::isfinite(offsets[static_cast<std::size_t>(i)])) {
            throw ValidationError(fmt::format("layout: offset of sensor {} is not finite", i));
        }
    }
    if (offsets[static_cast<std::size_t>(reference)] != 0.0) {
        throw ValidationError(fmt::format("layout: reference sensor {} must sit at offset 0, got {}",
                                          reference, offsets[static_cast<std::size_t>(reference)]));
    }
    for (int i = 0; i < sensor_count(); ++i) {
        for (int j = i + 1; j < sensor_count(); ++j) {
            if (offsets[static_cast<std::size_t>(i)] == offsets[static_cast<std::size_t>(j)]) {
                throw ValidationError(fmt::format(
                    "layout: sensors {} and {} share offset {}; positions must be distinct", i, j,
                    offsets[static_cast<std::size_t>(i)]));
            }
        }
    }
}

void ObjectState::validate() const {
    if (!std::isfinite(true_distance) || true_distance <= 0.0) {
        throw ValidationError(fmt::format("object: true_distance must be finite and > 0, got {}",
                                          true_distance));
    }
}

double true_range(const SensorLayout& layout, const ObjectState& object, int sensor) {
    const double a = std::abs(layout.offset(sensor));
    const double d = object.true_distance;
    if (a == 0.0) return d;  // keep the reference range exact
    return std::sqrt(d * d + a * a);
}

std::vector<double> true_ranges(const SensorLayout& layout, const ObjectState& object) {
    std::vector<double> out(static_cast<std::size_t>(layout.sensor_count()));
    for (int i = 0; i < layout.sensor_count(); ++i) {
        out[static_cast<std::size_t>(i)] = true_range(layout, object, i);
    }
    return out;
}

std::optional<double> project_to_reference(double s, double a) {
    if (!(s >= 0.0) || !(a >= 0.0)) {
        throw std::invalid_argument(fmt::format(
            "project_to_reference: ranges must be non-negative, got s={} a={}", s, a));
    }
    if (s < a) return std::nullopt;  // no real object position: spoof evidence
    if (a == 0.0) return s;
    return std::sqrt(s * s - a * a);
}

}  // namespace stands
