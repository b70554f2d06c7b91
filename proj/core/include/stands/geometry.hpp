#pragma once

#include <optional>
#include <vector>

namespace stands {

/// Positions of the ranging sensors along a flat lateral baseline. The
/// reference sensor sits at offset zero and its boresight is assumed to pass
/// through the ranged object; every other sensor corroborates it.
struct SensorLayout {
    std::vector<double> offsets;  ///< signed lateral offset per sensor [m]
    int reference = 0;            ///< index of the reference sensor

    int sensor_count() const { return static_cast<int>(offsets.size()); }
    double offset(int sensor) const { return offsets.at(static_cast<std::size_t>(sensor)); }

    /// Throws ValidationError unless: >= 2 sensors, reference in range with
    /// offset exactly 0, all offsets finite and pairwise distinct.
    void validate() const;
};

/// The single static object being ranged: its perpendicular distance from the
/// reference sensor.
struct ObjectState {
    double true_distance = 0.0;  ///< meters, > 0

    void validate() const;  ///< throws ValidationError unless finite and > 0
};

/// Slant range from one sensor to the object: sqrt(d^2 + a^2) with a the
/// sensor's lateral offset. Exactly d for the reference sensor.
double true_range(const SensorLayout& layout, const ObjectState& object, int sensor);

/// Slant ranges for all sensors in layout order.
std::vector<double> true_ranges(const SensorLayout& layout, const ObjectState& object);

/// Projects a measured slant range s back onto the reference axis:
/// sqrt(s^2 - a^2), with a the baseline separation. Returns nullopt when
/// s < a: no real object position exists at that range, so the measurement is
/// geometrically infeasible and callers must treat it as spoof evidence in its
/// own right, never average it away.
std::optional<double> project_to_reference(double s, double a);

}  // namespace stands
