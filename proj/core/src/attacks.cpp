#include "stands/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "stands/errors.hpp"

namespace stands {
namespace {

// Closed window end for overlap checks; open-ended runs to +inf.
double entry_end(const AttackEntry& e) {
    if (!e.duration_runs) return std::numeric_limits<double>::infinity();
    return static_cast<double>(e.onset_run) + static_cast<double>(*e.duration_runs);
}

}  // namespace

bool AttackSchedule::any_active_at(int run) const {
    return std::any_of(entries.begin(), entries.end(),
                       [run](const AttackEntry& e) { return e.active_at(run); });
}

void AttackSchedule::validate(int sensor_count) const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const AttackEntry& e = entries[i];
        if (e.onset_run < 0) {
            throw ValidationError(
                fmt::format("attack entry {}: onset must be >= 0, got {}", i, e.onset_run));
        }
        if (e.duration_runs && *e.duration_runs <= 0) {
            throw ValidationError(
                fmt::format("attack entry {}: duration must be positive, got {}", i, *e.duration_runs));
        }
        if (!std::isfinite(e.kind.spoof_range) || e.kind.spoof_range < 0.0) {
            throw ValidationError(fmt::format(
                "attack entry {}: spoof_range must be finite and >= 0, got {}", i, e.kind.spoof_range));
        }
        if (sensor_count >= 0 && (e.sensor < 0 || e.sensor >= sensor_count)) {
            throw ValidationError(fmt::format("attack entry {}: sensor {} out of range [0, {})", i,
                                              e.sensor, sensor_count));
        }
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            const AttackEntry& a = entries[i];
            const AttackEntry& b = entries[j];
            if (a.sensor != b.sensor) continue;
            if (a.onset_run < entry_end(b) && b.onset_run < entry_end(a)) {
                throw ScheduleConflict(
                    fmt::format("attack entries {} and {} overlap on sensor {}", i, j, a.sensor));
            }
        }
    }
}

MeasurementFrame inject(MeasurementFrame frame, const AttackSchedule& schedule) {
    std::vector<bool> hit(frame.ranges.size(), false);
    for (const AttackEntry& entry : schedule.entries) {
        if (!entry.active_at(frame.run_index)) continue;
        const auto sensor = static_cast<std::size_t>(entry.sensor);
        if (sensor >= frame.ranges.size()) {
            throw ValidationError(fmt::format("inject: sensor {} out of range for a {}-sensor frame",
                                              entry.sensor, frame.ranges.size()));
        }
        if (hit[sensor]) {
            throw ScheduleConflict(fmt::format("inject: two entries target sensor {} in run {}",
                                               entry.sensor, frame.run_index));
        }
        hit[sensor] = true;
        frame.ranges[sensor] = entry.kind.spoof_range;  // overwrite, not perturb
        frame.attacked_mask[sensor] = true;
    }
    return frame;
}

}  // namespace stands
