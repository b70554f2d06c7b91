#pragma once

#include <optional>
#include <vector>

#include "stands/sensing.hpp"

namespace stands {

/// Spoof applied to a single sensor: the measured range is overwritten, not
/// perturbed.
struct AttackKind {
    enum class Variant { Triggering, Deflection };

    Variant variant = Variant::Triggering;
    double spoof_range = 0.0;  ///< value written over the measurement [m]

    /// Near-range spoof: the object appears much closer than it is.
    static AttackKind triggering(double spoof_range = 0.1) {
        return {Variant::Triggering, spoof_range};
    }
    /// Far-range spoof: the return is bounced away, the object vanishes.
    static AttackKind deflection(double spoof_range = 100.0) {
        return {Variant::Deflection, spoof_range};
    }
};

/// One scheduled spoof window on one sensor. Active for runs in
/// [onset_run, onset_run + duration_runs); open-ended when duration is unset.
struct AttackEntry {
    int sensor = 0;
    AttackKind kind;
    int onset_run = 0;
    std::optional<int> duration_runs;

    bool active_at(int run) const {
        if (run < onset_run) return false;
        return !duration_runs || run < onset_run + *duration_runs;
    }
};

struct AttackSchedule {
    std::vector<AttackEntry> entries;

    bool any_active_at(int run) const;

    /// Throws ValidationError for malformed entries and ScheduleConflict when
    /// two entries on the same sensor can be active in the same run.
    /// sensor_count < 0 skips the index-range check.
    void validate(int sensor_count = -1) const;
};

/// Applies every entry active at frame.run_index: the target sensor's range is
/// replaced by the spoof value and its attacked_mask bit set; every other
/// sensor passes through untouched. Throws ScheduleConflict if two active
/// entries target the same sensor.
MeasurementFrame inject(MeasurementFrame frame, const AttackSchedule& schedule);

}  // namespace stands
