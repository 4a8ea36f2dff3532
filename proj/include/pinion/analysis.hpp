#pragma once

#include <cstddef>

#include "pinion/integrate.hpp"
#include "pinion/model.hpp"

namespace pinion {

// The five long-time behaviors of the pinion. I1/I2: phase-locked to rack 1
// (mean reduced velocity +1) or rack 2 (mean reduced velocity -nu). II1/II2:
// skipping with net drift along rack 1 or rack 2. II0: the neutral oscillatory
// state with zero mean velocity separating the two skipping regimes.
enum class PhaseKind { I1, II1, II0, II2, I2 };

const char* to_string(PhaseKind kind);

// Label of the mirror-image operating point: rack indices swap, II0 is fixed.
PhaseKind mirror_kind(PhaseKind kind);

// Thresholds and windowing used by classification.
struct ClassifyTolerances {
    double eps_lock = 1e-3;          // |v - v_locked| below this counts as locked
    double eps_zero = 1e-3;          // |v| below this counts as zero drift
    double eps_conv = 5e-3;          // half-window velocity mismatch above this flags nonconvergence
    double discard_fraction = 0.2;   // initial transient dropped before measuring
    double horizon = 4000.0 * pi;    // default integration span for classification

    void validate() const;
};

struct MeanVelocity {
    double value;
    bool converged;  // the two halves of the retained window agree within eps_conv
};

// Mean du/ds over the retained window [discard_fraction*horizon, horizon],
// measured from the window endpoints. Requires the retained window to span at
// least 200*pi; shorter trajectories are rejected, not silently accepted.
MeanVelocity mean_velocity(const Trajectory& traj, double discard_fraction,
                           double eps_conv = 5e-3);

// Number of 2*pi slips of the pinion relative to rack 1 (w = u - s) or rack 2
// (w = u + nu*s) after the discarded transient. Counted with a full-period
// hysteresis band around a moving reference, so bounded oscillation of any
// amplitude below 2*pi never registers: the count is zero iff the relative
// coordinate stays within one 2*pi band of its post-transient start.
long count_phase_slips(const Trajectory& traj, int rack, double discard_fraction = 0.0);

struct PhaseLabel {
    PhaseKind kind;
    double mean_velocity;
    double slip_rate_1;  // rack-1 slips per unit s over the retained window
    double slip_rate_2;
    bool converged;      // false is reported, never hidden
};

// Classifies a precomputed trajectory. Locking tests run first (velocity match
// plus a zero slip count), then the zero-drift test, then the drift sign.
PhaseLabel classify(const Trajectory& traj, const ClassifyTolerances& tol = {});

// Convenience overload: integrates over tol.horizon from u0, then classifies.
PhaseLabel classify(const DrivePoint& point, double u0,
                    const ClassifyTolerances& tol = {},
                    const IntegratorConfig& config = {});

// Waveform metrics of an oscillatory (zero-mean) trajectory, for clock and
// sensor duty. All quantities are measured relative to the waveform midline
// (max + min)/2:
//   frequency      - upward midline crossings per unit s (linearly interpolated)
//   peak_amplitude - max |u - midline|
//   squareness     - fraction of samples farther from the midline than 90% of
//                    the peak amplitude; approaches 1 for a square wave
//   amplification  - gain of the half-angle tangent, tan(|u|_peak/2)/tan(|u0|/2),
//                    the factor by which the oscillation amplifies the initial
//                    offset before the cog potential saturates it. Infinite for
//                    u0 = 0; clamped just below pi for winding trajectories.
struct ClockMetrics {
    double frequency;
    double peak_amplitude;
    double squareness;
    double amplification;
};

// Throws std::domain_error on trajectories that are flat, drifting, or too
// short to contain two full swings.
ClockMetrics clock_metrics(const Trajectory& traj, double u0);

}  // namespace pinion
