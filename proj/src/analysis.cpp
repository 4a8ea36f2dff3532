#include "pinion/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pinion {

const char* to_string(PhaseKind kind) {
    switch (kind) {
        case PhaseKind::I1: return "I1";
        case PhaseKind::II1: return "II1";
        case PhaseKind::II0: return "II0";
        case PhaseKind::II2: return "II2";
        case PhaseKind::I2: return "I2";
    }
    return "?";
}

PhaseKind mirror_kind(PhaseKind kind) {
    switch (kind) {
        case PhaseKind::I1: return PhaseKind::I2;
        case PhaseKind::I2: return PhaseKind::I1;
        case PhaseKind::II1: return PhaseKind::II2;
        case PhaseKind::II2: return PhaseKind::II1;
        case PhaseKind::II0: return PhaseKind::II0;
    }
    return kind;
}

void ClassifyTolerances::validate() const {
    if (!(eps_lock > 0.0 && eps_zero > 0.0 && eps_conv > 0.0))
        throw std::invalid_argument("ClassifyTolerances: thresholds must be positive");
    if (!(discard_fraction >= 0.0 && discard_fraction < 1.0))
        throw std::invalid_argument(
            "ClassifyTolerances: discard_fraction must be in [0, 1)");
    if (!(horizon > 0.0 && std::isfinite(horizon)))
        throw std::invalid_argument("ClassifyTolerances: horizon must be positive");
}

namespace {

// First sample index at or after the discarded transient.
std::size_t window_start(const Trajectory& traj, double discard_fraction) {
    const double start = discard_fraction * traj.s.back();
    const auto it = std::lower_bound(traj.s.begin(), traj.s.end(), start);
    return static_cast<std::size_t>(it - traj.s.begin());
}

}  // namespace

MeanVelocity mean_velocity(const Trajectory& traj, double discard_fraction,
                           double eps_conv) {
    if (!(discard_fraction >= 0.0 && discard_fraction < 1.0))
        throw std::invalid_argument("mean_velocity: discard_fraction must be in [0, 1)");
    if (traj.size() < 8)
        throw std::invalid_argument("mean_velocity: trajectory has too few samples");

    const std::size_t i0 = window_start(traj, discard_fraction);
    const std::size_t i1 = traj.size() - 1;
    if (i1 <= i0 + 3)
        throw std::invalid_argument("mean_velocity: retained window has too few samples");

    const double span = traj.s[i1] - traj.s[i0];
    if (span < 200.0 * pi * (1.0 - 1e-9))
        throw std::invalid_argument(
            "mean_velocity: retained window must span at least 200*pi");

    const double value = (traj.u[i1] - traj.u[i0]) / span;

    // Convergence check: the two halves of the window must agree.
    const double s_mid = 0.5 * (traj.s[i0] + traj.s[i1]);
    const auto mid_it = std::lower_bound(traj.s.begin() + static_cast<long>(i0),
                                         traj.s.begin() + static_cast<long>(i1), s_mid);
    const auto im = static_cast<std::size_t>(mid_it - traj.s.begin());
    const double va = (traj.u[im] - traj.u[i0]) / (traj.s[im] - traj.s[i0]);
    const double vb = (traj.u[i1] - traj.u[im]) / (traj.s[i1] - traj.s[im]);
    return MeanVelocity{value, std::fabs(va - vb) < eps_conv};
}

long count_phase_slips(const Trajectory& traj, int rack, double discard_fraction) {
    if (rack != 1 && rack != 2)
        throw std::invalid_argument("count_phase_slips: rack must be 1 or 2");
    if (!(discard_fraction >= 0.0 && discard_fraction < 1.0))
        throw std::invalid_argument(
            "count_phase_slips: discard_fraction must be in [0, 1)");
    if (traj.size() < 2) return 0;

    const double nu = traj.point.nu;
    const auto relative = [&](std::size_t i) {
        return rack == 1 ? traj.u[i] - traj.s[i] : traj.u[i] + nu * traj.s[i];
    };

    const std::size_t i0 = window_start(traj, discard_fraction);
    if (i0 + 1 >= traj.size()) return 0;

    double ref = relative(i0);
    long slips = 0;
    for (std::size_t i = i0 + 1; i < traj.size(); ++i) {
        const double w = relative(i);
        while (w - ref >= two_pi) {
            ++slips;
            ref += two_pi;
        }
        while (ref - w >= two_pi) {
            ++slips;
            ref -= two_pi;
        }
    }
    return slips;
}

PhaseLabel classify(const Trajectory& traj, const ClassifyTolerances& tol) {
    tol.validate();
    const MeanVelocity mv = mean_velocity(traj, tol.discard_fraction, tol.eps_conv);
    const long n1 = count_phase_slips(traj, 1, tol.discard_fraction);
    const long n2 = count_phase_slips(traj, 2, tol.discard_fraction);
    const std::size_t i0 = window_start(traj, tol.discard_fraction);
    const double window = traj.s.back() - traj.s[i0];
    const double nu = traj.point.nu;

    PhaseKind kind;
    if (std::fabs(mv.value - 1.0) < tol.eps_lock && n1 == 0)
        kind = PhaseKind::I1;
    else if (std::fabs(mv.value + nu) < tol.eps_lock && n2 == 0)
        kind = PhaseKind::I2;
    else if (std::fabs(mv.value) < tol.eps_zero)
        kind = PhaseKind::II0;
    else
        kind = mv.value > 0.0 ? PhaseKind::II1 : PhaseKind::II2;

    return PhaseLabel{kind, mv.value, static_cast<double>(n1) / window,
                      static_cast<double>(n2) / window, mv.converged};
}

PhaseLabel classify(const DrivePoint& point, double u0, const ClassifyTolerances& tol,
                    const IntegratorConfig& config) {
    tol.validate();
    return classify(integrate(point, u0, tol.horizon, config), tol);
}

ClockMetrics clock_metrics(const Trajectory& traj, double u0) {
    if (traj.size() < 8)
        throw std::domain_error("clock_metrics: trajectory has too few samples");

    const auto [min_it, max_it] = std::minmax_element(traj.u.begin(), traj.u.end());
    const double u_min = *min_it, u_max = *max_it;
    if (u_max - u_min < 1e-9)
        throw std::domain_error("clock_metrics: flat trajectory is not oscillatory");

    const double drift = (traj.u.back() - traj.u.front()) / traj.s.back();
    if (std::fabs(drift) > 1e-3)
        throw std::domain_error("clock_metrics: trajectory drifts, mean velocity not zero");

    const double mid = 0.5 * (u_max + u_min);

    // Upward midline crossings, linearly interpolated between samples.
    double first_cross = 0.0, last_cross = 0.0;
    std::size_t n_cross = 0;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        if (traj.u[i - 1] < mid && traj.u[i] >= mid) {
            const double frac = (mid - traj.u[i - 1]) / (traj.u[i] - traj.u[i - 1]);
            const double sc = traj.s[i - 1] + frac * (traj.s[i] - traj.s[i - 1]);
            if (n_cross == 0) first_cross = sc;
            last_cross = sc;
            ++n_cross;
        }
    }
    if (n_cross < 2)
        throw std::domain_error(
            "clock_metrics: fewer than two full swings in the trajectory");
    const double frequency =
        static_cast<double>(n_cross - 1) / (last_cross - first_cross);

    double peak = 0.0;
    double u_abs_peak = 0.0;
    for (const double u : traj.u) {
        peak = std::max(peak, std::fabs(u - mid));
        u_abs_peak = std::max(u_abs_peak, std::fabs(u));
    }

    std::size_t dwell = 0;
    for (const double u : traj.u)
        if (std::fabs(u - mid) > 0.9 * peak) ++dwell;
    const double squareness =
        static_cast<double>(dwell) / static_cast<double>(traj.size());

    double amplification;
    if (u0 == 0.0) {
        amplification = std::numeric_limits<double>::infinity();
    } else {
        const double capped = std::min(u_abs_peak, pi * (1.0 - 1e-12));
        amplification = std::tan(0.5 * capped) / std::tan(0.5 * std::fabs(u0));
    }

    return ClockMetrics{frequency, peak, squareness, amplification};
}

}  // namespace pinion
