#include "pinion/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace pinion {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;

// Difference between the 5th and embedded 4th order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// Dense-output coefficients for the quartic interpolant.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

constexpr double step_floor = 1e-14;
constexpr double safety = 0.9;
constexpr double fac_min = 0.2, fac_max = 10.0;  // bounds on h_new/h
constexpr double beta = 0.04;                    // Lund stabilization exponent

double eval(const DrivePoint& p, double s, double u) { return rhs({u, s}, p); }

}  // namespace

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1e-3))
        throw std::invalid_argument("IntegratorConfig: rel_tol must be in (0, 1e-3)");
    if (!(abs_tol > 0.0 && abs_tol < rel_tol))
        throw std::invalid_argument("IntegratorConfig: abs_tol must be in (0, rel_tol)");
    if (!(max_step > 0.0 && std::isfinite(max_step)))
        throw std::invalid_argument("IntegratorConfig: max_step must be positive");
    if (!(sample_interval > 0.0 && std::isfinite(sample_interval)))
        throw std::invalid_argument("IntegratorConfig: sample_interval must be positive");
}

Trajectory integrate(const DrivePoint& point, double u0, double horizon,
                     const IntegratorConfig& config) {
    config.validate();
    if (!(std::isfinite(horizon) && horizon > 0.0))
        throw std::invalid_argument("integrate: horizon must be positive and finite");
    if (!std::isfinite(u0))
        throw std::invalid_argument("integrate: u0 must be finite");

    const double interval = config.sample_interval;
    // Largest k with k*interval <= horizon, with an ulp guard so an exact
    // multiple is not lost to rounding in the division.
    const auto n_full = static_cast<std::size_t>(
        std::floor(horizon / interval * (1.0 + 4.0 * 2.2e-16)));

    Trajectory traj{{}, {}, point, config};
    traj.s.reserve(n_full + 2);
    traj.u.reserve(n_full + 2);
    traj.s.push_back(0.0);
    traj.u.push_back(u0);

    double s = 0.0;
    double u = u0;
    double k1 = eval(point, s, u);
    double h = std::min(config.max_step, 1e-2);
    double err_old = 1e-4;
    std::size_t next_sample = 1;

    while (s < horizon) {
        if (h < step_floor)
            throw IntegrationError(
                "integrate: step size underflow (h < 1e-14) at s = " + std::to_string(s) +
                ", phi1 = " + std::to_string(point.phi1) +
                ", phi2 = " + std::to_string(point.phi2) +
                ", nu = " + std::to_string(point.nu));

        bool last = false;
        if (s + h >= horizon) {
            h = horizon - s;
            last = true;
        }

        const double k2 = eval(point, s + c2 * h, u + h * (a21 * k1));
        const double k3 = eval(point, s + c3 * h, u + h * (a31 * k1 + a32 * k2));
        const double k4 = eval(point, s + c4 * h, u + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const double k5 =
            eval(point, s + c5 * h, u + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const double k6 = eval(
            point, s + h, u + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const double u_new =
            u + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        const double k7 = eval(point, s + h, u_new);

        const double err_term =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double scale =
            config.abs_tol + config.rel_tol * std::max(std::fabs(u), std::fabs(u_new));
        const double err = std::fabs(err_term) / scale;

        if (err > 1.0) {
            h *= std::max(fac_min, safety * std::pow(err, -0.2));
            last = false;
            continue;
        }

        // Accepted: emit every pending uniform sample covered by this step via
        // the dense-output interpolant.
        const double s_new = last ? horizon : s + h;
        const double ydiff = u_new - u;
        const double bspl = h * k1 - ydiff;
        const double cont1 = u;
        const double cont2 = ydiff;
        const double cont3 = bspl;
        const double cont4 = -h * k7 + ydiff - bspl;
        const double cont5 =
            h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        while (next_sample <= n_full) {
            const double target = interval * static_cast<double>(next_sample);
            if (target > s_new && !last) break;
            const double theta = std::clamp((target - s) / h, 0.0, 1.0);
            const double th1 = 1.0 - theta;
            traj.s.push_back(target);
            traj.u.push_back(
                cont1 + theta * (cont2 + th1 * (cont3 + theta * (cont4 + th1 * cont5))));
            ++next_sample;
        }

        s = s_new;
        u = u_new;
        k1 = k7;  // first-same-as-last

        const double fac11 = std::pow(std::max(err, 1e-30), 0.2 - beta * 0.75);
        double fac = fac11 / std::pow(err_old, beta);
        fac = std::clamp(fac / safety, 1.0 / fac_max, 1.0 / fac_min);
        h = std::min(h / fac, config.max_step);
        err_old = std::max(err, 1e-4);
    }

    // Final partial sample if the horizon is not on the uniform grid.
    if (traj.s.back() < horizon * (1.0 - 1e-12) - 1e-300) {
        traj.s.push_back(horizon);
        traj.u.push_back(u);
    }
    return traj;
}

Trajectory integrate_symmetric_oracle(const SymmetricCase& c, double horizon,
                                      std::size_t n_samples) {
    if (!(std::isfinite(horizon) && horizon > 0.0))
        throw std::invalid_argument("integrate_symmetric_oracle: horizon must be positive");
    if (n_samples < 1)
        throw std::invalid_argument("integrate_symmetric_oracle: n_samples must be >= 1");

    IntegratorConfig cfg;
    cfg.sample_interval = horizon / static_cast<double>(n_samples);
    Trajectory traj{{}, {}, c.drive_point(), cfg};
    traj.s.reserve(n_samples + 1);
    traj.u.reserve(n_samples + 1);
    for (std::size_t k = 0; k <= n_samples; ++k) {
        const double s =
            horizon * static_cast<double>(k) / static_cast<double>(n_samples);
        traj.s.push_back(s);
        traj.u.push_back(analytic_symmetric(c, s));
    }
    return traj;
}

}  // namespace pinion
