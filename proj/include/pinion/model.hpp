#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

// Reduced model of a pinion sandwiched between two co-moving corrugated racks,
// coupled to each by a sinusoidal lateral force. All quantities here are
// dimensionless: coordinate u = 2*pi*x/lambda, time s = 2*pi*V1*t/lambda,
// grips phi_i = F_i*R^2/(zeta*V1), speed ratio nu = V2/V1.

namespace pinion {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Dimensionless operating point of the two-rack drive.
struct DrivePoint {
    double phi1;  // grip of rack 1, in units of zeta*V1/R^2
    double phi2;  // grip of rack 2, same units
    double nu;    // rack speed ratio V2/V1

    DrivePoint(double phi1_, double phi2_, double nu_)
        : phi1(phi1_), phi2(phi2_), nu(nu_) {
        if (!(std::isfinite(phi1) && std::isfinite(phi2) && std::isfinite(nu)))
            throw std::invalid_argument("DrivePoint: parameters must be finite");
        if (phi1 < 0.0 || phi2 < 0.0)
            throw std::invalid_argument("DrivePoint: grip amplitudes must be nonnegative");
        if (nu <= 0.0)
            throw std::invalid_argument("DrivePoint: speed ratio nu must be positive");
    }
};

// Instantaneous pinion configuration. u is the unwrapped cog coordinate:
// it is never reduced modulo 2*pi, so cumulative rotation is preserved.
struct PinionState {
    double u;
    double s;
};

// Reduced cog velocity:
//   du/ds = -phi1*sin(u - s) - phi2*sin(u + nu*s).
// Total on valid inputs; bounded by phi1 + phi2 in magnitude.
inline double rhs(const PinionState& state, const DrivePoint& point) {
    return -point.phi1 * std::sin(state.u - state.s)
           - point.phi2 * std::sin(state.u + point.nu * state.s);
}

// Equal-grip, equal-speed configuration. grip is the exponent amplitude
// g = 2*R^2*F/(zeta*V_R); the equivalent DrivePoint is (g/2, g/2, nu = 1).
// u0 = +-pi sits on the unstable cog-top position where the closed form
// diverges, so it is rejected at construction.
struct SymmetricCase {
    double grip;
    double u0;

    SymmetricCase(double grip_, double u0_) : grip(grip_), u0(u0_) {
        if (!(std::isfinite(grip) && grip >= 0.0))
            throw std::invalid_argument("SymmetricCase: grip must be finite and nonnegative");
        if (!(std::isfinite(u0) && std::fabs(u0) < pi))
            throw std::invalid_argument(
                "SymmetricCase: u0 must lie strictly inside (-pi, pi)");
    }

    DrivePoint drive_point() const { return DrivePoint(0.5 * grip, 0.5 * grip, 1.0); }
};

// Closed-form solution for the symmetric device:
//   u(s) = 2*atan( tan(u0/2) * exp(-g*sin(s)) ).
// The half-angle tangent is carried in log space so that large g*sin(s)
// cannot overflow; the branch is fixed to (-pi, pi) and the sign of u0 is
// preserved for all s.
inline double analytic_symmetric(const SymmetricCase& c, double s) {
    const double t0 = std::tan(0.5 * c.u0);
    if (t0 == 0.0) return 0.0;
    const double sign = std::signbit(t0) ? -1.0 : 1.0;
    const double a = std::log(std::fabs(t0)) - c.grip * std::sin(s);
    if (a > 40.0) {
        // atan(e^a) = pi/2 - atan(e^-a); the residual stays representable
        // where e^a itself would overflow
        return sign * (pi - 2.0 * std::atan(std::exp(-a)));
    }
    const double z = std::exp(a);
    if (z == 0.0) {
        // exp underflow: keep the sign of u0 instead of collapsing to zero
        return sign * std::numeric_limits<double>::denorm_min();
    }
    return sign * 2.0 * std::atan(z);
}

struct MirrorImage {
    DrivePoint point;
    double u0;
};

// Companion operating point under the rack exchange combined with coordinate
// reflection (V1 <-> V2, F1 <-> F2, x <-> -x). In reduced units:
//   phi1' = phi2/nu, phi2' = phi1/nu, nu' = 1/nu, u0' = -u0,
// and the image trajectory obeys u'(nu*s) = -u(s).
inline MirrorImage mirror_transform(const DrivePoint& p, double u0) {
    return MirrorImage{DrivePoint(p.phi2 / p.nu, p.phi1 / p.nu, 1.0 / p.nu), -u0};
}

}  // namespace pinion
