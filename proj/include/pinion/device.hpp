#pragma once

#include <map>
#include <string>
#include <string_view>

#include "pinion/model.hpp"

namespace pinion {

// Physical dimension tags for unit-checked quantity parsing.
enum class Dim {
    length,
    time,
    velocity,
    force,
    viscosity,
    density,
    frequency,
};

const char* to_string(Dim dim);

// Parses "value [unit]" into SI. A bare number is taken as SI already.
// Accepted units include m/cm/mm/um/nm/pm, N down to fN, m/s down to nm/s,
// Pa.s (also Pa*s, mPa.s, cP, P), kg/m3 and g/cm3, s down to ns, Hz/kHz.
// Throws std::invalid_argument on malformed input or a unit of the wrong
// dimension, naming the offending token.
double parse_quantity(std::string_view text, Dim expected);

// Geometry, materials, and drive of one physical device, all in SI.
struct DeviceSpec {
    double R;        // pinion outer (cog) radius [m]
    double L;        // pinion length [m]
    double r;        // axle radius [m]
    double h;        // axle bearing gap [m]
    double lambda;   // corrugation wavelength [m]
    double eta;      // lubricant viscosity [Pa s]
    double rho;      // pinion material density [kg/m^3]
    double F1;       // lateral force amplitude, rack 1 [N]
    double F2;       // lateral force amplitude, rack 2 [N]
    double V1;       // rack 1 speed [m/s]
    double V2;       // rack 2 speed [m/s]
    double H = 0.0;  // rack separation [m]; metadata, 0 when unspecified
    double a = 0.0;  // corrugation amplitude [m]; metadata, 0 when unspecified

    void validate() const;
};

// Rotational drag of the lubricated axle bearing: zeta = 2*pi*eta*L*r^3/h.
double friction_coefficient(const DeviceSpec& d);

// Moment of inertia of the solid pinion cylinder: I = (pi/2)*rho*L*R^4.
double moment_of_inertia(const DeviceSpec& d);

// Inertial relaxation time tau = rho*h*R^4/(4*eta*r^3). Cross-checked against
// I/zeta, which it equals identically; a mismatch indicates a coding error.
double inertia_time(const DeviceSpec& d);

// Free skipping speed scale V_S = F*R^2/zeta for a grip of amplitude F.
double skipping_velocity(double force, const DeviceSpec& d);

// Clock output frequency f = V_R/lambda at common rack speed V_R.
double clock_frequency(double rack_speed, double lambda);

// Reduced operating point of the device at its own drive speeds.
DrivePoint to_drive_point(const DeviceSpec& d);

// Dimensional drive inputs that realize a reduced point at rack-1 speed V1.
struct RackInputs {
    double F1;
    double F2;
    double V2;
};
RackInputs from_drive_point(const DrivePoint& point, const DeviceSpec& d, double V1);

// Derived summary for one device: drag, inertia, per-rack speed scales, and
// the clock frequency each rack would give when driven at one fifth of its
// skipping speed (the strong-coupling operating point, grip = 5).
struct EstimateReport {
    double zeta;
    double inertia;
    double tau;
    double v_s1;      // skipping speed for the rack-1 grip
    double v_s2;
    double f_at_v1;   // V1/lambda at the device's own drive speed
    double f_clock1;  // (v_s1/5)/lambda
    double f_clock2;
    DrivePoint reduced;
};

EstimateReport estimate(const DeviceSpec& d);

// Built-in device presets, also shipped verbatim as share/presets.json.
// "paper" carries the published geometry with the strong grip (H = 100 nm,
// F = 12 pN) on rack 1 and the weak grip (H = 200 nm, F = 0.3 pN) on rack 2,
// so one report covers both published operating points. "paper-H100" and
// "paper-H200" are the symmetric variants.
const std::string& builtin_presets_json();

// Parses a preset table in the config format into named device specs.
std::map<std::string, DeviceSpec> load_presets(const std::string& json_text);

}  // namespace pinion
