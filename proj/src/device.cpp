#include "pinion/device.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "pinion/device_json.hpp"
#include "pinion/strict_json.hpp"

namespace pinion {

const char* to_string(Dim dim) {
    switch (dim) {
        case Dim::length: return "length";
        case Dim::time: return "time";
        case Dim::velocity: return "velocity";
        case Dim::force: return "force";
        case Dim::viscosity: return "viscosity";
        case Dim::density: return "density";
        case Dim::frequency: return "frequency";
    }
    return "?";
}

namespace {

struct Unit {
    const char* name;
    Dim dim;
    double factor;
};

constexpr std::array<Unit, 44> unit_table{{
    {"m", Dim::length, 1.0},
    {"cm", Dim::length, 1e-2},
    {"mm", Dim::length, 1e-3},
    {"um", Dim::length, 1e-6},
    {"µm", Dim::length, 1e-6},
    {"μm", Dim::length, 1e-6},
    {"nm", Dim::length, 1e-9},
    {"pm", Dim::length, 1e-12},
    {"s", Dim::time, 1.0},
    {"ms", Dim::time, 1e-3},
    {"us", Dim::time, 1e-6},
    {"µs", Dim::time, 1e-6},
    {"μs", Dim::time, 1e-6},
    {"ns", Dim::time, 1e-9},
    {"m/s", Dim::velocity, 1.0},
    {"cm/s", Dim::velocity, 1e-2},
    {"mm/s", Dim::velocity, 1e-3},
    {"um/s", Dim::velocity, 1e-6},
    {"µm/s", Dim::velocity, 1e-6},
    {"μm/s", Dim::velocity, 1e-6},
    {"nm/s", Dim::velocity, 1e-9},
    {"N", Dim::force, 1.0},
    {"mN", Dim::force, 1e-3},
    {"uN", Dim::force, 1e-6},
    {"µN", Dim::force, 1e-6},
    {"μN", Dim::force, 1e-6},
    {"nN", Dim::force, 1e-9},
    {"pN", Dim::force, 1e-12},
    {"fN", Dim::force, 1e-15},
    {"Pa.s", Dim::viscosity, 1.0},
    {"Pa*s", Dim::viscosity, 1.0},
    {"Pa·s", Dim::viscosity, 1.0},
    {"mPa.s", Dim::viscosity, 1e-3},
    {"mPa*s", Dim::viscosity, 1e-3},
    {"mPa·s", Dim::viscosity, 1e-3},
    {"cP", Dim::viscosity, 1e-3},
    {"P", Dim::viscosity, 0.1},
    {"kg/m3", Dim::density, 1.0},
    {"kg/m^3", Dim::density, 1.0},
    {"g/cm3", Dim::density, 1e3},
    {"g/cm^3", Dim::density, 1e3},
    {"g/cc", Dim::density, 1e3},
    {"Hz", Dim::frequency, 1.0},
    {"kHz", Dim::frequency, 1e3},
}};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

}  // namespace

double parse_quantity(std::string_view text, Dim expected) {
    const std::string_view trimmed = trim(text);
    if (trimmed.empty())
        throw std::invalid_argument("parse_quantity: empty quantity string");

    const std::string buf(trimmed);
    char* end = nullptr;
    const double value = std::strtod(buf.c_str(), &end);
    if (end == buf.c_str())
        throw std::invalid_argument("parse_quantity: no number in '" + buf + "'");
    if (!std::isfinite(value))
        throw std::invalid_argument("parse_quantity: non-finite value in '" + buf + "'");

    const std::string_view unit = trim(std::string_view(end));
    if (unit.empty()) return value;  // bare number: already SI

    for (const Unit& u : unit_table) {
        if (unit == u.name) {
            if (u.dim != expected)
                throw std::invalid_argument(
                    "parse_quantity: unit '" + std::string(unit) + "' has dimension " +
                    to_string(u.dim) + ", expected " + to_string(expected));
            return value * u.factor;
        }
    }
    throw std::invalid_argument("parse_quantity: unknown unit '" + std::string(unit) +
                                "'");
}

void DeviceSpec::validate() const {
    const auto positive = [](double v, const char* name) {
        if (!(std::isfinite(v) && v > 0.0))
            throw std::invalid_argument(std::string("DeviceSpec: ") + name +
                                        " must be positive");
    };
    positive(R, "R");
    positive(L, "L");
    positive(r, "r");
    positive(h, "h");
    positive(lambda, "lambda");
    positive(eta, "eta");
    positive(rho, "rho");
    positive(V1, "V1");
    positive(V2, "V2");
    if (!(F1 >= 0.0 && F2 >= 0.0 && std::isfinite(F1) && std::isfinite(F2)))
        throw std::invalid_argument("DeviceSpec: forces must be nonnegative");
    if (!(r < R))
        throw std::invalid_argument("DeviceSpec: axle radius r must be below R");
    if (H > 0.0 && a > 0.0 && !(a < H))
        throw std::invalid_argument(
            "DeviceSpec: corrugation amplitude a must fit inside the separation H");
}

double friction_coefficient(const DeviceSpec& d) {
    return two_pi * d.eta * d.L * d.r * d.r * d.r / d.h;
}

double moment_of_inertia(const DeviceSpec& d) {
    return 0.5 * pi * d.rho * d.L * d.R * d.R * d.R * d.R;
}

double inertia_time(const DeviceSpec& d) {
    const double tau = d.rho * d.h * d.R * d.R * d.R * d.R / (4.0 * d.eta * d.r * d.r * d.r);
    const double ratio = moment_of_inertia(d) / friction_coefficient(d);
    if (std::fabs(tau - ratio) > 1e-9 * tau)
        throw std::logic_error("inertia_time: tau disagrees with I/zeta");
    return tau;
}

double skipping_velocity(double force, const DeviceSpec& d) {
    if (!(force >= 0.0))
        throw std::invalid_argument("skipping_velocity: force must be nonnegative");
    return force * d.R * d.R / friction_coefficient(d);
}

double clock_frequency(double rack_speed, double lambda) {
    if (!(rack_speed > 0.0 && lambda > 0.0))
        throw std::invalid_argument("clock_frequency: speed and wavelength must be positive");
    return rack_speed / lambda;
}

DrivePoint to_drive_point(const DeviceSpec& d) {
    d.validate();
    const double zeta = friction_coefficient(d);
    return DrivePoint(d.F1 * d.R * d.R / (zeta * d.V1),
                      d.F2 * d.R * d.R / (zeta * d.V1), d.V2 / d.V1);
}

RackInputs from_drive_point(const DrivePoint& point, const DeviceSpec& d, double V1) {
    if (!(V1 > 0.0))
        throw std::invalid_argument("from_drive_point: V1 must be positive");
    const double zeta = friction_coefficient(d);
    return RackInputs{point.phi1 * zeta * V1 / (d.R * d.R),
                      point.phi2 * zeta * V1 / (d.R * d.R), point.nu * V1};
}

EstimateReport estimate(const DeviceSpec& d) {
    d.validate();
    const double zeta = friction_coefficient(d);
    const double vs1 = skipping_velocity(d.F1, d);
    const double vs2 = skipping_velocity(d.F2, d);
    return EstimateReport{zeta,
                          moment_of_inertia(d),
                          inertia_time(d),
                          vs1,
                          vs2,
                          clock_frequency(d.V1, d.lambda),
                          clock_frequency(vs1 / 5.0, d.lambda),
                          clock_frequency(vs2 / 5.0, d.lambda),
                          to_drive_point(d)};
}

const std::string& builtin_presets_json() {
    static const std::string text = R"json({
  "paper": {
    "note": "published geometry; rack 1 carries the H = 100 nm grip, rack 2 the H = 200 nm grip, both racks driven at the rack-1 clock speed V_S1/5",
    "R": "1 um",
    "L": "10 um",
    "r": "500 nm",
    "h": "100 nm",
    "lambda": "500 nm",
    "a": "50 nm",
    "eta": "1 mPa.s",
    "rho": "1.17 g/cm3",
    "F1": "12 pN",
    "F2": "0.3 pN",
    "V1": "3.0557749073643904e-5 m/s",
    "V2": "3.0557749073643904e-5 m/s"
  },
  "paper-H100": {
    "note": "symmetric strong-grip variant: both racks at H = 100 nm, F = 12 pN, driven at V_S/5",
    "R": "1 um",
    "L": "10 um",
    "r": "500 nm",
    "h": "100 nm",
    "lambda": "500 nm",
    "a": "50 nm",
    "H": "100 nm",
    "eta": "1 mPa.s",
    "rho": "1.17 g/cm3",
    "F1": "12 pN",
    "F2": "12 pN",
    "V1": "3.0557749073643904e-5 m/s",
    "V2": "3.0557749073643904e-5 m/s"
  },
  "paper-H200": {
    "note": "symmetric weak-grip variant: both racks at H = 200 nm, F = 0.3 pN, driven at V_S/5",
    "R": "1 um",
    "L": "10 um",
    "r": "500 nm",
    "h": "100 nm",
    "lambda": "500 nm",
    "a": "50 nm",
    "H": "200 nm",
    "eta": "1 mPa.s",
    "rho": "1.17 g/cm3",
    "F1": "0.3 pN",
    "F2": "0.3 pN",
    "V1": "7.6394372684109761e-7 m/s",
    "V2": "7.6394372684109761e-7 m/s"
  }
})json";
    return text;
}

DeviceSpec device_from_json(const nlohmann::json& j, const std::string& context) {
    StrictObject obj(j, context);
    DeviceSpec d{};
    d.R = obj.quantity("R", Dim::length);
    d.L = obj.quantity("L", Dim::length);
    d.r = obj.quantity("r", Dim::length);
    d.h = obj.quantity("h", Dim::length);
    d.lambda = obj.quantity("lambda", Dim::length);
    d.eta = obj.quantity("eta", Dim::viscosity);
    d.rho = obj.quantity("rho", Dim::density);
    d.F1 = obj.quantity("F1", Dim::force);
    d.F2 = obj.quantity("F2", Dim::force);
    d.V1 = obj.quantity("V1", Dim::velocity);
    d.V2 = obj.quantity("V2", Dim::velocity);
    d.H = obj.quantity_or("H", Dim::length, 0.0);
    d.a = obj.quantity_or("a", Dim::length, 0.0);
    obj.string_or("note", "");
    obj.done();
    try {
        d.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(context + ": " + e.what());
    }
    return d;
}

std::map<std::string, DeviceSpec> load_presets(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("presets: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("presets: expected an object of devices");
    std::map<std::string, DeviceSpec> presets;
    for (const auto& item : j.items())
        presets.emplace(item.key(),
                        device_from_json(item.value(), "presets." + item.key()));
    return presets;
}

}  // namespace pinion
