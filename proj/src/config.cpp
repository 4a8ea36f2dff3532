#include "pinion/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pinion/device_json.hpp"

namespace pinion {

nlohmann::json load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

IntegratorConfig parse_integrator(StrictObject& parent) {
    IntegratorConfig config;
    const auto* block = parent.find("integrator");
    if (!block) return config;
    StrictObject obj(*block, parent.context() + ".integrator");
    config.rel_tol = obj.number_or("rel_tol", config.rel_tol);
    config.abs_tol = obj.number_or("abs_tol", config.abs_tol);
    config.max_step = obj.number_or("max_step", config.max_step);
    config.sample_interval = obj.number_or("sample_interval", config.sample_interval);
    obj.done();
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(parent.context() + ".integrator: " + e.what());
    }
    return config;
}

ClassifyTolerances parse_tolerances(StrictObject& parent) {
    ClassifyTolerances tol;
    const auto* block = parent.find("tolerances");
    if (!block) return tol;
    StrictObject obj(*block, parent.context() + ".tolerances");
    tol.eps_lock = obj.number_or("eps_lock", tol.eps_lock);
    tol.eps_zero = obj.number_or("eps_zero", tol.eps_zero);
    tol.eps_conv = obj.number_or("eps_conv", tol.eps_conv);
    tol.discard_fraction = obj.number_or("discard_fraction", tol.discard_fraction);
    tol.horizon = obj.number_or("horizon", tol.horizon);
    obj.done();
    try {
        tol.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(parent.context() + ".tolerances: " + e.what());
    }
    return tol;
}

AxisRange parse_axis(const nlohmann::json& j, const std::string& context) {
    StrictObject obj(j, context);
    AxisRange axis{};
    axis.min = obj.number("min");
    axis.max = obj.number("max");
    const auto& count = obj.require("count");
    if (!count.is_number_unsigned() || count.get<std::uint64_t>() == 0)
        throw ConfigError(context + ": count must be a positive integer");
    axis.count = count.get<std::size_t>();
    obj.done();
    return axis;
}

namespace {

DrivePoint parse_point(const nlohmann::json& j, const std::string& context) {
    StrictObject obj(j, context);
    const double phi1 = obj.number("phi1");
    const double phi2 = obj.number("phi2");
    const double nu = obj.number("nu");
    obj.done();
    try {
        return DrivePoint(phi1, phi2, nu);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(context + ": " + e.what());
    }
}

}  // namespace

const DeviceSpec& find_preset(const std::map<std::string, DeviceSpec>& presets,
                              const std::string& name, const std::string& context) {
    const auto it = presets.find(name);
    if (it == presets.end()) {
        std::string known;
        for (const auto& [key, value] : presets) {
            if (!known.empty()) known += ", ";
            known += key;
        }
        throw ConfigError(context + ": unknown preset '" + name + "' (available: " +
                          known + ")");
    }
    return it->second;
}

SimulateRun parse_simulate(const nlohmann::json& j,
                           const std::map<std::string, DeviceSpec>& presets) {
    StrictObject obj(j, "simulate");
    SimulateRun run;

    const auto* point = obj.find("point");
    const auto* symmetric = obj.find("symmetric");
    const auto* device = obj.find("device");
    const auto* preset = obj.find("preset");
    const int modes = !!point + !!symmetric + !!device + !!preset;
    if (modes != 1)
        throw ConfigError(
            "simulate: exactly one of 'point', 'symmetric', 'device', 'preset' is "
            "required");

    const auto* u0 = obj.find("u0");
    const auto* x0 = obj.find("x0");
    if (u0 && x0) throw ConfigError("simulate: give either 'u0' or 'x0', not both");
    if (u0 && !u0->is_number())
        throw ConfigError("simulate: key 'u0' must be a number");

    if (point) {
        run.mode = SimulateRun::Mode::reduced;
        run.point = parse_point(*point, "simulate.point");
        if (x0) throw ConfigError("simulate: 'x0' needs a device; use 'u0'");
        run.u0 = u0 ? u0->get<double>() : 0.0;
    } else if (symmetric) {
        run.mode = SimulateRun::Mode::symmetric;
        StrictObject sym(*symmetric, "simulate.symmetric");
        const double grip = sym.number("grip");
        sym.done();
        if (x0) throw ConfigError("simulate: 'x0' needs a device; use 'u0'");
        run.u0 = u0 ? u0->get<double>() : 0.0;
        try {
            run.symmetric = SymmetricCase(grip, run.u0);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("simulate.symmetric: ") + e.what());
        }
        run.point = run.symmetric->drive_point();
    } else {
        run.mode = SimulateRun::Mode::dimensional;
        if (device) {
            run.device = device_from_json(*device, "simulate.device");
        } else {
            if (!preset->is_string())
                throw ConfigError("simulate: key 'preset' must be a string");
            run.device = find_preset(presets, preset->get<std::string>(), "simulate");
        }
        if (x0) {
            double x0_value;
            if (x0->is_number()) {
                x0_value = x0->get<double>();
            } else if (x0->is_string()) {
                try {
                    x0_value = parse_quantity(x0->get<std::string>(), Dim::length);
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(std::string("simulate: key 'x0': ") + e.what());
                }
            } else {
                throw ConfigError("simulate: key 'x0' must be a number or quantity string");
            }
            run.u0 = two_pi * x0_value / run.device->lambda;
        } else {
            run.u0 = u0 ? u0->get<double>() : 0.0;
        }
        run.point = to_drive_point(*run.device);
    }

    const auto& horizon = obj.require("horizon");
    if (!horizon.is_number())
        throw ConfigError("simulate: key 'horizon' must be a number");
    run.horizon = horizon.get<double>();
    if (!(run.horizon > 0.0 && std::isfinite(run.horizon)))
        throw ConfigError("simulate: horizon must be positive");
    if (!std::isfinite(run.u0)) throw ConfigError("simulate: u0 must be finite");

    run.integrator = parse_integrator(obj);
    run.classify = obj.bool_or("classify", false);
    run.clock = obj.bool_or("clock_metrics", false);
    run.tolerances = parse_tolerances(obj);
    obj.done();
    return run;
}

SweepSpec parse_sweep(const nlohmann::json& j) {
    StrictObject obj(j, "sweep");
    SweepSpec spec;
    spec.phi1 = parse_axis(obj.require("phi1"), "sweep.phi1");
    spec.nu = parse_axis(obj.require("nu"), "sweep.nu");

    const auto* offset = obj.find("grip_offset");
    const auto* phi2 = obj.find("phi2");
    if (offset && phi2)
        throw ConfigError("sweep: give either 'grip_offset' or 'phi2', not both");
    if (offset) {
        if (!offset->is_number())
            throw ConfigError("sweep: key 'grip_offset' must be a number");
        spec.grip_offset = offset->get<double>();
    }
    if (phi2) {
        if (!phi2->is_number()) throw ConfigError("sweep: key 'phi2' must be a number");
        spec.phi2_fixed = phi2->get<double>();
    }

    spec.u0 = obj.number_or("u0", 0.0);
    spec.trace_boundary = obj.bool_or("trace_boundary", false);
    spec.tolerances = parse_tolerances(obj);
    spec.integrator = parse_integrator(obj);
    obj.done();
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("sweep: ") + e.what());
    }
    return spec;
}

CutRun parse_cut(const nlohmann::json& j) {
    StrictObject obj(j, "cut");
    CutRun run;
    run.phi1 = obj.number("phi1");
    run.phi2 = obj.number("phi2");
    run.nu = parse_axis(obj.require("nu"), "cut.nu");
    run.u0 = obj.number_or("u0", 0.0);
    run.refine_zero = obj.bool_or("refine_zero", true);
    run.tolerances = parse_tolerances(obj);
    run.integrator = parse_integrator(obj);
    obj.done();
    if (!(run.phi1 >= 0.0 && run.phi2 >= 0.0))
        throw ConfigError("cut: grips must be nonnegative");
    if (run.nu.count < 2) throw ConfigError("cut: nu axis needs at least two points");
    if (!(run.nu.min > 0.0 && run.nu.min < run.nu.max))
        throw ConfigError("cut: nu axis must be positive and ordered");
    if (!std::isfinite(run.u0)) throw ConfigError("cut: u0 must be finite");
    return run;
}

BoundaryRun parse_boundary(const nlohmann::json& j) {
    StrictObject obj(j, "boundary");
    BoundaryRun run;
    const auto& offset = obj.require("grip_offset");
    if (!offset.is_number())
        throw ConfigError("boundary: key 'grip_offset' must be a number");
    run.grip_offset = offset.get<double>();
    run.u0 = obj.number_or("u0", 0.0);
    run.bracket_width = obj.number_or("bracket_width", 1e-4);
    if (!(run.bracket_width > 0.0))
        throw ConfigError("boundary: bracket_width must be positive");

    const auto& rows = obj.require("rows");
    if (!rows.is_array() || rows.empty())
        throw ConfigError("boundary: 'rows' must be a nonempty array");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string ctx = "boundary.rows[" + std::to_string(i) + "]";
        StrictObject row(rows[i], ctx);
        BoundaryRow out{};
        out.phi1 = row.number("phi1");
        const auto& bracket = row.require("bracket");
        if (!bracket.is_array() || bracket.size() != 2 || !bracket[0].is_number() ||
            !bracket[1].is_number())
            throw ConfigError(ctx + ": 'bracket' must be [nu_lo, nu_hi]");
        out.nu_lo = bracket[0].get<double>();
        out.nu_hi = bracket[1].get<double>();
        if (!(out.nu_lo > 0.0 && out.nu_lo < out.nu_hi))
            throw ConfigError(ctx + ": bracket must satisfy 0 < lo < hi");
        row.done();
        run.rows.push_back(out);
    }

    run.tolerances = parse_tolerances(obj);
    run.integrator = parse_integrator(obj);
    obj.done();
    return run;
}

EstimateRun parse_estimate(const nlohmann::json& j,
                           const std::map<std::string, DeviceSpec>& presets) {
    StrictObject obj(j, "estimate");
    EstimateRun run;
    const auto* device = obj.find("device");
    const auto* preset = obj.find("preset");
    if (!!device + !!preset != 1)
        throw ConfigError("estimate: exactly one of 'device' or 'preset' is required");
    if (device) {
        run.device = device_from_json(*device, "estimate.device");
    } else {
        if (!preset->is_string())
            throw ConfigError("estimate: key 'preset' must be a string");
        run.device = find_preset(presets, preset->get<std::string>(), "estimate");
    }
    const auto* rack_speed = obj.find("V_R");
    if (rack_speed) {
        double value;
        if (rack_speed->is_number()) {
            value = rack_speed->get<double>();
        } else if (rack_speed->is_string()) {
            try {
                value = parse_quantity(rack_speed->get<std::string>(), Dim::velocity);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("estimate: key 'V_R': ") + e.what());
            }
        } else {
            throw ConfigError("estimate: key 'V_R' must be a number or quantity string");
        }
        if (!(value > 0.0)) throw ConfigError("estimate: V_R must be positive");
        run.rack_speed = value;
    }
    obj.done();
    return run;
}

}  // namespace pinion
