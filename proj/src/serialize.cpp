#include "pinion/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace pinion {

std::string format_sig9(double value) {
    if (value == 0.0) value = 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

double round_sig9(double value) {
    return std::strtod(format_sig9(value).c_str(), nullptr);
}

nlohmann::json json_number(double value) { return round_sig9(value); }

nlohmann::json to_json(const DrivePoint& point) {
    return {{"phi1", json_number(point.phi1)},
            {"phi2", json_number(point.phi2)},
            {"nu", json_number(point.nu)}};
}

nlohmann::json to_json(const IntegratorConfig& config) {
    return {{"rel_tol", json_number(config.rel_tol)},
            {"abs_tol", json_number(config.abs_tol)},
            {"max_step", json_number(config.max_step)},
            {"sample_interval", json_number(config.sample_interval)}};
}

nlohmann::json to_json(const ClassifyTolerances& tol) {
    return {{"eps_lock", json_number(tol.eps_lock)},
            {"eps_zero", json_number(tol.eps_zero)},
            {"eps_conv", json_number(tol.eps_conv)},
            {"discard_fraction", json_number(tol.discard_fraction)},
            {"horizon", json_number(tol.horizon)}};
}

nlohmann::json to_json(const PhaseLabel& label) {
    return {{"label", to_string(label.kind)},
            {"mean_velocity", json_number(label.mean_velocity)},
            {"slip_rate_1", json_number(label.slip_rate_1)},
            {"slip_rate_2", json_number(label.slip_rate_2)},
            {"converged", label.converged}};
}

nlohmann::json to_json(const ClockMetrics& metrics) {
    nlohmann::json j{{"frequency", json_number(metrics.frequency)},
                     {"peak_amplitude", json_number(metrics.peak_amplitude)},
                     {"squareness", json_number(metrics.squareness)}};
    if (std::isfinite(metrics.amplification))
        j["amplification"] = json_number(metrics.amplification);
    else
        j["amplification"] = nullptr;
    return j;
}

nlohmann::json to_json(const AxisRange& axis) {
    return {{"min", json_number(axis.min)},
            {"max", json_number(axis.max)},
            {"count", axis.count}};
}

nlohmann::json to_json(const SweepSpec& spec) {
    nlohmann::json j{{"phi1", to_json(spec.phi1)},
                     {"nu", to_json(spec.nu)},
                     {"u0", json_number(spec.u0)},
                     {"trace_boundary", spec.trace_boundary}};
    if (spec.phi2_fixed)
        j["phi2"] = json_number(*spec.phi2_fixed);
    else
        j["grip_offset"] = json_number(spec.grip_offset);
    return j;
}

nlohmann::json to_json(const DeviceSpec& device) {
    nlohmann::json j{{"R", json_number(device.R)},
                     {"L", json_number(device.L)},
                     {"r", json_number(device.r)},
                     {"h", json_number(device.h)},
                     {"lambda", json_number(device.lambda)},
                     {"eta", json_number(device.eta)},
                     {"rho", json_number(device.rho)},
                     {"F1", json_number(device.F1)},
                     {"F2", json_number(device.F2)},
                     {"V1", json_number(device.V1)},
                     {"V2", json_number(device.V2)}};
    if (device.H > 0.0) j["H"] = json_number(device.H);
    if (device.a > 0.0) j["a"] = json_number(device.a);
    return j;
}

nlohmann::json to_json(const EstimateReport& report) {
    return {{"zeta", json_number(report.zeta)},
            {"inertia", json_number(report.inertia)},
            {"tau", json_number(report.tau)},
            {"v_s1", json_number(report.v_s1)},
            {"v_s2", json_number(report.v_s2)},
            {"f_at_v1", json_number(report.f_at_v1)},
            {"f_clock1", json_number(report.f_clock1)},
            {"f_clock2", json_number(report.f_clock2)},
            {"reduced", to_json(report.reduced)}};
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "s,u\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out += format_sig9(traj.s[i]);
        out += ',';
        out += format_sig9(traj.u[i]);
        out += '\n';
    }
    return out;
}

std::string trajectory_csv_dimensional(const Trajectory& traj, const DeviceSpec& device) {
    const double time_scale = device.lambda / (two_pi * device.V1);
    const double length_scale = device.lambda / two_pi;
    std::string out = "t[s],x[m]\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out += format_sig9(traj.s[i] * time_scale);
        out += ',';
        out += format_sig9(traj.u[i] * length_scale);
        out += '\n';
    }
    return out;
}

std::string phase_map_csv(const PhaseMap& map) {
    std::string out = "phi1,nu,label,mean_velocity,converged\n";
    for (std::size_t i = 0; i < map.spec.phi1.count; ++i) {
        for (std::size_t j = 0; j < map.spec.nu.count; ++j) {
            const PhaseCell& cell = map.at(i, j);
            out += format_sig9(map.spec.phi1_at(i));
            out += ',';
            out += format_sig9(map.spec.nu_at(j));
            out += ',';
            out += to_string(cell.kind);
            out += ',';
            out += format_sig9(cell.mean_velocity);
            out += ',';
            out += cell.converged ? '1' : '0';
            out += '\n';
        }
    }
    return out;
}

std::string cut_csv(const std::vector<CutRow>& rows) {
    std::string out = "nu,mean_velocity,label,converged,refined\n";
    for (const CutRow& row : rows) {
        out += format_sig9(row.nu);
        out += ',';
        out += format_sig9(row.mean_velocity);
        out += ',';
        out += to_string(row.kind);
        out += ',';
        out += row.converged ? '1' : '0';
        out += ',';
        out += row.refined ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string boundary_csv(const std::vector<BoundaryPoint>& points) {
    std::string out = "phi1,nu_star,residual\n";
    for (const BoundaryPoint& p : points) {
        out += format_sig9(p.phi1);
        out += ',';
        out += format_sig9(p.nu_star);
        out += ',';
        out += format_sig9(p.residual);
        out += '\n';
    }
    return out;
}

std::string estimate_text(const EstimateReport& report) {
    std::string out;
    const auto line = [&](const char* name, double value, const char* unit) {
        out += name;
        out += " = ";
        out += format_sig9(value);
        out += ' ';
        out += unit;
        out += '\n';
    };
    line("zeta (rotational drag)", report.zeta, "kg m^2/s");
    line("I (moment of inertia)", report.inertia, "kg m^2");
    line("tau = I/zeta (inertial time)", report.tau, "s");
    line("V_S1 (rack-1 skipping speed)", report.v_s1, "m/s");
    line("V_S2 (rack-2 skipping speed)", report.v_s2, "m/s");
    line("f at V1 (drive frequency)", report.f_at_v1, "Hz");
    line("f_clock1 = (V_S1/5)/lambda", report.f_clock1, "Hz");
    line("f_clock2 = (V_S2/5)/lambda", report.f_clock2, "Hz");
    out += "reduced point: phi1 = " + format_sig9(report.reduced.phi1) +
           ", phi2 = " + format_sig9(report.reduced.phi2) +
           ", nu = " + format_sig9(report.reduced.nu) + "\n";
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace pinion
