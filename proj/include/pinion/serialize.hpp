#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pinion/analysis.hpp"
#include "pinion/atlas.hpp"
#include "pinion/device.hpp"
#include "pinion/integrate.hpp"

namespace pinion {

class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// All numeric output goes through %.9g: compact, stable across runs, and
// enough digits to reproduce a plot. JSON values are rounded through the same
// formatter so both formats carry identical numbers.
std::string format_sig9(double value);
double round_sig9(double value);
nlohmann::json json_number(double value);

nlohmann::json to_json(const DrivePoint& point);
nlohmann::json to_json(const IntegratorConfig& config);
nlohmann::json to_json(const ClassifyTolerances& tol);
nlohmann::json to_json(const PhaseLabel& label);
nlohmann::json to_json(const ClockMetrics& metrics);
nlohmann::json to_json(const AxisRange& axis);
nlohmann::json to_json(const SweepSpec& spec);
nlohmann::json to_json(const DeviceSpec& device);
nlohmann::json to_json(const EstimateReport& report);

// Reduced-units trajectory table, header "s,u".
std::string trajectory_csv(const Trajectory& traj);

// Dimensional trajectory table, header "t[s],x[m]"; converts through the
// device scales t = s*lambda/(2*pi*V1), x = u*lambda/(2*pi).
std::string trajectory_csv_dimensional(const Trajectory& traj, const DeviceSpec& device);

// Grid table, header "phi1,nu,label,mean_velocity,converged", row-major with
// nu varying fastest.
std::string phase_map_csv(const PhaseMap& map);

struct CutRow {
    double nu;
    double mean_velocity;
    PhaseKind kind;
    bool converged;
    bool refined;  // true for the bisection-inserted zero crossing
};

// Cut table, header "nu,mean_velocity,label,converged,refined".
std::string cut_csv(const std::vector<CutRow>& rows);

// Boundary table, header "phi1,nu_star,residual".
std::string boundary_csv(const std::vector<BoundaryPoint>& points);

// Human-readable estimate summary, one quantity per line.
std::string estimate_text(const EstimateReport& report);

// Writes atomically enough for this toolkit: create parent directories, write,
// fail loudly. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace pinion
