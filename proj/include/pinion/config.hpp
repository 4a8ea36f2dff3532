#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pinion/analysis.hpp"
#include "pinion/atlas.hpp"
#include "pinion/device.hpp"
#include "pinion/integrate.hpp"
#include "pinion/strict_json.hpp"

namespace pinion {

// Parsed run descriptions, one per subcommand. Config files are strict JSON:
// every key must be recognized, unknown keys are rejected by name.

struct SimulateRun {
    enum class Mode { reduced, symmetric, dimensional };
    Mode mode = Mode::reduced;
    DrivePoint point{1.0, 1.0, 1.0};
    double u0 = 0.0;
    double horizon = 0.0;
    IntegratorConfig integrator{};
    std::optional<SymmetricCase> symmetric;  // set in symmetric mode
    std::optional<DeviceSpec> device;        // set in dimensional mode
    bool classify = false;
    bool clock = false;
    ClassifyTolerances tolerances{};
};

struct CutRun {
    double phi1 = 0.0;
    double phi2 = 0.0;
    AxisRange nu{0.5, 1.5, 201};
    double u0 = 0.0;
    bool refine_zero = true;
    ClassifyTolerances tolerances{};
    IntegratorConfig integrator{};
};

struct BoundaryRow {
    double phi1;
    double nu_lo;
    double nu_hi;
};

struct BoundaryRun {
    double grip_offset = 0.0;
    double u0 = 0.0;
    double bracket_width = 1e-4;
    std::vector<BoundaryRow> rows;
    ClassifyTolerances tolerances{};
    IntegratorConfig integrator{};
};

struct EstimateRun {
    DeviceSpec device{};
    std::optional<double> rack_speed;  // extra frequency row at this V_R
};

// Reads and parses a JSON config file; errors carry the file name.
nlohmann::json load_config_file(const std::filesystem::path& path);

// Looks up a preset by name; a miss lists the available names.
const DeviceSpec& find_preset(const std::map<std::string, DeviceSpec>& presets,
                              const std::string& name, const std::string& context);

SimulateRun parse_simulate(const nlohmann::json& j,
                           const std::map<std::string, DeviceSpec>& presets);
SweepSpec parse_sweep(const nlohmann::json& j);
CutRun parse_cut(const nlohmann::json& j);
BoundaryRun parse_boundary(const nlohmann::json& j);
EstimateRun parse_estimate(const nlohmann::json& j,
                           const std::map<std::string, DeviceSpec>& presets);

// Shared sub-object parsers (defaults filled, then overridden).
IntegratorConfig parse_integrator(StrictObject& parent);
ClassifyTolerances parse_tolerances(StrictObject& parent);
AxisRange parse_axis(const nlohmann::json& j, const std::string& context);

}  // namespace pinion
