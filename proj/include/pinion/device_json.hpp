#pragma once

#include <string>

#include <json.hpp>

#include "pinion/device.hpp"

namespace pinion {

// Parses one device description object (strict keys, validated). Shared by
// the preset loader and inline "device" blocks in run configs.
DeviceSpec device_from_json(const nlohmann::json& j, const std::string& context);

}  // namespace pinion
