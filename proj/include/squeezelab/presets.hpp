#pragma once

#include <string>
#include <vector>

#include "squeezelab/scenario.hpp"

namespace squeezelab {

struct PresetSource {
  std::string name;
  std::string text;  // INI document as checked into presets/
};

/// Every preset shipped with the library, sorted by name.
const std::vector<PresetSource>& preset_sources();

/// Parsed preset; throws ConfigError for an unknown name.
ScenarioConfig load_preset(const std::string& name);

}  // namespace squeezelab
