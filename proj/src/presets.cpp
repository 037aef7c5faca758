#include "squeezelab/presets.hpp"

#include <algorithm>

namespace squeezelab {

namespace {

// Generated at configure time from presets/*.ini.
const PresetSource kPresets[] = {
#include "preset_data.inc"
};

}  // namespace

const std::vector<PresetSource>& preset_sources() {
  static const std::vector<PresetSource> sorted = [] {
    std::vector<PresetSource> v(std::begin(kPresets), std::end(kPresets));
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return v;
  }();
  return sorted;
}

ScenarioConfig load_preset(const std::string& name) {
  for (const auto& p : preset_sources())
    if (p.name == name) return parse_config(p.text, "preset " + name);
  throw ConfigError("unknown preset '" + name + "' (see list-presets)");
}

}  // namespace squeezelab
