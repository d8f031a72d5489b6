#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "qcgaps/coeff.hpp"
#include "qcgaps/window.hpp"

namespace qcgaps {

// Parsed window description. Presets carry their field and translation.
struct WindowConfig {
  Window window;
  std::optional<Preset> preset;
  Vec2 w;
};

// {"type":"preset","name":"ab","w":[x,y]} | {"type":"polygon","vertices":[[x,y],...]}
// | {"type":"disc","center":[x,y],"radius":r}
WindowConfig parse_window_json(const std::string& text);
WindowConfig parse_window_json(const nlohmann::json& j);
inline WindowConfig parse_window_json(const char* text) { return parse_window_json(std::string(text)); }

// "x,y" -> Vec2
Vec2 parse_pair(const std::string& text);
std::vector<double> parse_list(const std::string& text);

nlohmann::json to_json(const CoefficientReport& report);
nlohmann::json to_json(const Window& window);

// printf %.9g
std::string format_sig9(double x);

}  // namespace qcgaps
