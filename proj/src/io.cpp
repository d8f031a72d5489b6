#include "qcgaps/io.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

#include "qcgaps/error.hpp"

namespace qcgaps {
namespace {

Vec2 json_pair(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ValidationError(std::string(what) + " must be a pair of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("not a number: '" + s + "'");
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
  if (used != s.size()) throw ValidationError("not a number: '" + s + "'");
  return v;
}

}  // namespace

WindowConfig parse_window_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("window JSON: ") + e.what());
  }
  return parse_window_json(j);
}

WindowConfig parse_window_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw ValidationError("window JSON needs a string field \"type\"");
  }
  const std::string type = j["type"].get<std::string>();
  if (type == "preset") {
    if (!j.contains("name") || !j["name"].is_string()) throw ValidationError("preset window needs \"name\"");
    auto p = parse_preset(j["name"].get<std::string>());
    if (!p) throw ValidationError("unknown preset '" + j["name"].get<std::string>() + "'");
    Vec2 w = j.contains("w") ? json_pair(j["w"], "w") : Vec2{};
    return {preset_window(*p, w), p, w};
  }
  if (type == "polygon") {
    if (!j.contains("vertices") || !j["vertices"].is_array()) throw ValidationError("polygon needs \"vertices\"");
    std::vector<Vec2> verts;
    for (const auto& v : j["vertices"]) verts.push_back(json_pair(v, "vertex"));
    return {Window::polygon(std::move(verts)), std::nullopt, {}};
  }
  if (type == "disc") {
    if (!j.contains("radius") || !j["radius"].is_number()) throw ValidationError("disc needs numeric \"radius\"");
    Vec2 c = j.contains("center") ? json_pair(j["center"], "center") : Vec2{};
    return {Window::disc(c, j["radius"].get<double>()), std::nullopt, {}};
  }
  throw ValidationError("unknown window type '" + type + "'");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(parse_number(item));
  }
  return out;
}

Vec2 parse_pair(const std::string& text) {
  auto v = parse_list(text);
  if (v.size() != 2) throw ValidationError("expected a pair x,y but got '" + text + "'");
  return {v[0], v[1]};
}

nlohmann::json to_json(const CoefficientReport& r) {
  nlohmann::json j;
  j["a_P"] = r.a_P;
  j["method"] = method_name(r.method);
  j["d"] = r.d;
  j["window_area"] = r.window_area;
  j["prefactor"] = r.prefactor;
  j["quadrature_error_estimate"] = r.quadrature_error_estimate;
  auto& rows = j["per_interval"] = nlohmann::json::array();
  for (const auto& c : r.per_interval) {
    rows.push_back({{"index", c.index},
                    {"interval", c.label},
                    {"A", c.A},
                    {"B", c.B},
                    {"integral_r2", c.integral_r2},
                    {"integral_r2_nu2", c.integral_r2_nu2},
                    {"contribution", c.contribution}});
  }
  return j;
}

nlohmann::json to_json(const Window& window) {
  nlohmann::json j;
  if (window.is_polygon()) {
    j["type"] = "polygon";
    auto& v = j["vertices"] = nlohmann::json::array();
    for (const Vec2& p : window.as_polygon().vertices) v.push_back({p.x, p.y});
  } else {
    j["type"] = "disc";
    j["center"] = {window.as_disc().center.x, window.as_disc().center.y};
    j["radius"] = window.as_disc().radius;
  }
  if (window.provenance()) j["provenance"] = *window.provenance();
  return j;
}

std::string format_sig9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace qcgaps
