#include "mlh/medium_json.hpp"

#include <algorithm>
#include <string>

#include "mlh/errors.hpp"

namespace mlh {

using nlohmann::json;

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) throw ConfigError(std::string(where) + ": unknown key \"" + key + "\"");
  }
}

namespace {

double number_at(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing \"" + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

}  // namespace

PhysicalMedium medium_from_json(const json& j) {
  reject_unknown_keys(j, {"a", "layers"}, "medium");
  const double a = number_at(j, "a", "medium");
  if (!j.contains("layers") || !j.at("layers").is_array() || j.at("layers").size() != 3) {
    throw ConfigError("medium: \"layers\" must be an array of exactly 3 objects");
  }
  std::array<Layer, 3> layers{};
  for (int i = 0; i < 3; ++i) {
    const auto& lj = j.at("layers").at(i);
    const std::string where = "medium.layers[" + std::to_string(i) + "]";
    reject_unknown_keys(lj, {"diffusivity", "density"}, where.c_str());
    layers[i] = {number_at(lj, "diffusivity", where), number_at(lj, "density", where)};
  }
  try {
    return PhysicalMedium(a, layers);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("medium: ") + e.what());
  }
}

json medium_to_json(const PhysicalMedium& m) {
  json layers = json::array();
  for (const auto& l : m.layers()) layers.push_back({{"diffusivity", l.diffusivity}, {"density", l.density}});
  return {{"a", m.a()}, {"layers", layers}};
}

}  // namespace mlh
