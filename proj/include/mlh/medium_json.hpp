#pragma once

#include "json.hpp"

#include "mlh/medium.hpp"

namespace mlh {

/// Parses {"a": ..., "layers": [{"diffusivity": ..., "density": ...} x3]}; throws ConfigError.
PhysicalMedium medium_from_json(const nlohmann::json& j);
nlohmann::json medium_to_json(const PhysicalMedium& m);

/// Throws ConfigError if j is not an object or has a key outside `allowed`.
void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const char* where);

}  // namespace mlh
