#pragma once

#include <json.hpp>

#include "emato/powertrain/engine_map.hpp"
#include "emato/powertrain/fuel_model.hpp"
#include "emato/powertrain/gear_policy.hpp"

namespace emato::powertrain {

/// Versioned JSON documents. Surfaces are row-major with speed as the slow
/// index. Readers throw InvalidSpec on missing keys or a version mismatch.
inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const EngineMap& map);
nlohmann::json to_json(const GearPolicy& policy);
nlohmann::json to_json(const FuelCoeffs& coeffs);
nlohmann::json to_json(const MapSpec& spec);
nlohmann::json to_json(const TransmissionSpec& trans);

EngineMap engine_map_from_json(const nlohmann::json& j);
GearPolicy gear_policy_from_json(const nlohmann::json& j);
FuelCoeffs fuel_coeffs_from_json(const nlohmann::json& j);
/// Missing keys fall back to the light-truck defaults.
MapSpec map_spec_from_json(const nlohmann::json& j);
TransmissionSpec transmission_from_json(const nlohmann::json& j);

}  // namespace emato::powertrain
