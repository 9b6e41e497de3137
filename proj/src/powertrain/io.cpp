#include "emato/powertrain/io.hpp"

#include <string>

#include "emato/error.hpp"

namespace emato::powertrain {
namespace {

using nlohmann::json;

void expect_format(const json& j, const char* format) {
  if (!j.is_object()) throw InvalidSpec(std::string(format) + ": expected a JSON object");
  if (j.value("format", std::string{}) != format)
    throw InvalidSpec(std::string("expected format '") + format + "'");
  if (j.value("version", 0) != kSchemaVersion)
    throw InvalidSpec(std::string(format) + ": unsupported schema version");
}

template <typename T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) throw InvalidSpec(std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidSpec(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

json to_json(const EngineMap& map) {
  return json{{"format", "emato.engine_map"},
              {"version", kSchemaVersion},
              {"speed_grid", map.speed_grid()},
              {"torque_grid", map.torque_grid()},
              {"power_surface", map.power_surface()},
              {"bsfc_surface", map.bsfc_surface()},
              {"max_torque", map.max_torque_curve()}};
}

json to_json(const TransmissionSpec& t) {
  return json{{"gear_ratios", t.gear_ratios},
              {"final_drive", t.final_drive},
              {"efficiency", t.efficiency},
              {"wheel_radius", t.wheel_radius}};
}

json to_json(const GearPolicy& p) {
  return json{{"format", "emato.gear_policy"},
              {"version", kSchemaVersion},
              {"transmission", to_json(p.transmission())},
              {"speeds", p.grid().speeds},
              {"tractions", p.grid().tractions},
              {"table", p.table()}};
}

json to_json(const FuelCoeffs& k) {
  return json{{"format", "emato.fuel_coeffs"},
              {"version", kSchemaVersion},
              {"o0", k.o[0]}, {"o1", k.o[1]}, {"o2", k.o[2]}, {"o3", k.o[3]}, {"o4", k.o[4]},
              {"c0", k.c[0]}, {"c1", k.c[1]}, {"c2", k.c[2]},
              {"fuel_density", k.fuel_density}};
}

json to_json(const MapSpec& s) {
  return json{{"n_speed", s.n_speed},
              {"n_torque", s.n_torque},
              {"omega_idle", s.omega_idle},
              {"omega_max", s.omega_max},
              {"torque_peak", s.torque_peak},
              {"omega_peak_torque", s.omega_peak_torque},
              {"torque_drop", s.torque_drop},
              {"bsfc_min", s.bsfc_min},
              {"omega_star", s.omega_star},
              {"torque_star", s.torque_star},
              {"curvature_speed", s.curvature_speed},
              {"curvature_torque", s.curvature_torque}};
}

EngineMap engine_map_from_json(const json& j) {
  expect_format(j, "emato.engine_map");
  return EngineMap(require<std::vector<double>>(j, "speed_grid"),
                   require<std::vector<double>>(j, "torque_grid"),
                   require<std::vector<double>>(j, "power_surface"),
                   require<std::vector<double>>(j, "bsfc_surface"),
                   require<std::vector<double>>(j, "max_torque"));
}

TransmissionSpec transmission_from_json(const json& j) {
  TransmissionSpec t;
  t.gear_ratios = require<std::vector<double>>(j, "gear_ratios");
  t.final_drive = require<double>(j, "final_drive");
  t.efficiency = require<double>(j, "efficiency");
  t.wheel_radius = require<double>(j, "wheel_radius");
  t.validate();
  return t;
}

GearPolicy gear_policy_from_json(const json& j) {
  expect_format(j, "emato.gear_policy");
  if (!j.contains("transmission")) throw InvalidSpec("missing key 'transmission'");
  PolicyGrid grid{require<std::vector<double>>(j, "speeds"),
                  require<std::vector<double>>(j, "tractions")};
  return GearPolicy(transmission_from_json(j.at("transmission")), std::move(grid),
                    require<std::vector<int>>(j, "table"));
}

FuelCoeffs fuel_coeffs_from_json(const json& j) {
  expect_format(j, "emato.fuel_coeffs");
  FuelCoeffs k;
  const char* o_keys[] = {"o0", "o1", "o2", "o3", "o4"};
  const char* c_keys[] = {"c0", "c1", "c2"};
  for (std::size_t i = 0; i < 5; ++i) k.o[i] = require<double>(j, o_keys[i]);
  for (std::size_t i = 0; i < 3; ++i) k.c[i] = require<double>(j, c_keys[i]);
  k.fuel_density = j.value("fuel_density", 0.85);
  return k;
}

MapSpec map_spec_from_json(const json& j) {
  if (!j.is_object()) throw InvalidSpec("map spec must be a JSON object");
  MapSpec s;
  try {
    s.n_speed = j.value("n_speed", s.n_speed);
    s.n_torque = j.value("n_torque", s.n_torque);
    s.omega_idle = j.value("omega_idle", s.omega_idle);
    s.omega_max = j.value("omega_max", s.omega_max);
    s.torque_peak = j.value("torque_peak", s.torque_peak);
    s.omega_peak_torque = j.value("omega_peak_torque", s.omega_peak_torque);
    s.torque_drop = j.value("torque_drop", s.torque_drop);
    s.bsfc_min = j.value("bsfc_min", s.bsfc_min);
    s.omega_star = j.value("omega_star", s.omega_star);
    s.torque_star = j.value("torque_star", s.torque_star);
    s.curvature_speed = j.value("curvature_speed", s.curvature_speed);
    s.curvature_torque = j.value("curvature_torque", s.curvature_torque);
  } catch (const json::exception& e) {
    throw InvalidSpec(std::string("bad map spec value: ") + e.what());
  }
  s.validate();
  return s;
}

}  // namespace emato::powertrain
