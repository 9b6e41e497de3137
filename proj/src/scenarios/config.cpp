#include "emato/scenarios/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "emato/error.hpp"

namespace emato::scenarios {

namespace {

const std::vector<std::string> kAlgorithms{"cc",      "png",      "energy-quintic", "quintic",
                                           "emato-b", "emato-r",  "emato-v",        "qf-v",
                                           "qf-m",    "qf-e",     "emato-fv",       "emato-fm",
                                           "emato-fe"};

double number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw InvalidSpec("override '" + key + "' must be a number");
  return v.get<double>();
}

dynamics::SlopeProfile slope_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidSpec("cannot open slope file " + path);
  std::vector<double> s, th;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) continue;
    try {
      const double x = std::stod(a), y = std::stod(b);
      s.push_back(x);
      th.push_back(y);
    } catch (const std::exception&) {
      if (!s.empty()) throw InvalidSpec("bad number in slope file: " + line);
    }
  }
  return dynamics::SlopeProfile::from_samples(std::move(s), std::move(th));
}

using Setter = std::function<void(ScenarioConfig&, const nlohmann::json&)>;

std::map<std::string, Setter> setters() {
  std::map<std::string, Setter> m;
  auto num = [&m](const std::string& key, std::function<double&(ScenarioConfig&)> ref) {
    m[key] = [key, ref](ScenarioConfig& c, const nlohmann::json& v) { ref(c) = number(v, key); };
  };
  num("vehicle.mass", [](ScenarioConfig& c) -> double& { return c.params.mass; });
  num("vehicle.frontal_area", [](ScenarioConfig& c) -> double& { return c.params.frontal_area; });
  num("vehicle.air_density", [](ScenarioConfig& c) -> double& { return c.params.air_density; });
  num("vehicle.drag_coeff", [](ScenarioConfig& c) -> double& { return c.params.drag_coeff; });
  num("vehicle.rolling_coeff", [](ScenarioConfig& c) -> double& { return c.params.rolling_coeff; });
  num("vehicle.gravity", [](ScenarioConfig& c) -> double& { return c.params.gravity; });
  num("vehicle.v_max", [](ScenarioConfig& c) -> double& { return c.params.limits.v_max; });
  num("vehicle.a_v_max", [](ScenarioConfig& c) -> double& { return c.params.limits.a_v_max; });
  num("vehicle.a_b_max", [](ScenarioConfig& c) -> double& { return c.params.limits.a_b_max; });
  num("vehicle.a_t_max", [](ScenarioConfig& c) -> double& { return c.params.limits.a_t_max; });
  num("vehicle.j_max", [](ScenarioConfig& c) -> double& { return c.params.limits.j_max; });
  num("vehicle.fuel_density", [](ScenarioConfig& c) -> double& { return c.params.fuel.fuel_density; });
  for (int i = 0; i < 5; ++i)
    num("fuel.o" + std::to_string(i), [i](ScenarioConfig& c) -> double& { return c.params.fuel.o[i]; });
  for (int i = 0; i < 3; ++i)
    num("fuel.c" + std::to_string(i), [i](ScenarioConfig& c) -> double& { return c.params.fuel.c[i]; });
  num("acc.time_headway", [](ScenarioConfig& c) -> double& { return c.acc.spacing.time_headway; });
  num("acc.gap_min", [](ScenarioConfig& c) -> double& { return c.acc.spacing.gap_min; });
  num("acc.gap_max", [](ScenarioConfig& c) -> double& { return c.acc.spacing.gap_max; });
  num("acc.gap_relax", [](ScenarioConfig& c) -> double& { return c.acc.spacing.gap_relax; });
  num("acc.terminal_speed_deficit",
      [](ScenarioConfig& c) -> double& { return c.acc.terminal_speed_deficit; });
  num("acc.catch_up_accel", [](ScenarioConfig& c) -> double& { return c.acc.catch_up_accel; });
  num("png.v_d", [](ScenarioConfig& c) -> double& { return c.png.v_d; });
  num("png.distance", [](ScenarioConfig& c) -> double& { return c.png.distance; });
  num("png.replan_distance", [](ScenarioConfig& c) -> double& { return c.png.replan_distance; });
  num("frenet.lane_width", [](ScenarioConfig& c) -> double& { return c.frenet.lane_width; });
  num("frenet.vehicle_spacing", [](ScenarioConfig& c) -> double& { return c.frenet.vehicle_spacing; });
  num("frenet.ego_speed_kmh", [](ScenarioConfig& c) -> double& { return c.frenet.ego_speed_kmh; });
  num("frenet.v_d", [](ScenarioConfig& c) -> double& { return c.frenet.v_d; });
  num("frenet.distance", [](ScenarioConfig& c) -> double& { return c.frenet.distance; });
  num("frenet.r_safe", [](ScenarioConfig& c) -> double& { return c.frenet.safety.r_safe; });
  num("frenet.kappa_max", [](ScenarioConfig& c) -> double& { return c.frenet.safety.kappa_max; });
  m["frenet.lane_speeds_kmh"] = [](ScenarioConfig& c, const nlohmann::json& v) {
    if (!v.is_array() || v.empty()) throw InvalidSpec("frenet.lane_speeds_kmh must be a list");
    c.frenet.lane_speeds_kmh.clear();
    for (const auto& x : v) c.frenet.lane_speeds_kmh.push_back(number(x, "frenet.lane_speeds_kmh"));
  };
  m["frenet.vehicles_per_lane"] = [](ScenarioConfig& c, const nlohmann::json& v) {
    if (!v.is_number_integer()) throw InvalidSpec("frenet.vehicles_per_lane must be an integer");
    c.frenet.vehicles_per_lane = v.get<int>();
  };
  m["frenet.ego_lane"] = [](ScenarioConfig& c, const nlohmann::json& v) {
    if (!v.is_number_integer()) throw InvalidSpec("frenet.ego_lane must be an integer");
    c.frenet.ego_lane = v.get<int>();
  };
  m["solver.max_iter"] = [](ScenarioConfig& c, const nlohmann::json& v) {
    if (!v.is_number_integer()) throw InvalidSpec("solver.max_iter must be an integer");
    c.solver.max_iter = v.get<int>();
  };
  num("solver.tol_feas", [](ScenarioConfig& c) -> double& { return c.solver.tol_feas; });
  num("solver.tol_opt", [](ScenarioConfig& c) -> double& { return c.solver.tol_opt; });
  const char* wnames[] = {"w_v", "w_a", "w_b", "w_j", "w_f", "v_d"};
  for (int i = 0; i < 6; ++i) {
    m[std::string("weights.") + wnames[i]] = [i](ScenarioConfig& c, const nlohmann::json& v) {
      if (!c.weights) c.weights = polytraj::Weights{};
      double* f[] = {&c.weights->w_v, &c.weights->w_a, &c.weights->w_b,
                     &c.weights->w_j, &c.weights->w_f, &c.weights->v_d};
      *f[i] = number(v, "weights");
    };
  }
  return m;
}

}  // namespace

void ScenarioConfig::validate() const {
  params.validate();
  if (!(dt > 0.0)) throw InvalidSpec("dt must be positive");
  if (knots < 2) throw InvalidSpec("horizon needs at least two knots");
  if (!(replan_time > 0.0)) throw InvalidSpec("replan interval must be positive");
  const double steps = replan_time / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9)
    throw InvalidSpec("replan interval must be a whole number of steps");
  if (replan_steps() > knots - 1) throw InvalidSpec("replan interval exceeds the horizon");
  if (!(png.v_d > 0.0) || !(png.replan_distance > 0.0) || !(png.distance > 0.0))
    throw InvalidSpec("PnG speed, distance and replan distance must be positive");
  if (acc.spacing.gap_min >= acc.spacing.gap_max) throw InvalidSpec("acc gap_min must be below gap_max");
  if (!(acc.terminal_speed_deficit >= 0.0) || !(acc.catch_up_accel > 0.0))
    throw InvalidSpec("acc terminal window needs a non-negative deficit and positive catch-up rate");
  if (frenet.lane_speeds_kmh.empty()) throw InvalidSpec("frenet needs at least one lane");
  if (frenet.ego_lane < 0 || frenet.ego_lane >= static_cast<int>(frenet.lane_speeds_kmh.size()))
    throw InvalidSpec("frenet ego lane out of range");
  if (frenet.vehicles_per_lane < 0) throw InvalidSpec("negative vehicles per lane");
  if (!(frenet.first_vehicle_max >= frenet.first_vehicle_min))
    throw InvalidSpec("frenet first vehicle range is empty");
  if (weights) weights->validate();
  if (std::find(kAlgorithms.begin(), kAlgorithms.end(), algorithm) == kAlgorithms.end())
    throw InvalidSpec("unknown algorithm '" + algorithm + "'");
}

int ScenarioConfig::replan_steps() const { return static_cast<int>(std::lround(replan_time / dt)); }

ScenarioConfig make_config(const std::string& vehicle, const std::string& slope,
                           const std::string& algorithm) {
  ScenarioConfig c;
  c.vehicle = vehicle;
  c.params = dynamics::VehicleParams::by_name(vehicle);
  c.slope_name = slope;
  c.slope = dynamics::SlopeProfile::by_name(slope);
  c.algorithm = algorithm;
  c.validate();
  return c;
}

ScenarioConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidSpec("config must be a JSON object");
  static const std::vector<std::string> known{"vehicle", "slope",       "slope_file", "algorithm",
                                              "cycle",   "seed",        "dt",         "knots",
                                              "replan_time", "overrides", "scenario"};
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw InvalidSpec("unknown config key '" + k + "'");
  ScenarioConfig c;
  try {
    c.vehicle = j.value("vehicle", c.vehicle);
    c.params = dynamics::VehicleParams::by_name(c.vehicle);
    if (j.contains("slope_file")) {
      c.slope_name = "file";
      c.slope_file = j.at("slope_file").get<std::string>();
      c.slope = slope_from_csv(c.slope_file);
    } else {
      c.slope_name = j.value("slope", c.slope_name);
      c.slope = dynamics::SlopeProfile::by_name(c.slope_name);
    }
    c.algorithm = j.value("algorithm", c.algorithm);
    c.cycle = j.value("cycle", c.cycle);
    c.seed = j.value("seed", c.seed);
    c.dt = j.value("dt", c.dt);
    c.knots = j.value("knots", c.knots);
    c.replan_time = j.value("replan_time", c.replan_time);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidSpec(std::string("bad config value: ") + e.what());
  }
  if (j.contains("overrides")) {
    const auto& ov = j.at("overrides");
    if (!ov.is_object()) throw InvalidSpec("overrides must be an object");
    static const auto table = setters();
    double amplitude = c.slope.amplitude(), wavelength = c.slope.wavelength();
    bool reslope = false;
    for (const auto& [k, v] : ov.items()) {
      if (k == "slope.amplitude" || k == "slope.wavelength") {
        (k == "slope.amplitude" ? amplitude : wavelength) = number(v, k);
        reslope = true;
        continue;
      }
      auto it = table.find(k);
      if (it == table.end()) throw InvalidSpec("unknown override '" + k + "'");
      it->second(c, v);
    }
    if (reslope) {
      if (c.slope.kind() == dynamics::SlopeKind::custom || c.slope.kind() == dynamics::SlopeKind::flat)
        throw InvalidSpec("slope overrides need a rolling or steep profile");
      c.slope = dynamics::SlopeProfile::sine(c.slope.kind(), amplitude, wavelength);
    }
  }
  c.validate();
  return c;
}

nlohmann::json config_to_json(const ScenarioConfig& c) {
  nlohmann::json ov;
  const auto& p = c.params;
  ov["vehicle.mass"] = p.mass;
  ov["vehicle.frontal_area"] = p.frontal_area;
  ov["vehicle.air_density"] = p.air_density;
  ov["vehicle.drag_coeff"] = p.drag_coeff;
  ov["vehicle.rolling_coeff"] = p.rolling_coeff;
  ov["vehicle.gravity"] = p.gravity;
  ov["vehicle.v_max"] = p.limits.v_max;
  ov["vehicle.a_v_max"] = p.limits.a_v_max;
  ov["vehicle.a_b_max"] = p.limits.a_b_max;
  ov["vehicle.a_t_max"] = p.limits.a_t_max;
  ov["vehicle.j_max"] = p.limits.j_max;
  ov["vehicle.fuel_density"] = p.fuel.fuel_density;
  for (int i = 0; i < 5; ++i) ov["fuel.o" + std::to_string(i)] = p.fuel.o[i];
  for (int i = 0; i < 3; ++i) ov["fuel.c" + std::to_string(i)] = p.fuel.c[i];
  if (c.slope.kind() == dynamics::SlopeKind::rolling || c.slope.kind() == dynamics::SlopeKind::steep) {
    ov["slope.amplitude"] = c.slope.amplitude();
    ov["slope.wavelength"] = c.slope.wavelength();
  }
  ov["acc.time_headway"] = c.acc.spacing.time_headway;
  ov["acc.gap_min"] = c.acc.spacing.gap_min;
  ov["acc.gap_max"] = c.acc.spacing.gap_max;
  ov["acc.gap_relax"] = c.acc.spacing.gap_relax;
  ov["acc.terminal_speed_deficit"] = c.acc.terminal_speed_deficit;
  ov["acc.catch_up_accel"] = c.acc.catch_up_accel;
  ov["png.v_d"] = c.png.v_d;
  ov["png.distance"] = c.png.distance;
  ov["png.replan_distance"] = c.png.replan_distance;
  ov["frenet.lane_width"] = c.frenet.lane_width;
  ov["frenet.lane_speeds_kmh"] = c.frenet.lane_speeds_kmh;
  ov["frenet.vehicles_per_lane"] = c.frenet.vehicles_per_lane;
  ov["frenet.vehicle_spacing"] = c.frenet.vehicle_spacing;
  ov["frenet.ego_lane"] = c.frenet.ego_lane;
  ov["frenet.ego_speed_kmh"] = c.frenet.ego_speed_kmh;
  ov["frenet.v_d"] = c.frenet.v_d;
  ov["frenet.distance"] = c.frenet.distance;
  ov["frenet.r_safe"] = c.frenet.safety.r_safe;
  ov["frenet.kappa_max"] = c.frenet.safety.kappa_max;
  ov["solver.max_iter"] = c.solver.max_iter;
  ov["solver.tol_feas"] = c.solver.tol_feas;
  ov["solver.tol_opt"] = c.solver.tol_opt;
  if (c.weights) {
    ov["weights.w_v"] = c.weights->w_v;
    ov["weights.w_a"] = c.weights->w_a;
    ov["weights.w_b"] = c.weights->w_b;
    ov["weights.w_j"] = c.weights->w_j;
    ov["weights.w_f"] = c.weights->w_f;
    ov["weights.v_d"] = c.weights->v_d;
  }
  nlohmann::json j{{"vehicle", c.vehicle},   {"algorithm", c.algorithm}, {"cycle", c.cycle},
                   {"seed", c.seed},         {"dt", c.dt},               {"knots", c.knots},
                   {"replan_time", c.replan_time}, {"overrides", ov}};
  if (c.slope_name == "file")
    j["slope_file"] = c.slope_file;
  else
    j["slope"] = c.slope_name;
  return j;
}

}  // namespace emato::scenarios
