#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "emato/dynamics/slope_profile.hpp"
#include "emato/dynamics/vehicle_params.hpp"
#include "emato/optimizer/interior_point.hpp"
#include "emato/optimizer/problem.hpp"
#include "emato/polytraj/candidate.hpp"
#include "emato/polytraj/trajectory.hpp"

namespace emato::scenarios {

struct PngParams {
  double v_d = 20.0;             // m/s
  double distance = 900.0;       // m
  double replan_distance = 150.0;  // m, planned and executed per rollout
  std::vector<double> speed_offsets{-2.5, -2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
};

struct AccScenarioParams {
  optimizer::AccParams spacing;
  std::vector<double> gap_offsets{0.0, 2.5, 5.0, 10.0};
  std::vector<double> speed_offsets{-1.0, -0.5, 0.0, 0.5, 1.0};
  /// Terminal window of the tracking variant: the end speed may trail the
  /// leader by at most this much, and the end gap keeps room to catch up at
  /// catch_up_accel without crossing gap_max.
  double terminal_speed_deficit = 3.0;  // m/s
  double catch_up_accel = 1.0;          // m/s^2
};

struct FrenetParams {
  double lane_width = 3.5;
  std::vector<double> lane_speeds_kmh{50.0, 56.0, 60.0};
  int vehicles_per_lane = 2;
  double vehicle_spacing = 120.0;  // m between vehicles of one lane
  double first_vehicle_min = 25.0;  // m ahead of the ego, seeded within [min, max]
  double first_vehicle_max = 85.0;
  int ego_lane = 1;
  double ego_speed_kmh = 50.0;
  double v_d = 19.44;            // m/s
  double distance = 2200.0;      // m on the road coordinate
  std::vector<double> speed_offsets{-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0};
  polytraj::SafetyGeometry safety;
};

/// Everything one closed-loop run needs. Algorithms: cc, png, energy-quintic
/// (1D course); quintic, emato-b, emato-r, emato-v (ACC); qf-v, qf-m, qf-e,
/// emato-fv, emato-fm, emato-fe (Frenet).
struct ScenarioConfig {
  std::string vehicle = "truck";
  dynamics::VehicleParams params = dynamics::VehicleParams::truck();
  std::string slope_name = "flat";
  dynamics::SlopeProfile slope = dynamics::SlopeProfile::flat();
  std::string slope_file;  // set when slope_name is "file"
  std::string algorithm = "png";
  double dt = 0.1;
  int knots = 50;
  double replan_time = 1.0;  // s, ACC and Frenet
  std::string cycle = "highway-short";
  std::uint64_t seed = 7;
  PngParams png;
  AccScenarioParams acc;
  FrenetParams frenet;
  /// Replaces the algorithm's default refinement weights when set.
  std::optional<polytraj::Weights> weights;
  optimizer::SolverOptions solver;

  /// Throws InvalidSpec on inconsistent horizon or replan settings.
  void validate() const;
  int replan_steps() const;
  double horizon() const { return (knots - 1) * dt; }
};

ScenarioConfig make_config(const std::string& vehicle, const std::string& slope,
                           const std::string& algorithm);

/// Reads a config document: top-level keys vehicle, slope, algorithm, cycle,
/// seed, dt, knots, replan_time, plus an "overrides" object whose keys
/// follow the parameter names (e.g. "acc.time_headway", "vehicle.mass",
/// "weights.w_f"). Throws InvalidSpec on unknown keys or bad values.
ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& cfg);

}  // namespace emato::scenarios
