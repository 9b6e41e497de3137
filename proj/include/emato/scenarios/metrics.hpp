#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "emato/optimizer/problem.hpp"
#include "emato/polytraj/candidate.hpp"

namespace emato::scenarios {

inline constexpr double kMileM = 1609.344;
inline constexpr double kGallonMl = 3785.412;

/// mpg from mL/m. Throws UndefinedEfficiency on non-positive input.
double mpg_from_ml_per_m(double ml_per_m);

/// Desired ACC spacing T_h v_l + dl_s.
double acc_spacing(double v_leader, double time_headway, double gap_min);

struct Metrics {
  double distance = 0.0;      // m
  double duration = 0.0;      // s
  double avg_speed = 0.0;     // m/s
  double mean_sq_jerk = 0.0;  // (m/s^3)^2
  double mean_abs_jerk = 0.0;  // m/s^3
  double total_fuel = 0.0;    // mL
  double ml_per_m = 0.0;
  double mpg = 0.0;
};

/// Metrics of executed steps of length dt. Fuel and jerk use the rectangle
/// rule (each row holds over its step). Throws InvalidArgument on an empty
/// run and UndefinedEfficiency when the distance is not positive.
Metrics compute_metrics(std::span<const polytraj::ExportRow> steps, double dt, double distance);

struct Event {
  double t = 0.0;
  std::string kind;
  std::string detail;
};

/// Stitched closed-loop run. `steps` holds one row per executed dt step.
struct RunResult {
  std::string name;
  std::string algorithm;
  double dt = 0.1;
  std::vector<polytraj::ExportRow> steps;
  std::vector<double> gap;        // leader gap per step (ACC)
  std::vector<double> clearance;  // min agent distance per step (Frenet)
  std::vector<double> rollout_fuel;
  std::vector<optimizer::SolveStats> solves;
  std::vector<Event> events;
  Metrics metrics;
  int collisions = 0;
  int gap_violations = 0;

  double min_gap() const;
  double min_clearance() const;
  double mean_solve_time() const;
  std::size_t count_events(const std::string& kind) const;
};

/// Metrics, counts and events; no wall-clock values, so repeated runs give
/// identical documents.
nlohmann::json metrics_json(const RunResult& r);
/// Metrics plus per-rollout solve statistics including timings.
nlohmann::json run_json(const RunResult& r);
/// Executed steps in the trajectory export schema.
void write_steps_csv(std::ostream& out, const RunResult& r);

}  // namespace emato::scenarios
