#include "emato/scenarios/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "emato/error.hpp"

namespace emato::scenarios {

double mpg_from_ml_per_m(double ml_per_m) {
  if (!(ml_per_m > 0.0)) throw UndefinedEfficiency("fuel per distance must be positive");
  return (kGallonMl / kMileM) / ml_per_m;
}

double acc_spacing(double v_leader, double time_headway, double gap_min) {
  return time_headway * v_leader + gap_min;
}

Metrics compute_metrics(std::span<const polytraj::ExportRow> steps, double dt, double distance) {
  if (steps.empty()) throw InvalidArgument("metrics of an empty run");
  if (!(distance > 0.0)) throw UndefinedEfficiency("run covered no distance");
  Metrics m;
  m.distance = distance;
  m.duration = static_cast<double>(steps.size()) * dt;
  m.avg_speed = distance / m.duration;
  double sq = 0.0, ab = 0.0, fuel = 0.0;
  for (const auto& r : steps) {
    sq += r.j * r.j;
    ab += std::abs(r.j);
    fuel += r.f_r * dt;
  }
  const double n = static_cast<double>(steps.size());
  m.mean_sq_jerk = sq / n;
  m.mean_abs_jerk = ab / n;
  m.total_fuel = fuel;
  m.ml_per_m = fuel / distance;
  m.mpg = m.ml_per_m > 0.0 ? mpg_from_ml_per_m(m.ml_per_m) : std::numeric_limits<double>::infinity();
  return m;
}

double RunResult::min_gap() const {
  if (gap.empty()) return std::numeric_limits<double>::infinity();
  return *std::min_element(gap.begin(), gap.end());
}

double RunResult::min_clearance() const {
  if (clearance.empty()) return std::numeric_limits<double>::infinity();
  return *std::min_element(clearance.begin(), clearance.end());
}

double RunResult::mean_solve_time() const {
  if (solves.empty()) return 0.0;
  double t = 0.0;
  for (const auto& s : solves) t += s.wall_time;
  return t / static_cast<double>(solves.size());
}

std::size_t RunResult::count_events(const std::string& kind) const {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [&](const Event& e) { return e.kind == kind; }));
}

namespace {

nlohmann::json finite_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

nlohmann::json metrics_body(const RunResult& r) {
  const auto& m = r.metrics;
  nlohmann::json j;
  j["name"] = r.name;
  j["algorithm"] = r.algorithm;
  j["metrics"] = {{"distance_m", m.distance},
                  {"duration_s", m.duration},
                  {"avg_speed_mps", m.avg_speed},
                  {"mean_sq_jerk", m.mean_sq_jerk},
                  {"mean_abs_jerk", m.mean_abs_jerk},
                  {"total_fuel_ml", m.total_fuel},
                  {"ml_per_m", m.ml_per_m},
                  {"mpg", finite_or_null(m.mpg)}};
  j["steps"] = r.steps.size();
  j["rollouts"] = r.rollout_fuel.size();
  j["solves"] = r.solves.size();
  int failed = 0;
  for (const auto& s : r.solves) failed += s.status != optimizer::SolveStatus::solved;
  j["failed_solves"] = failed;
  j["min_gap_m"] = finite_or_null(r.min_gap());
  j["min_clearance_m"] = finite_or_null(r.min_clearance());
  j["collisions"] = r.collisions;
  j["gap_violations"] = r.gap_violations;
  auto ev = nlohmann::json::array();
  for (const auto& e : r.events) ev.push_back({{"t", e.t}, {"kind", e.kind}, {"detail", e.detail}});
  j["events"] = ev;
  return j;
}

}  // namespace

nlohmann::json metrics_json(const RunResult& r) { return metrics_body(r); }

nlohmann::json run_json(const RunResult& r) {
  auto j = metrics_body(r);
  j["mean_solve_time_s"] = r.mean_solve_time();
  auto solves = nlohmann::json::array();
  for (const auto& s : r.solves)
    solves.push_back({{"status", optimizer::to_string(s.status)},
                      {"iterations", s.iterations},
                      {"wall_time_s", s.wall_time},
                      {"objective", s.objective},
                      {"max_violation", s.max_violation},
                      {"diagnostic", s.diagnostic}});
  j["solve_stats"] = solves;
  j["rollout_fuel_ml"] = r.rollout_fuel;
  return j;
}

void write_steps_csv(std::ostream& out, const RunResult& r) {
  polytraj::write_csv_header(out);
  for (const auto& row : r.steps) polytraj::write_csv_row(out, row);
}

}  // namespace emato::scenarios
