#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "emato/polytraj/candidate.hpp"
#include "emato/polytraj/reference_line.hpp"
#include "emato/scenarios/config.hpp"
#include "emato/scenarios/cycle.hpp"
#include "emato/scenarios/metrics.hpp"
#include "emato/traffic.hpp"

namespace emato::scenarios {

struct PngResults {
  RunResult cc;
  RunResult emato;
  RunResult energy_quintic;
};

/// 1D course at the desired speed, replanned every replan_distance metres.
/// All three runs end at the same path coordinate.
PngResults run_cc_png(const ScenarioConfig& cfg);

/// Car following behind a leader that drives the cycle. The ego starts at
/// the desired spacing at the leader's initial speed and runs until the
/// cycle is exhausted.
RunResult run_acc(const ScenarioConfig& cfg, const DrivingCycle& cycle);

/// Constant-speed traffic on a straight multi-lane road.
struct FrenetTraffic {
  struct Vehicle {
    int id = 0;
    int lane = 0;
    double s0 = 0.0;  // m at t = 0
    double d = 0.0;   // lateral offset
    double v = 0.0;   // m/s along the road
  };
  std::vector<Vehicle> vehicles;

  /// Seeded layout: per lane, the first vehicle sits uniformly within
  /// [first_vehicle_min, first_vehicle_max] ahead of the ego and the others
  /// follow at vehicle_spacing.
  static FrenetTraffic layout(const FrenetParams& p, std::uint64_t seed);
  /// Constant-velocity prediction over n knots starting at time t0.
  TrafficPrediction predict(const polytraj::ReferenceLine& ref, double t0, std::size_t n,
                            double dt) const;
};

/// Road used by the Frenet scenario: straight, lanes centred at
/// (i - ego_lane) * lane_width.
polytraj::ReferenceLine frenet_road(const FrenetParams& p);

RunResult run_frenet(const ScenarioConfig& cfg, const FrenetTraffic& traffic);

struct SafetyCheck {
  bool accept = true;
  double xi = 0.0;         // max waypoint displacement (m)
  double clearance = 0.0;  // min reference clearance over the horizon (m)
};

/// Accepts a time-reallocated trajectory when its largest waypoint shift
/// plus the safety radius fits inside the smallest clearance between the
/// reference and any predicted agent.
SafetyCheck homotopy_safety_check(std::span<const polytraj::GlobalPoint> opt,
                                  std::span<const polytraj::GlobalPoint> ref,
                                  const TrafficPrediction& traffic, double r_safe);

/// Places an optimized path-coordinate trajectory on a candidate's planar
/// path: each knot's l maps to the candidate's time through its chord
/// lengths, and the point is the candidate's quintic at that time.
std::vector<polytraj::GlobalPoint> place_on_path(const polytraj::Candidate& cand,
                                                 const polytraj::PathTrajectory& opt,
                                                 const polytraj::ReferenceLine& road);

/// Dispatches on cfg.algorithm. PnG algorithms return the matching member
/// of run_cc_png.
RunResult run_scenario(const ScenarioConfig& cfg, const DrivingCycle& cycle);

struct MatrixCell {
  std::string scenario;  // acc or frenet
  std::string vehicle;
  std::string slope;
  std::string algorithm;

  std::string key() const;
};

struct CellResult {
  MatrixCell cell;
  bool ok = false;
  std::string error;
  RunResult run;
};

/// vehicles x slopes x algorithms for one scenario family.
std::vector<MatrixCell> make_matrix(const std::string& scenario,
                                    const std::vector<std::string>& vehicles,
                                    const std::vector<std::string>& slopes,
                                    const std::vector<std::string>& algorithms);
std::vector<MatrixCell> acc_matrix();
std::vector<MatrixCell> frenet_matrix();

/// Runs independent cells; `base` supplies everything but vehicle, slope and
/// algorithm. Results come back in cell order. Failed cells carry the error.
std::vector<CellResult> run_matrix(std::span<const MatrixCell> cells, const ScenarioConfig& base,
                                   const DrivingCycle& cycle, int jobs = 0);
std::vector<CellResult> run_matrix_serial(std::span<const MatrixCell> cells,
                                          const ScenarioConfig& base, const DrivingCycle& cycle);

/// Baseline algorithm each EMATO variant is compared against; empty for
/// baselines themselves.
std::string baseline_of(const std::string& algorithm);

/// One row per EMATO cell whose baseline ran in the same vehicle and slope:
/// scenario,vehicle,slope,algorithm,baseline,mpg,baseline_mpg,improvement_pct.
void write_improvement_csv(std::ostream& out, std::span<const CellResult> results);

/// Number of local extrema in a sequence: sign changes of the first
/// difference, ignoring differences with magnitude <= eps.
int count_extrema(std::span<const double> x, double eps = 1e-6);

}  // namespace emato::scenarios
