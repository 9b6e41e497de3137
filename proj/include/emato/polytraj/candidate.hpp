#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "emato/polytraj/quintic.hpp"
#include "emato/polytraj/reference_line.hpp"
#include "emato/polytraj/trajectory.hpp"
#include "emato/traffic.hpp"

namespace emato::polytraj {

struct GlobalPoint {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
  double curvature = 0.0;
};

enum class Infeasibility { none, collision, overjerky, overcurvy, limits };
const char* to_string(Infeasibility v);

/// Thresholds for the feasibility filter.
struct SafetyGeometry {
  double r_safe = 3.0;     // m, minimum center distance to any agent
  double kappa_max = 0.2;  // 1/m
};

/// One sampled motion. Longitudinal-only candidates leave `global` empty and
/// carry d = 0; every per-knot vector has the same length.
struct Candidate {
  std::size_t index = 0;
  QuinticSegment s_seg;
  QuinticSegment d_seg;
  bool lateral = false;
  std::vector<double> s;
  std::vector<double> d;
  std::vector<GlobalPoint> global;
  PathTrajectory path;
  Infeasibility verdict = Infeasibility::none;

  bool feasible() const { return verdict == Infeasibility::none; }
  std::size_t size() const { return path.size(); }
};

/// Samples both quintics at n knots and maps them to the plane; yaw and
/// curvature come from differences of the mapped positions.
std::vector<GlobalPoint> frenet_to_global(const QuinticSegment& s_seg, const QuinticSegment& d_seg,
                                          const ReferenceLine& ref, std::size_t n, double dt);

/// Path-coordinate trajectory of a planar motion: l accumulates the chord
/// lengths from l0 and v, a_v, j follow by differences; the grade is read at
/// the road coordinates `road_s`.
PathTrajectory to_path_trajectory(std::span<const GlobalPoint> global,
                                  std::span<const double> road_s, double l0, double dt,
                                  const dynamics::SlopeProfile& slope,
                                  const dynamics::VehicleParams& params);

Candidate make_longitudinal_candidate(std::size_t index, const QuinticSegment& seg, std::size_t n,
                                      double dt, const dynamics::SlopeProfile& slope,
                                      const dynamics::VehicleParams& params);

Candidate make_frenet_candidate(std::size_t index, const QuinticSegment& s_seg,
                                const QuinticSegment& d_seg, const ReferenceLine& ref,
                                std::size_t n, double dt, double l0,
                                const dynamics::SlopeProfile& slope,
                                const dynamics::VehicleParams& params);

/// First violated reason in time order; within a knot the order is
/// collision, overjerky, overcurvy, limits. Agents are compared in the
/// plane, or on l for longitudinal-only candidates. Throws AlignmentError
/// when the prediction does not share the candidate's dt and length.
Infeasibility feasibility_check(const Candidate& cand, const dynamics::VehicleParams& params,
                                const TrafficPrediction& traffic,
                                const SafetyGeometry& geometry = {});

/// Writes verdicts for every candidate.
void check_candidates(std::span<Candidate> cands, const dynamics::VehicleParams& params,
                      const TrafficPrediction& traffic, const SafetyGeometry& geometry = {});
void check_candidates_serial(std::span<Candidate> cands, const dynamics::VehicleParams& params,
                             const TrafficPrediction& traffic,
                             const SafetyGeometry& geometry = {});

/// Objective per candidate; infeasible candidates cost +infinity.
std::vector<double> candidate_costs(std::span<const Candidate> cands, const Weights& w,
                                    std::span<const double> v_ref = {});
std::vector<double> candidate_costs_serial(std::span<const Candidate> cands, const Weights& w,
                                           std::span<const double> v_ref = {});

/// Position of the feasible candidate with the lowest objective; ties go to
/// the smaller grid index. Throws NoFeasibleCandidate.
std::size_t select_candidate(std::span<const Candidate> cands, const Weights& w,
                             std::span<const double> v_ref = {});

/// One row of the trajectory export.
struct ExportRow {
  double t = 0.0, x = 0.0, y = 0.0, yaw = 0.0, s = 0.0, d = 0.0, l = 0.0, v = 0.0, a_v = 0.0,
         j = 0.0, theta = 0.0, a_r = 0.0, a_t = 0.0, a_b = 0.0, f_r = 0.0;
};

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const ExportRow& row);
std::vector<ExportRow> export_rows(const Candidate& cand, double t0 = 0.0);
void write_candidate_csv(std::ostream& out, const Candidate& cand, double t0 = 0.0);

}  // namespace emato::polytraj
