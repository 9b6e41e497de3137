#pragma once

#include <span>
#include <vector>

#include "emato/dynamics/slope_profile.hpp"
#include "emato/dynamics/vehicle_params.hpp"
#include "emato/polytraj/quintic.hpp"

namespace emato::polytraj {

/// Observation on the path coordinate at one knot.
struct PathPoint {
  double l = 0.0;
  double v = 0.0;
  double a_v = 0.0;
  double jerk = 0.0;
  double theta = 0.0;
  double a_r = 0.0;
  double f_r = 0.0;  // mL/s
};

struct ControlPoint {
  double a_t = 0.0;
  double a_b = 0.0;
};

/// Knot-sampled trajectory on the path coordinate; z and u share one length.
struct PathTrajectory {
  double dt = 0.1;
  std::vector<PathPoint> z;
  std::vector<ControlPoint> u;

  std::size_t size() const { return z.size(); }
  /// Trapezoidal fuel over the knots (mL).
  double fuel() const;
};

/// Objective weights and the desired speed.
struct Weights {
  double w_v = 0.0;
  double w_a = 0.0;
  double w_b = 0.0;
  double w_j = 0.0;
  double w_f = 0.0;
  double v_d = 0.0;

  /// Throws InvalidSpec on negative weights.
  void validate() const;

  static Weights pulse_and_glide(double v_d);
  static Weights holistic_acc();
  /// Holistic weights with light leader-speed tracking.
  static Weights holistic_acc_tracking();
  static Weights frenet_speed(double v_d = 19.44);
  static Weights frenet_mixed(double v_d = 19.44);
  static Weights frenet_energy();
  static Weights jerk_only();
  static Weights general();
  static Weights efficiency();
  static Weights holistic();
};

/// Lower guard on the speed dividing fuel rate in the efficiency term.
inline constexpr double kSpeedGuard = 0.1;

/// Sum over knots of dt * (w_v (v - v_d)^2 + w_a a_v^2 + w_b a_b^2 + w_j j^2
/// + w_f f_r / max(v, kSpeedGuard)). A non-empty v_ref replaces v_d per knot.
double evaluate_objective(const PathTrajectory& traj, const Weights& w,
                          std::span<const double> v_ref = {});

/// Second-order finite differences: central inside, one-sided at both ends.
std::vector<double> differentiate(std::span<const double> x, double dt);

/// Fills theta, a_r, f_r and the controls from (l, v, a_v) using the grade
/// at the given slope coordinates. Traction and brake never overlap:
/// a_t = max(0, a_v + a_r), a_b = max(0, -(a_v + a_r)).
void complete_path(PathTrajectory& traj, std::span<const double> slope_coords,
                   const dynamics::SlopeProfile& slope, const dynamics::VehicleParams& params);

/// Recomputes a_r, the controls and f_r from (v, a_v, theta) already stored.
void refresh_derived(PathTrajectory& traj, const dynamics::VehicleParams& params);

/// Samples a longitudinal quintic at n knots; the polynomial is the path
/// coordinate itself, so derivatives are analytic and the grade is read at l.
PathTrajectory path_from_quintic(const QuinticSegment& seg, std::size_t n, double dt,
                                 const dynamics::SlopeProfile& slope,
                                 const dynamics::VehicleParams& params);

}  // namespace emato::polytraj
