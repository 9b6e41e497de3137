#pragma once

#include "emato/dynamics/vehicle_params.hpp"

namespace emato::dynamics {

/// Kinematic state on the path coordinate.
struct KinState {
  double l = 0.0;    // path distance (m)
  double v = 0.0;    // speed (m/s)
  double a_v = 0.0;  // apparent acceleration (m/s^2)
};

/// Aero drag, rolling resistance and grade, expressed as an acceleration:
/// a_r = k1 v^2 + k2 cos(theta) + k3 sin(theta).
double resistance_accel(double v, double theta, const VehicleParams& p);

/// d a_r / d v.
double resistance_accel_dv(double v, const VehicleParams& p);

/// a_t = a_v + a_r + a_b.
inline double traction_accel(double a_v, double a_r, double a_b) { return a_v + a_r + a_b; }

struct StepResult {
  KinState state;
  bool clamped = false;  // speed would have gone negative
};

/// Exact constant-jerk update over dt. If the speed crosses zero inside the
/// step, the vehicle is held at the stopping point with v = a_v = 0.
StepResult integrate_state(const KinState& x, double jerk, double dt);

}  // namespace emato::dynamics
