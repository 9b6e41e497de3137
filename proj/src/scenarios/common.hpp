#pragma once

#include <vector>

#include "emato/dynamics/longitudinal.hpp"
#include "emato/dynamics/slope_profile.hpp"
#include "emato/dynamics/vehicle_params.hpp"
#include "emato/polytraj/trajectory.hpp"
#include "emato/scenarios/metrics.hpp"

namespace emato::scenarios::detail {

inline dynamics::KinState knot_state(const polytraj::PathTrajectory& plan, std::size_t k) {
  const auto& z = plan.z[k];
  return {z.l, z.v, z.a_v};
}

inline polytraj::ExportRow row_1d(const polytraj::PathTrajectory& plan, std::size_t k, double t) {
  const auto& z = plan.z[k];
  const auto& u = plan.u[k];
  polytraj::ExportRow r;
  r.t = t;
  r.x = r.s = r.l = z.l;
  r.v = z.v;
  r.a_v = z.a_v;
  r.j = z.jerk;
  r.theta = z.theta;
  r.a_r = z.a_r;
  r.a_t = u.a_t;
  r.a_b = u.a_b;
  r.f_r = z.f_r;
  return r;
}

/// Appends rows 0..steps-1 of the plan and records the rollout fuel.
inline void execute_1d(const polytraj::PathTrajectory& plan, std::size_t steps, double& t,
                       RunResult& out) {
  double fuel = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    out.steps.push_back(row_1d(plan, k, t));
    fuel += plan.z[k].f_r * plan.dt;
    t += plan.dt;
  }
  out.rollout_fuel.push_back(fuel);
}

inline polytraj::PathTrajectory tail(const polytraj::PathTrajectory& plan, std::size_t from) {
  polytraj::PathTrajectory t;
  t.dt = plan.dt;
  t.z.assign(plan.z.begin() + static_cast<std::ptrdiff_t>(from), plan.z.end());
  t.u.assign(plan.u.begin() + static_cast<std::ptrdiff_t>(from), plan.u.end());
  return t;
}

inline std::vector<double> path_coords(const polytraj::PathTrajectory& plan) {
  std::vector<double> l;
  l.reserve(plan.size());
  for (const auto& z : plan.z) l.push_back(z.l);
  return l;
}

/// Jerk-limited braking to a standstill at 90% of the brake limit.
polytraj::PathTrajectory braking_plan(dynamics::KinState x, std::size_t n, double dt,
                                      const dynamics::SlopeProfile& slope,
                                      const dynamics::VehicleParams& params);

/// Constant speed v on the path from l0, n knots.
polytraj::PathTrajectory cruise_plan(double l0, double v, std::size_t n, double dt,
                                     const dynamics::SlopeProfile& slope,
                                     const dynamics::VehicleParams& params);

}  // namespace emato::scenarios::detail
