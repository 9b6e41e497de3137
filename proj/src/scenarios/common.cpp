#include "common.hpp"

#include <algorithm>

namespace emato::scenarios::detail {

namespace {

void finish(polytraj::PathTrajectory& traj, const dynamics::SlopeProfile& slope,
            const dynamics::VehicleParams& params) {
  for (auto& z : traj.z) z.theta = slope.grade(z.l);
  traj.u.assign(traj.z.size(), {});
  polytraj::refresh_derived(traj, params);
}

}  // namespace

polytraj::PathTrajectory braking_plan(dynamics::KinState x, std::size_t n, double dt,
                                      const dynamics::SlopeProfile& slope,
                                      const dynamics::VehicleParams& params) {
  const double target = -0.9 * params.limits.a_b_max;
  const double jmax = params.limits.j_max;
  polytraj::PathTrajectory traj;
  traj.dt = dt;
  for (std::size_t k = 0; k < n; ++k) {
    polytraj::PathPoint z;
    z.l = x.l;
    z.v = x.v;
    z.a_v = x.a_v;
    if (k + 1 < n) {
      const double goal = x.v > 0.0 ? target : 0.0;
      z.jerk = std::clamp((goal - x.a_v) / dt, -jmax, jmax);
      x = dynamics::integrate_state(x, z.jerk, dt).state;
    }
    traj.z.push_back(z);
  }
  finish(traj, slope, params);
  return traj;
}

polytraj::PathTrajectory cruise_plan(double l0, double v, std::size_t n, double dt,
                                     const dynamics::SlopeProfile& slope,
                                     const dynamics::VehicleParams& params) {
  polytraj::PathTrajectory traj;
  traj.dt = dt;
  for (std::size_t k = 0; k < n; ++k) {
    polytraj::PathPoint z;
    z.l = l0 + v * dt * static_cast<double>(k);
    z.v = v;
    traj.z.push_back(z);
  }
  finish(traj, slope, params);
  return traj;
}

}  // namespace emato::scenarios::detail
