#include "emato/polytraj/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "emato/dynamics/longitudinal.hpp"
#include "emato/error.hpp"

namespace emato::polytraj {

double PathTrajectory::fuel() const {
  double total = 0.0;
  for (std::size_t k = 1; k < z.size(); ++k) total += 0.5 * dt * (z[k - 1].f_r + z[k].f_r);
  return total;
}

void Weights::validate() const {
  if (w_v < 0 || w_a < 0 || w_b < 0 || w_j < 0 || w_f < 0)
    throw InvalidSpec("objective weights must be non-negative");
  if (v_d < 0) throw InvalidSpec("desired speed must be non-negative");
}

Weights Weights::pulse_and_glide(double v_d) { return {0.0, 1e-4, 1e-4, 1e-4, 35.0, v_d}; }
Weights Weights::holistic_acc() { return {0.0, 14.51, 14.51, 1.16, 38.91, 0.0}; }
Weights Weights::holistic_acc_tracking() { return {0.01, 14.51, 14.51, 1.16, 38.91, 0.0}; }
Weights Weights::frenet_speed(double v_d) { return {1.0, 0.0, 0.0, 0.0, 0.0, v_d}; }
Weights Weights::frenet_mixed(double v_d) { return {1.0, 0.0, 0.0, 0.001, 100.0, v_d}; }
Weights Weights::frenet_energy() { return {0.0, 0.0, 0.0, 0.0, 1.0, 0.0}; }
Weights Weights::jerk_only() { return {0.0, 0.0, 0.0, 1.16, 0.0, 0.0}; }
Weights Weights::general() { return {0.0, 9.51, 9.51, 1.16, 0.0, 0.0}; }
Weights Weights::efficiency() { return {0.0, 0.0, 0.0, 0.0, 1.0, 0.0}; }
Weights Weights::holistic() { return {0.0, 9.51, 9.51, 1.16, 38.91, 0.0}; }

double evaluate_objective(const PathTrajectory& traj, const Weights& w,
                          std::span<const double> v_ref) {
  if (traj.u.size() != traj.z.size()) throw AlignmentError("observation/control length mismatch");
  if (!v_ref.empty() && v_ref.size() != traj.z.size())
    throw AlignmentError("reference speed length mismatch");
  double J = 0.0;
  for (std::size_t k = 0; k < traj.z.size(); ++k) {
    const auto& z = traj.z[k];
    const auto& u = traj.u[k];
    const double vd = v_ref.empty() ? w.v_d : v_ref[k];
    const double ev = z.v - vd;
    J += traj.dt * (w.w_v * ev * ev + w.w_a * z.a_v * z.a_v + w.w_b * u.a_b * u.a_b +
                    w.w_j * z.jerk * z.jerk + w.w_f * z.f_r / std::max(z.v, kSpeedGuard));
  }
  return J;
}

std::vector<double> differentiate(std::span<const double> x, double dt) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  if (n == 2) {
    d[0] = d[1] = (x[1] - x[0]) / dt;
    return d;
  }
  d[0] = (-3 * x[0] + 4 * x[1] - x[2]) / (2 * dt);
  for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (x[k + 1] - x[k - 1]) / (2 * dt);
  d[n - 1] = (3 * x[n - 1] - 4 * x[n - 2] + x[n - 3]) / (2 * dt);
  return d;
}

void complete_path(PathTrajectory& traj, std::span<const double> slope_coords,
                   const dynamics::SlopeProfile& slope, const dynamics::VehicleParams& params) {
  if (slope_coords.size() != traj.z.size()) throw AlignmentError("slope coordinate length mismatch");
  for (std::size_t k = 0; k < traj.z.size(); ++k) traj.z[k].theta = slope.grade(slope_coords[k]);
  refresh_derived(traj, params);
}

void refresh_derived(PathTrajectory& traj, const dynamics::VehicleParams& params) {
  traj.u.resize(traj.z.size());
  for (std::size_t k = 0; k < traj.z.size(); ++k) {
    auto& z = traj.z[k];
    z.a_r = dynamics::resistance_accel(z.v, z.theta, params);
    const double net = z.a_v + z.a_r;
    traj.u[k] = {std::max(0.0, net), std::max(0.0, -net)};
    z.f_r = powertrain::fuel_rate(params.fuel, z.v, traj.u[k].a_t);
  }
}

PathTrajectory path_from_quintic(const QuinticSegment& seg, std::size_t n, double dt,
                                 const dynamics::SlopeProfile& slope,
                                 const dynamics::VehicleParams& params) {
  PathTrajectory traj;
  traj.dt = dt;
  traj.z.resize(n);
  std::vector<double> coords(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    auto& z = traj.z[k];
    z.l = seg.pos(t);
    z.v = seg.vel(t);
    z.a_v = seg.acc(t);
    z.jerk = seg.jerk(t);
    coords[k] = z.l;
  }
  complete_path(traj, coords, slope, params);
  return traj;
}

}  // namespace emato::polytraj
