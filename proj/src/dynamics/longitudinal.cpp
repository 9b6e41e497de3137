#include "emato/dynamics/longitudinal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "emato/error.hpp"

namespace emato::dynamics {

void VehicleParams::validate() const {
  const double vals[] = {mass, frontal_area, air_density, drag_coeff, rolling_coeff, gravity,
                         limits.v_max, limits.a_v_max, limits.a_b_max, limits.a_t_max,
                         limits.j_max};
  for (double x : vals) {
    if (!(x > 0.0) || !std::isfinite(x))
      throw InvalidSpec("vehicle '" + name + "': constants and limits must be positive");
  }
}

VehicleParams VehicleParams::sedan() {
  VehicleParams p;
  p.name = "sedan";
  p.mass = 1200.0;
  p.frontal_area = 2.5;
  p.air_density = 1.184;
  p.drag_coeff = 0.32;
  p.rolling_coeff = 0.015;
  p.gravity = 9.81;
  p.limits = DynamicLimits{27.0, 2.0, 5.0, 3.0, 10.0};
  p.fuel = powertrain::FuelCoeffs::sedan_appendix();
  return p;
}

VehicleParams VehicleParams::truck() {
  VehicleParams p;
  p.name = "truck";
  p.limits = DynamicLimits{27.0, 2.0, 5.0, 3.0, 5.0};
  return p;
}

VehicleParams VehicleParams::by_name(const std::string& name) {
  if (name == "sedan") return sedan();
  if (name == "truck") return truck();
  throw InvalidSpec("unknown vehicle '" + name + "' (expected sedan or truck)");
}

double resistance_accel(double v, double theta, const VehicleParams& p) {
  return p.k1() * v * v + p.k2() * std::cos(theta) + p.k3() * std::sin(theta);
}

double resistance_accel_dv(double v, const VehicleParams& p) { return 2.0 * p.k1() * v; }

StepResult integrate_state(const KinState& x, double jerk, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("integrate_state: dt must be positive");

  const auto advance = [&](double t) {
    KinState s;
    s.a_v = x.a_v + jerk * t;
    s.v = x.v + x.a_v * t + 0.5 * jerk * t * t;
    s.l = x.l + x.v * t + 0.5 * x.a_v * t * t + jerk * t * t * t / 6.0;
    return s;
  };

  StepResult out{advance(dt), false};
  if (out.state.v >= 0.0) return out;

  // Earliest root of v + a t + j t^2 / 2 in [0, dt].
  double t_stop = 0.0;
  if (x.v > 0.0) {
    const double qa = 0.5 * jerk;
    const double qb = x.a_v;
    const double qc = x.v;
    double best = dt;
    if (std::abs(qa) < 1e-14) {
      if (qb < 0.0) best = std::min(best, -qc / qb);
    } else {
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        for (double r : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)}) {
          if (r > 0.0 && r <= dt) best = std::min(best, r);
        }
      }
    }
    t_stop = best;
  }
  out.state = advance(t_stop);
  out.state.v = 0.0;
  out.state.a_v = 0.0;
  out.clamped = true;
  return out;
}

}  // namespace emato::dynamics
