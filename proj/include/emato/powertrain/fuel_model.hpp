#pragma once

#include <array>

namespace emato::powertrain {

/// Coefficients of the differentiable fuel-rate model
///
///   f(v, a_t) = o0 + o1 v + o2 v^2 + o3 v^3 + o4 v^4 + (c0 + c1 v + c2 v^2) a_t
///
/// in mL/s, with v in m/s and traction acceleration a_t in m/s^2.
struct FuelCoeffs {
  std::array<double, 5> o{};
  std::array<double, 3> c{};
  double fuel_density = 0.85;  // g/mL

  /// Converts W * g/kWh into mL/s.
  double unit_const() const { return fuel_density * 1000.0 * 3600.0; }

  /// Sedan coefficients as printed in the vehicle parameter table.
  static FuelCoeffs sedan_appendix();
  /// Truck coefficients exactly as printed (o4 = 2.4230e-4).
  static FuelCoeffs truck_appendix_printed();
  /// Truck coefficients with o2..o4 shifted back one row; the printed o4
  /// belongs to o2. This is the set the scenarios run with by default.
  static FuelCoeffs truck_appendix_realigned();
};

/// Value and derivatives of the fuel-rate model at one point.
struct FuelRate {
  double value = 0.0;
  double d_speed = 0.0;
  double d_traction = 0.0;
  double d2_speed = 0.0;
  double d2_speed_traction = 0.0;  // d2/dv da_t; d2/da_t^2 is identically zero
};

/// Evaluates the model and its closed-form partials.
FuelRate fuel_rate_model(const FuelCoeffs& k, double v, double a_t);

/// Value only.
double fuel_rate(const FuelCoeffs& k, double v, double a_t);

/// Traction sensitivity c0 + c1 v + c2 v^2.
double traction_gain(const FuelCoeffs& k, double v);

/// True when c0 + c1 v + c2 v^2 > 0 and f >= 0 on [0, v_max] x [0, a_t_max],
/// checked on a grid of `samples` points per axis.
bool is_physical(const FuelCoeffs& k, double v_max, double a_t_max, int samples = 200);

}  // namespace emato::powertrain
