#pragma once

#include <string>

#include "emato/powertrain/fuel_model.hpp"

namespace emato::dynamics {

struct DynamicLimits {
  double v_max = 27.0;     // m/s
  double a_v_max = 2.0;    // m/s^2, apparent acceleration
  double a_b_max = 5.0;    // m/s^2, brake
  double a_t_max = 3.0;    // m/s^2, traction
  double j_max = 5.0;      // m/s^3
};

/// Physical constants, limits and fuel model of one vehicle. The resistance
/// constants k1..k3 are always derived, never stored.
struct VehicleParams {
  std::string name = "truck";
  double mass = 4800.0;          // kg, equivalent mass
  double frontal_area = 2.5;     // m^2
  double air_density = 1.184;    // kg/m^3
  double drag_coeff = 0.6;
  double rolling_coeff = 0.006;
  double gravity = 9.81;         // m/s^2
  DynamicLimits limits;
  powertrain::FuelCoeffs fuel = powertrain::FuelCoeffs::truck_appendix_realigned();

  double k1() const { return drag_coeff * air_density * frontal_area / (2.0 * mass); }
  double k2() const { return rolling_coeff * gravity; }
  double k3() const { return gravity; }

  /// Throws InvalidSpec if any physical constant or limit is not positive.
  void validate() const;

  static VehicleParams sedan();
  static VehicleParams truck();
  /// Resolves "sedan" or "truck".
  static VehicleParams by_name(const std::string& name);
};

}  // namespace emato::dynamics
