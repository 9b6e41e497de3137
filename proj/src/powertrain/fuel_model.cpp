#include "emato/powertrain/fuel_model.hpp"

namespace emato::powertrain {

FuelCoeffs FuelCoeffs::sedan_appendix() {
  FuelCoeffs k;
  k.o = {1.4627e-1, 1.0254e-2, -9.2812e-4, 2.154e-5, -4.2427e-7};
  k.c = {0.07224, 0.09681, 1.0750e-3};
  return k;
}

FuelCoeffs FuelCoeffs::truck_appendix_printed() {
  FuelCoeffs k;
  k.o = {3.351e-1, 9.0901e-3, 3.7574e-8, 3.4935e-8, 2.4230e-4};
  k.c = {1.6550e-1, 3.6070e-1, 2.4223e-4};
  return k;
}

FuelCoeffs FuelCoeffs::truck_appendix_realigned() {
  FuelCoeffs k;
  k.o = {3.351e-1, 9.0901e-3, 2.4230e-4, 3.7574e-8, 3.4935e-8};
  k.c = {1.6550e-1, 3.6070e-1, 2.4223e-4};
  return k;
}

FuelRate fuel_rate_model(const FuelCoeffs& k, double v, double a_t) {
  const auto& o = k.o;
  const auto& c = k.c;
  const double v2 = v * v;
  const double v3 = v2 * v;
  const double gain = c[0] + c[1] * v + c[2] * v2;
  const double gain_dv = c[1] + 2.0 * c[2] * v;

  FuelRate r;
  r.value = o[0] + o[1] * v + o[2] * v2 + o[3] * v3 + o[4] * v2 * v2 + gain * a_t;
  r.d_speed = o[1] + 2.0 * o[2] * v + 3.0 * o[3] * v2 + 4.0 * o[4] * v3 + gain_dv * a_t;
  r.d_traction = gain;
  r.d2_speed = 2.0 * o[2] + 6.0 * o[3] * v + 12.0 * o[4] * v2 + 2.0 * c[2] * a_t;
  r.d2_speed_traction = gain_dv;
  return r;
}

double fuel_rate(const FuelCoeffs& k, double v, double a_t) {
  return fuel_rate_model(k, v, a_t).value;
}

double traction_gain(const FuelCoeffs& k, double v) {
  return k.c[0] + k.c[1] * v + k.c[2] * v * v;
}

bool is_physical(const FuelCoeffs& k, double v_max, double a_t_max, int samples) {
  for (int i = 0; i <= samples; ++i) {
    const double v = v_max * i / samples;
    if (traction_gain(k, v) <= 0.0) return false;
    for (int j = 0; j <= samples; ++j) {
      const double a = a_t_max * j / samples;
      if (fuel_rate(k, v, a) < 0.0) return false;
    }
  }
  return true;
}

}  // namespace emato::powertrain
