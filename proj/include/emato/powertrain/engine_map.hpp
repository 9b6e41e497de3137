#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace emato::powertrain {

/// Parameters of a synthetic engine map: a full-load torque curve and a
/// quadratic brake-specific fuel consumption bowl centred on (omega*, T*).
struct MapSpec {
  int n_speed = 16;
  int n_torque = 16;
  double omega_idle = 63.0;          // rad/s, lowest mapped speed
  double omega_max = 314.0;          // rad/s
  double torque_peak = 600.0;        // N*m
  double omega_peak_torque = 160.0;  // rad/s where full-load torque peaks
  double torque_drop = 0.45;         // fractional full-load drop at the far speed end
  double bsfc_min = 195.0;           // g/kWh
  double omega_star = 150.0;         // rad/s, bowl centre
  double torque_star = 420.0;        // N*m, bowl centre
  double curvature_speed = 0.1;      // relative BSFC rise across the speed span
  double curvature_torque = 0.6;     // relative BSFC rise across the torque span

  static MapSpec light_truck();
  static MapSpec sedan();
  /// Throws InvalidSpec on degenerate grids or non-positive basin parameters.
  void validate() const;
};

/// Tabulated engine power and BSFC over a rectilinear (omega, torque) grid.
/// Surfaces are stored row-major with speed as the slow index.
class EngineMap {
 public:
  EngineMap(std::vector<double> speed_grid, std::vector<double> torque_grid,
            std::vector<double> power_surface, std::vector<double> bsfc_surface,
            std::vector<double> max_torque);

  const std::vector<double>& speed_grid() const { return speed_grid_; }
  const std::vector<double>& torque_grid() const { return torque_grid_; }
  const std::vector<double>& power_surface() const { return power_; }
  const std::vector<double>& bsfc_surface() const { return bsfc_; }
  /// Full-load torque at each speed node.
  const std::vector<double>& max_torque_curve() const { return max_torque_; }

  double omega_min() const { return speed_grid_.front(); }
  double omega_max() const { return speed_grid_.back(); }

  /// Bilinear lookups; arguments are clamped to the grid.
  double power(double omega, double torque) const;
  double bsfc(double omega, double torque) const;
  /// Piecewise-linear full-load torque.
  double max_torque(double omega) const;

  bool in_envelope(double omega, double torque) const;

  /// Smallest tabulated BSFC value.
  double min_bsfc() const;

 private:
  double bilinear(const std::vector<double>& surface, double omega, double torque) const;

  std::vector<double> speed_grid_;
  std::vector<double> torque_grid_;
  std::vector<double> power_;
  std::vector<double> bsfc_;
  std::vector<double> max_torque_;
};

/// Samples the synthetic map. Power is omega * T at every node.
EngineMap build_engine_map(const MapSpec& spec);

}  // namespace emato::powertrain
