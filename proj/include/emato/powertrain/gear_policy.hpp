#pragma once

#include <optional>
#include <vector>

#include "emato/powertrain/engine_map.hpp"

namespace emato::powertrain {

/// Driveline constants. These are repository configuration, not measured data.
struct TransmissionSpec {
  std::vector<double> gear_ratios;  // i_g, first gear first
  double final_drive = 1.0;         // i_f
  double efficiency = 0.95;         // eta
  double wheel_radius = 0.4;        // r (m)

  double total_ratio(int gear) const;
  int num_gears() const { return static_cast<int>(gear_ratios.size()); }
  void validate() const;

  static TransmissionSpec light_truck_7speed();
  static TransmissionSpec sedan_6speed();
};

struct EngineState {
  double omega = 0.0;   // rad/s
  double torque = 0.0;  // N*m
};

/// Engine speed and torque for a wheel-level operating point:
/// T_e = a_t M r / (i_t eta), omega_e = v i_t / r.
EngineState engine_state(double v, double a_t, int gear, const TransmissionSpec& trans,
                         double mass);

/// Same, but throws EnvelopeViolation when the point is outside the map
/// envelope. Speeds below the lowest mapped speed are treated as clutch slip
/// and are checked against the full-load torque at that speed.
EngineState engine_state_checked(double v, double a_t, int gear, const TransmissionSpec& trans,
                                 double mass, const EngineMap& map);

/// Fuel rate (mL/s) from the map: P_e * bsfc / c_u.
double fuel_rate_exact(double v, double a_t, int gear, const EngineMap& map,
                       const TransmissionSpec& trans, double mass, double fuel_density);

/// (v, a_t) lattice on which a gear policy is tabulated.
struct PolicyGrid {
  std::vector<double> speeds;
  std::vector<double> tractions;

  static PolicyGrid uniform(double v_lo, double v_hi, int n_v, double a_lo, double a_hi, int n_a);
};

/// Tabulated ECO gear choice. Cells with no feasible gear hold kInfeasible.
class GearPolicy {
 public:
  static constexpr int kInfeasible = -1;

  GearPolicy(TransmissionSpec trans, PolicyGrid grid, std::vector<int> table);

  const TransmissionSpec& transmission() const { return trans_; }
  const PolicyGrid& grid() const { return grid_; }
  const std::vector<int>& table() const { return table_; }

  int gear_at(std::size_t i_speed, std::size_t i_traction) const;
  /// Gear of the nearest lattice cell; nullopt when that cell is infeasible.
  std::optional<int> lookup(double v, double a_t) const;
  std::size_t feasible_cells() const;

 private:
  TransmissionSpec trans_;
  PolicyGrid grid_;
  std::vector<int> table_;
};

/// Per-cell argmin of the exact fuel rate over feasible gears; ties go to
/// the lower gear. Cells are evaluated in parallel with OpenMP.
GearPolicy optimize_gear_policy(const EngineMap& map, const TransmissionSpec& trans,
                                const PolicyGrid& grid, double mass, double fuel_density);

/// Single-threaded reference for optimize_gear_policy.
GearPolicy optimize_gear_policy_serial(const EngineMap& map, const TransmissionSpec& trans,
                                       const PolicyGrid& grid, double mass, double fuel_density);

/// ECO gear for one operating point, or kInfeasible.
int best_gear(double v, double a_t, const EngineMap& map, const TransmissionSpec& trans,
              double mass, double fuel_density);

}  // namespace emato::powertrain
