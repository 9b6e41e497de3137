#include "emato/powertrain/gear_policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "emato/error.hpp"

namespace emato::powertrain {

double TransmissionSpec::total_ratio(int gear) const {
  if (gear < 0 || gear >= num_gears())
    throw InvalidArgument("gear index " + std::to_string(gear) + " out of range");
  return gear_ratios[static_cast<std::size_t>(gear)] * final_drive;
}

void TransmissionSpec::validate() const {
  if (gear_ratios.empty()) throw InvalidSpec("transmission needs at least one gear");
  for (double g : gear_ratios) {
    if (!(g > 0.0)) throw InvalidSpec("gear ratios must be positive");
  }
  if (!(final_drive > 0.0) || !(wheel_radius > 0.0) || !(efficiency > 0.0) || efficiency > 1.0)
    throw InvalidSpec("final drive, wheel radius and efficiency must be positive (eta <= 1)");
}

TransmissionSpec TransmissionSpec::light_truck_7speed() {
  return TransmissionSpec{{5.6, 3.4, 2.2, 1.5, 1.0, 0.8, 0.65}, 3.9, 0.95, 0.4};
}

TransmissionSpec TransmissionSpec::sedan_6speed() {
  return TransmissionSpec{{3.5, 2.1, 1.4, 1.0, 0.8, 0.65}, 3.7, 0.92, 0.3};
}

EngineState engine_state(double v, double a_t, int gear, const TransmissionSpec& trans,
                         double mass) {
  if (v < 0.0) throw InvalidArgument("engine_state: speed must be non-negative");
  const double i_t = trans.total_ratio(gear);
  const double wheel_torque = a_t * mass * trans.wheel_radius;
  return EngineState{v * i_t / trans.wheel_radius, wheel_torque / (i_t * trans.efficiency)};
}

EngineState engine_state_checked(double v, double a_t, int gear, const TransmissionSpec& trans,
                                 double mass, const EngineMap& map) {
  const EngineState s = engine_state(v, a_t, gear, trans, mass);
  const double omega_eff = std::max(s.omega, map.omega_min());
  if (s.omega > map.omega_max() || s.torque < 0.0 || s.torque > map.max_torque(omega_eff)) {
    throw EnvelopeViolation("operating point (omega=" + std::to_string(s.omega) +
                            ", T=" + std::to_string(s.torque) + ") outside engine envelope");
  }
  return s;
}

double fuel_rate_exact(double v, double a_t, int gear, const EngineMap& map,
                       const TransmissionSpec& trans, double mass, double fuel_density) {
  const EngineState s = engine_state_checked(v, a_t, gear, trans, mass, map);
  const double omega_eff = std::max(s.omega, map.omega_min());
  const double power = map.power(omega_eff, s.torque);
  const double bsfc = map.bsfc(omega_eff, s.torque);
  return power * bsfc / (fuel_density * 1000.0 * 3600.0);
}

PolicyGrid PolicyGrid::uniform(double v_lo, double v_hi, int n_v, double a_lo, double a_hi,
                               int n_a) {
  if (n_v < 1 || n_a < 1) throw InvalidSpec("policy grid needs at least one cell per axis");
  PolicyGrid g;
  for (int i = 0; i < n_v; ++i) g.speeds.push_back(n_v == 1 ? v_lo : v_lo + (v_hi - v_lo) * i / (n_v - 1));
  for (int j = 0; j < n_a; ++j)
    g.tractions.push_back(n_a == 1 ? a_lo : a_lo + (a_hi - a_lo) * j / (n_a - 1));
  return g;
}

GearPolicy::GearPolicy(TransmissionSpec trans, PolicyGrid grid, std::vector<int> table)
    : trans_(std::move(trans)), grid_(std::move(grid)), table_(std::move(table)) {
  if (table_.size() != grid_.speeds.size() * grid_.tractions.size())
    throw InvalidSpec("gear table size does not match the lattice");
  for (int g : table_) {
    if (g != kInfeasible && (g < 0 || g >= trans_.num_gears()))
      throw InvalidSpec("gear table references a gear that does not exist");
  }
}

int GearPolicy::gear_at(std::size_t i_speed, std::size_t i_traction) const {
  return table_.at(i_speed * grid_.tractions.size() + i_traction);
}

std::optional<int> GearPolicy::lookup(double v, double a_t) const {
  const auto nearest = [](const std::vector<double>& g, double x) {
    auto it = std::lower_bound(g.begin(), g.end(), x);
    if (it == g.end()) return g.size() - 1;
    auto i = static_cast<std::size_t>(std::distance(g.begin(), it));
    if (i > 0 && std::abs(g[i - 1] - x) <= std::abs(g[i] - x)) --i;
    return i;
  };
  const int gear = gear_at(nearest(grid_.speeds, v), nearest(grid_.tractions, a_t));
  if (gear == kInfeasible) return std::nullopt;
  return gear;
}

std::size_t GearPolicy::feasible_cells() const {
  return static_cast<std::size_t>(
      std::count_if(table_.begin(), table_.end(), [](int g) { return g != kInfeasible; }));
}

int best_gear(double v, double a_t, const EngineMap& map, const TransmissionSpec& trans,
              double mass, double fuel_density) {
  int best = GearPolicy::kInfeasible;
  double best_rate = std::numeric_limits<double>::infinity();
  for (int g = 0; g < trans.num_gears(); ++g) {
    double rate = 0.0;
    try {
      rate = fuel_rate_exact(v, a_t, g, map, trans, mass, fuel_density);
    } catch (const EnvelopeViolation&) {
      continue;
    }
    if (rate < best_rate) {  // strict: ties keep the lower gear
      best_rate = rate;
      best = g;
    }
  }
  return best;
}

namespace {

void check_inputs(const TransmissionSpec& trans, const PolicyGrid& grid) {
  trans.validate();
  if (grid.speeds.empty() || grid.tractions.empty()) throw InvalidSpec("empty policy lattice");
  if (*std::min_element(grid.speeds.begin(), grid.speeds.end()) < 0.0)
    throw InvalidSpec("policy lattice speeds must be non-negative");
}

void check_any_feasible(const std::vector<int>& table) {
  if (std::none_of(table.begin(), table.end(),
                   [](int g) { return g != GearPolicy::kInfeasible; }))
    throw InvalidSpec("invalid powertrain: no feasible gear anywhere on the lattice");
}

}  // namespace

GearPolicy optimize_gear_policy_serial(const EngineMap& map, const TransmissionSpec& trans,
                                       const PolicyGrid& grid, double mass, double fuel_density) {
  check_inputs(trans, grid);
  const std::size_t nv = grid.speeds.size();
  const std::size_t na = grid.tractions.size();
  std::vector<int> table(nv * na, GearPolicy::kInfeasible);
  for (std::size_t i = 0; i < nv; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      table[i * na + j] =
          best_gear(grid.speeds[i], grid.tractions[j], map, trans, mass, fuel_density);
    }
  }
  check_any_feasible(table);
  return GearPolicy(trans, grid, std::move(table));
}

GearPolicy optimize_gear_policy(const EngineMap& map, const TransmissionSpec& trans,
                                const PolicyGrid& grid, double mass, double fuel_density) {
  check_inputs(trans, grid);
  const auto nv = static_cast<long>(grid.speeds.size());
  const auto na = static_cast<long>(grid.tractions.size());
  std::vector<int> table(static_cast<std::size_t>(nv * na), GearPolicy::kInfeasible);
#pragma omp parallel for schedule(static)
  for (long cell = 0; cell < nv * na; ++cell) {
    const auto i = static_cast<std::size_t>(cell / na);
    const auto j = static_cast<std::size_t>(cell % na);
    table[static_cast<std::size_t>(cell)] =
        best_gear(grid.speeds[i], grid.tractions[j], map, trans, mass, fuel_density);
  }
  check_any_feasible(table);
  return GearPolicy(trans, grid, std::move(table));
}

}  // namespace emato::powertrain
