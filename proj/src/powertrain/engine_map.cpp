#include "emato/powertrain/engine_map.hpp"

#include <algorithm>
#include <cmath>

#include "emato/error.hpp"

namespace emato::powertrain {
namespace {

bool strictly_increasing(const std::vector<double>& g) {
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!(g[i] > g[i - 1])) return false;
  }
  return true;
}

// Index of the cell containing x and the fractional position inside it.
std::pair<std::size_t, double> locate(const std::vector<double>& grid, double x) {
  x = std::clamp(x, grid.front(), grid.back());
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  std::size_t i = static_cast<std::size_t>(std::distance(grid.begin(), it));
  i = std::clamp<std::size_t>(i, 1, grid.size() - 1) - 1;
  const double frac = (x - grid[i]) / (grid[i + 1] - grid[i]);
  return {i, frac};
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return out;
}

}  // namespace

MapSpec MapSpec::light_truck() { return MapSpec{}; }

MapSpec MapSpec::sedan() {
  MapSpec s;
  s.omega_idle = 84.0;
  s.omega_max = 650.0;
  s.torque_peak = 230.0;
  s.omega_peak_torque = 330.0;
  s.torque_drop = 0.35;
  s.bsfc_min = 235.0;
  s.omega_star = 260.0;
  s.torque_star = 160.0;
  return s;
}

void MapSpec::validate() const {
  if (n_speed < 8 || n_torque < 8) throw InvalidSpec("engine map grid must be at least 8x8");
  if (!(omega_idle > 0.0) || !(omega_max > omega_idle))
    throw InvalidSpec("engine speed range must satisfy 0 < omega_idle < omega_max");
  if (!(torque_peak > 0.0)) throw InvalidSpec("torque_peak must be positive");
  if (!(bsfc_min > 0.0) || !(curvature_speed > 0.0) || !(curvature_torque > 0.0))
    throw InvalidSpec("BSFC basin parameters must be positive");
  if (omega_star <= omega_idle || omega_star >= omega_max || torque_star <= 0.0 ||
      torque_star >= torque_peak)
    throw InvalidSpec("BSFC minimum must lie inside the map");
  if (torque_drop < 0.0 || torque_drop >= 1.0) throw InvalidSpec("torque_drop must be in [0, 1)");
}

EngineMap::EngineMap(std::vector<double> speed_grid, std::vector<double> torque_grid,
                     std::vector<double> power_surface, std::vector<double> bsfc_surface,
                     std::vector<double> max_torque)
    : speed_grid_(std::move(speed_grid)),
      torque_grid_(std::move(torque_grid)),
      power_(std::move(power_surface)),
      bsfc_(std::move(bsfc_surface)),
      max_torque_(std::move(max_torque)) {
  if (speed_grid_.size() < 2 || torque_grid_.size() < 2)
    throw InvalidSpec("engine map needs at least two nodes per axis");
  if (!strictly_increasing(speed_grid_) || !strictly_increasing(torque_grid_))
    throw InvalidSpec("engine map grids must be strictly increasing");
  const std::size_t cells = speed_grid_.size() * torque_grid_.size();
  if (power_.size() != cells || bsfc_.size() != cells)
    throw InvalidSpec("engine map surface size does not match grid");
  if (max_torque_.size() != speed_grid_.size())
    throw InvalidSpec("full-load curve must have one value per speed node");
  for (double b : bsfc_) {
    if (!std::isfinite(b) || b <= 0.0) throw InvalidSpec("BSFC surface must be finite and positive");
  }
  for (double p : power_) {
    if (!std::isfinite(p) || p < 0.0) throw InvalidSpec("power surface must be finite and non-negative");
  }
}

double EngineMap::bilinear(const std::vector<double>& surface, double omega,
                           double torque) const {
  const auto [i, fx] = locate(speed_grid_, omega);
  const auto [j, fy] = locate(torque_grid_, torque);
  const std::size_t nt = torque_grid_.size();
  const double f00 = surface[i * nt + j];
  const double f01 = surface[i * nt + j + 1];
  const double f10 = surface[(i + 1) * nt + j];
  const double f11 = surface[(i + 1) * nt + j + 1];
  return (1 - fx) * (1 - fy) * f00 + (1 - fx) * fy * f01 + fx * (1 - fy) * f10 + fx * fy * f11;
}

double EngineMap::power(double omega, double torque) const { return bilinear(power_, omega, torque); }

double EngineMap::bsfc(double omega, double torque) const { return bilinear(bsfc_, omega, torque); }

double EngineMap::max_torque(double omega) const {
  const auto [i, f] = locate(speed_grid_, omega);
  return (1 - f) * max_torque_[i] + f * max_torque_[i + 1];
}

bool EngineMap::in_envelope(double omega, double torque) const {
  return omega >= omega_min() && omega <= omega_max() && torque >= 0.0 &&
         torque <= max_torque(omega);
}

double EngineMap::min_bsfc() const { return *std::min_element(bsfc_.begin(), bsfc_.end()); }

EngineMap build_engine_map(const MapSpec& spec) {
  spec.validate();
  auto speeds = linspace(spec.omega_idle, spec.omega_max, spec.n_speed);
  auto torques = linspace(0.0, spec.torque_peak, spec.n_torque);

  const double span = spec.omega_max - spec.omega_idle;
  const double far_side =
      std::max(spec.omega_peak_torque - spec.omega_idle, spec.omega_max - spec.omega_peak_torque);
  std::vector<double> full_load(speeds.size());
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    const double x = (speeds[i] - spec.omega_peak_torque) / far_side;
    full_load[i] = spec.torque_peak * (1.0 - spec.torque_drop * x * x);
  }

  const std::size_t nt = torques.size();
  std::vector<double> power(speeds.size() * nt);
  std::vector<double> bsfc(speeds.size() * nt);
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const double x = (speeds[i] - spec.omega_star) / span;
      const double y = (torques[j] - spec.torque_star) / spec.torque_peak;
      power[i * nt + j] = speeds[i] * torques[j];
      bsfc[i * nt + j] =
          spec.bsfc_min * (1.0 + spec.curvature_speed * x * x + spec.curvature_torque * y * y);
    }
  }
  return EngineMap(std::move(speeds), std::move(torques), std::move(power), std::move(bsfc),
                   std::move(full_load));
}

}  // namespace emato::powertrain
