#include "emato/powertrain/fuel_fit.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "emato/error.hpp"

namespace emato::powertrain {

FitResult fit_fuel_model(std::span<const FitSample> samples, double fuel_density) {
  constexpr int kParams = 8;
  if (samples.size() < kParams)
    throw DegenerateSamples("fuel fit needs at least 8 samples, got " +
                            std::to_string(samples.size()));

  // Normalise v and a_t to O(1) so the quartic columns stay well conditioned.
  double v_scale = 0.0;
  double a_scale = 0.0;
  for (const auto& s : samples) {
    v_scale = std::max(v_scale, std::abs(s.v));
    a_scale = std::max(a_scale, std::abs(s.a_t));
  }
  if (v_scale == 0.0 || a_scale == 0.0)
    throw DegenerateSamples("fuel fit samples do not vary in speed or traction");

  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd design(n, kParams);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& s = samples[static_cast<std::size_t>(r)];
    const double v = s.v / v_scale;
    const double a = s.a_t / a_scale;
    design.row(r) << 1.0, v, v * v, v * v * v, v * v * v * v, a, v * a, v * v * a;
    rhs(r) = s.f_r;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < kParams)
    throw DegenerateSamples("fuel fit design matrix is rank deficient (rank " +
                            std::to_string(qr.rank()) + " < 8)");
  const Eigen::VectorXd x = qr.solve(rhs);

  FitResult out;
  out.coeffs.fuel_density = fuel_density;
  for (int i = 0; i < 5; ++i) out.coeffs.o[static_cast<std::size_t>(i)] = x(i) / std::pow(v_scale, i);
  for (int i = 0; i < 3; ++i)
    out.coeffs.c[static_cast<std::size_t>(i)] = x(5 + i) / (std::pow(v_scale, i) * a_scale);
  out.n_samples = samples.size();

  double sq = 0.0;
  for (const auto& s : samples) {
    const double e = fuel_rate(out.coeffs, s.v, s.a_t) - s.f_r;
    sq += e * e;
  }
  out.rms_error = std::sqrt(sq / static_cast<double>(samples.size()));
  out.accuracy_pct = prediction_accuracy(out.coeffs, samples);
  return out;
}

double prediction_accuracy(const FuelCoeffs& k, std::span<const FitSample> samples) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& s : samples) {
    if (s.f_r < kAccuracyFloor) continue;
    sum += std::abs(fuel_rate(k, s.v, s.a_t) - s.f_r) / s.f_r;
    ++count;
  }
  if (count == 0) return 0.0;
  return 100.0 * (1.0 - sum / static_cast<double>(count));
}

std::vector<FitSample> sample_policy(const GearPolicy& policy, const EngineMap& map, double mass,
                                     double fuel_density) {
  std::vector<FitSample> out;
  const auto& grid = policy.grid();
  for (std::size_t i = 0; i < grid.speeds.size(); ++i) {
    for (std::size_t j = 0; j < grid.tractions.size(); ++j) {
      const int gear = policy.gear_at(i, j);
      if (gear == GearPolicy::kInfeasible) continue;
      const double v = grid.speeds[i];
      const double a = grid.tractions[j];
      out.push_back({v, a, fuel_rate_exact(v, a, gear, map, policy.transmission(), mass,
                                           fuel_density)});
    }
  }
  return out;
}

std::pair<std::vector<FitSample>, std::vector<FitSample>> split_samples(
    std::vector<FitSample> samples, double holdout_fraction, std::uint64_t seed) {
  if (holdout_fraction < 0.0 || holdout_fraction >= 1.0)
    throw InvalidArgument("holdout fraction must be in [0, 1)");
  std::mt19937_64 rng(seed);
  std::shuffle(samples.begin(), samples.end(), rng);
  const auto n_hold =
      static_cast<std::size_t>(std::round(holdout_fraction * static_cast<double>(samples.size())));
  std::vector<FitSample> holdout(samples.end() - static_cast<std::ptrdiff_t>(n_hold), samples.end());
  samples.resize(samples.size() - n_hold);
  return {std::move(samples), std::move(holdout)};
}

FitPipeline FitPipeline::light_truck() {
  return {MapSpec::light_truck(), TransmissionSpec::light_truck_7speed(),
          PolicyGrid::uniform(2.0, 27.0, 54, 0.05, 3.0, 60), 4800.0, 0.85, 0.3, 7};
}

FitPipeline FitPipeline::sedan() {
  return {MapSpec::sedan(), TransmissionSpec::sedan_6speed(),
          PolicyGrid::uniform(2.0, 27.0, 54, 0.05, 3.0, 60), 1200.0, 0.85, 0.3, 7};
}

PipelineReport run_fit_pipeline(const FitPipeline& p) {
  const auto map = build_engine_map(p.map);
  const auto policy = optimize_gear_policy(map, p.transmission, p.grid, p.mass, p.fuel_density);
  auto [train, holdout] = split_samples(sample_policy(policy, map, p.mass, p.fuel_density),
                                        p.holdout_fraction, p.seed);
  PipelineReport r;
  r.fit = fit_fuel_model(train, p.fuel_density);
  r.holdout_accuracy_pct = prediction_accuracy(r.fit.coeffs, holdout);
  r.n_train = train.size();
  r.n_holdout = holdout.size();
  r.feasible_cells = policy.feasible_cells();
  return r;
}

}  // namespace emato::powertrain
