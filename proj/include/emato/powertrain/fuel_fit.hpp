#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "emato/powertrain/fuel_model.hpp"
#include "emato/powertrain/gear_policy.hpp"

namespace emato::powertrain {

struct FitSample {
  double v = 0.0;    // m/s
  double a_t = 0.0;  // m/s^2
  double f_r = 0.0;  // mL/s, exact
};

struct FitResult {
  FuelCoeffs coeffs;
  double accuracy_pct = 0.0;  // on the fitting samples
  double rms_error = 0.0;     // mL/s
  std::size_t n_samples = 0;
};

/// Samples below this exact rate are excluded from the accuracy metric.
inline constexpr double kAccuracyFloor = 0.05;

/// Linear least squares for the eight model coefficients. Throws
/// DegenerateSamples when fewer than eight samples are given or the design
/// matrix is numerically rank deficient.
FitResult fit_fuel_model(std::span<const FitSample> samples, double fuel_density = 0.85);

/// 100 * (1 - mean |f_hat - f| / f) over samples with f >= kAccuracyFloor.
double prediction_accuracy(const FuelCoeffs& k, std::span<const FitSample> samples);

/// Exact fuel rate at every feasible lattice cell of an ECO policy.
std::vector<FitSample> sample_policy(const GearPolicy& policy, const EngineMap& map, double mass,
                                     double fuel_density);

/// Deterministic shuffle and split; returns {train, holdout}.
std::pair<std::vector<FitSample>, std::vector<FitSample>> split_samples(
    std::vector<FitSample> samples, double holdout_fraction, std::uint64_t seed);

/// Map, transmission and lattice for one offline fit: build the map,
/// optimize the ECO policy, sample it, hold out a fraction, fit the rest.
struct FitPipeline {
  MapSpec map;
  TransmissionSpec transmission;
  PolicyGrid grid;
  double mass = 4800.0;  // kg
  double fuel_density = 0.85;
  double holdout_fraction = 0.3;
  std::uint64_t seed = 7;

  static FitPipeline light_truck();
  static FitPipeline sedan();
};

struct PipelineReport {
  FitResult fit;
  double holdout_accuracy_pct = 0.0;
  std::size_t n_train = 0;
  std::size_t n_holdout = 0;
  std::size_t feasible_cells = 0;
};

PipelineReport run_fit_pipeline(const FitPipeline& p);

}  // namespace emato::powertrain
