#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "emato/error.hpp"
#include "emato/powertrain/engine_map.hpp"
#include "emato/powertrain/fuel_fit.hpp"
#include "emato/powertrain/fuel_model.hpp"
#include "emato/powertrain/gear_policy.hpp"
#include "emato/powertrain/io.hpp"

using namespace emato;
using namespace emato::powertrain;

namespace {

// Two-node map with power = omega * T and a constant BSFC.
EngineMap flat_map(double bsfc, double t_max = 2000.0) {
  std::vector<double> w{10.0, 1000.0}, t{0.0, t_max};
  std::vector<double> p{w[0] * t[0], w[0] * t[1], w[1] * t[0], w[1] * t[1]};
  return EngineMap(w, t, p, std::vector<double>(4, bsfc), {t_max, t_max});
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(EngineMap, MinimumSitsAtBowlCentre) {
  const auto spec = MapSpec::light_truck();
  const auto map = build_engine_map(spec);
  EXPECT_EQ(map.speed_grid().size(), 16u);
  EXPECT_EQ(map.torque_grid().size(), 16u);
  EXPECT_NEAR(map.bsfc(spec.omega_star, spec.torque_star), spec.bsfc_min, 0.5);
  EXPECT_GE(map.min_bsfc(), spec.bsfc_min - 0.5);
}

TEST(EngineMap, NodeQueryReturnsStoredValue) {
  const auto map = build_engine_map(MapSpec::light_truck());
  const std::size_t nt = map.torque_grid().size();
  for (std::size_t i : {0u, 5u, 15u})
    for (std::size_t j : {0u, 7u, 15u}) {
      EXPECT_DOUBLE_EQ(map.bsfc(map.speed_grid()[i], map.torque_grid()[j]),
                       map.bsfc_surface()[i * nt + j]);
      EXPECT_DOUBLE_EQ(map.power(map.speed_grid()[i], map.torque_grid()[j]),
                       map.power_surface()[i * nt + j]);
    }
}

TEST(EngineMap, MidpointIsBilinearBlend) {
  const auto map = build_engine_map(MapSpec::light_truck());
  const auto& w = map.speed_grid();
  const auto& t = map.torque_grid();
  const std::size_t nt = t.size();
  const auto& b = map.bsfc_surface();
  const std::size_t i = 3, j = 4;
  const double expect = 0.25 * (b[i * nt + j] + b[i * nt + j + 1] + b[(i + 1) * nt + j] +
                                b[(i + 1) * nt + j + 1]);
  EXPECT_NEAR(map.bsfc(0.5 * (w[i] + w[i + 1]), 0.5 * (t[j] + t[j + 1])), expect, 1e-12);
}

TEST(EngineMap, RejectsDegenerateGrids) {
  EXPECT_THROW(EngineMap({1.0, 1.0}, {0.0, 1.0}, std::vector<double>(4, 1.0),
                         std::vector<double>(4, 200.0), {1.0, 1.0}),
               InvalidSpec);
  auto spec = MapSpec::light_truck();
  spec.n_speed = 2;
  EXPECT_THROW(build_engine_map(spec), InvalidSpec);
  spec = MapSpec::light_truck();
  spec.omega_star = spec.omega_max + 1.0;
  EXPECT_THROW(build_engine_map(spec), InvalidSpec);
}

TEST(EngineState, ZeroSpeedAndZeroTraction) {
  const auto tr = TransmissionSpec::light_truck_7speed();
  for (int g = 0; g < tr.num_gears(); ++g) {
    EXPECT_DOUBLE_EQ(engine_state(0.0, 1.0, g, tr, 4800.0).omega, 0.0);
    EXPECT_DOUBLE_EQ(engine_state(12.0, 0.0, g, tr, 4800.0).torque, 0.0);
  }
}

TEST(EngineState, DirectArithmetic) {
  const TransmissionSpec tr{{8.0}, 1.0, 0.95, 0.4};
  const auto s = engine_state(10.0, 0.5, 0, tr, 4800.0);
  EXPECT_NEAR(s.torque, 4800.0 * 0.5 * 0.4 / (8.0 * 0.95), 1e-12);
  EXPECT_NEAR(s.omega, 10.0 * 8.0 / 0.4, 1e-12);
}

TEST(EngineState, EnvelopeViolation) {
  const auto map = build_engine_map(MapSpec::light_truck());
  const auto tr = TransmissionSpec::light_truck_7speed();
  EXPECT_THROW(engine_state_checked(26.0, 0.5, 0, tr, 4800.0, map), EnvelopeViolation);
  EXPECT_THROW(engine_state_checked(5.0, 50.0, 3, tr, 4800.0, map), EnvelopeViolation);
}

TEST(FuelRateExact, UnitAnalysis) {
  // 50 kW at 200 g/kWh is 10 kg/h = 10000/0.85 mL/h.
  const auto map = flat_map(200.0, 5000.0);
  const TransmissionSpec tr{{1.0}, 1.0, 1.0, 0.5};
  const double f = fuel_rate_exact(10.0, 1.0, 0, map, tr, 5000.0, 0.85);
  EXPECT_NEAR(f, 50000.0 * 200.0 / 3060000.0, 1e-9);
  EXPECT_NEAR(f, 10000.0 / 0.85 / 3600.0, 1e-9);
}

TEST(FuelRateExact, NonNegativeAtRest) {
  const auto map = build_engine_map(MapSpec::light_truck());
  const auto tr = TransmissionSpec::light_truck_7speed();
  EXPECT_GE(fuel_rate_exact(0.0, 0.0, 0, map, tr, 4800.0, 0.85), 0.0);
}

TEST(FuelRateExact, GearMatters) {
  const auto map = build_engine_map(MapSpec::light_truck());
  const auto tr = TransmissionSpec::light_truck_7speed();
  const double f3 = fuel_rate_exact(12.0, 0.4, 3, map, tr, 4800.0, 0.85);
  const double f5 = fuel_rate_exact(12.0, 0.4, 5, map, tr, 4800.0, 0.85);
  EXPECT_NE(f3, f5);
}

TEST(GearPolicy, SingleGearIsConstant) {
  const auto map = build_engine_map(MapSpec::light_truck());
  const TransmissionSpec tr{{2.0}, 3.9, 0.95, 0.4};
  const auto policy =
      optimize_gear_policy(map, tr, PolicyGrid::uniform(2.0, 20.0, 10, 0.1, 1.0, 8), 4800.0, 0.85);
  for (int g : policy.table()) EXPECT_TRUE(g == 0 || g == GearPolicy::kInfeasible);
  EXPECT_GT(policy.feasible_cells(), 0u);
}

TEST(GearPolicy, StaircaseIsMonotone) {
  const auto p = FitPipeline::light_truck();
  const auto map = build_engine_map(p.map);
  const auto policy = optimize_gear_policy(map, p.transmission, p.grid, p.mass, p.fuel_density);
  const auto& g = p.grid;
  // Along speed at fixed traction the chosen gear never goes down.
  for (std::size_t j = 0; j < g.tractions.size(); ++j) {
    int last = -1;
    for (std::size_t i = 0; i < g.speeds.size(); ++i) {
      const int gear = policy.gear_at(i, j);
      if (gear == GearPolicy::kInfeasible) continue;
      EXPECT_GE(gear, last) << "v " << g.speeds[i] << " a " << g.tractions[j];
      last = gear;
    }
  }
  // Along traction the bilinear map leaves a few one-gear steps near zero torque.
  int pairs = 0, rises = 0;
  for (std::size_t i = 0; i < g.speeds.size(); ++i)
    for (std::size_t j = 1; j < g.tractions.size(); ++j) {
      const int a = policy.gear_at(i, j - 1), b = policy.gear_at(i, j);
      if (a == GearPolicy::kInfeasible || b == GearPolicy::kInfeasible) continue;
      ++pairs;
      rises += b > a;
    }
  EXPECT_LE(rises, pairs / 100);
  // Low gears at low speed and high traction, high gears at high speed and low traction.
  EXPECT_LE(policy.gear_at(0, g.tractions.size() - 1), 1);
  EXPECT_EQ(policy.gear_at(g.speeds.size() - 1, 0), p.transmission.num_gears() - 1);
}

TEST(GearPolicy, BestGearIsFuelArgmin) {
  const auto map = build_engine_map(MapSpec::light_truck());
  const auto tr = TransmissionSpec::light_truck_7speed();
  for (double v : {4.0, 9.0, 15.0, 22.0})
    for (double a : {0.1, 0.6, 1.4}) {
      double best = std::numeric_limits<double>::infinity();
      int arg = GearPolicy::kInfeasible;
      for (int gear = 0; gear < tr.num_gears(); ++gear) {
        if (!map.in_envelope(engine_state(v, a, gear, tr, 4800.0).omega,
                             engine_state(v, a, gear, tr, 4800.0).torque))
          continue;
        const double f = fuel_rate_exact(v, a, gear, map, tr, 4800.0, 0.85);
        if (f < best) {
          best = f;
          arg = gear;
        }
      }
      EXPECT_EQ(best_gear(v, a, map, tr, 4800.0, 0.85), arg) << v << " " << a;
    }
}

TEST(GearPolicy, NoFeasibleGearAnywhere) {
  const auto map = build_engine_map(MapSpec::light_truck());
  const TransmissionSpec tr{{0.01}, 1.0, 0.95, 0.4};
  EXPECT_THROW(optimize_gear_policy(map, tr, PolicyGrid::uniform(5.0, 10.0, 3, 1.0, 2.0, 3),
                                    4800.0, 0.85),
               InvalidSpec);
}

TEST(FuelModel, IdleValueAndGolden) {
  const auto truck = FuelCoeffs::truck_appendix_realigned();
  EXPECT_DOUBLE_EQ(fuel_rate(truck, 0.0, 0.0), 0.3351);
  // Scripted evaluation of the sedan polynomial at v = 20, a_t = 0.5.
  EXPECT_NEAR(fuel_rate(FuelCoeffs::sedan_appendix(), 20.0, 0.5), 1.3037588, 1e-9);
}

TEST(FuelModel, PartialsMatchFiniteDifferences) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uv(1.0, 26.0), ua(0.0, 3.0);
  for (const auto& k : {FuelCoeffs::sedan_appendix(), FuelCoeffs::truck_appendix_realigned(),
                        FuelCoeffs::truck_appendix_printed()}) {
    for (int i = 0; i < 50; ++i) {
      const double v = uv(rng), a = ua(rng), h = 1e-5;
      const auto r = fuel_rate_model(k, v, a);
      const double dv = (fuel_rate(k, v + h, a) - fuel_rate(k, v - h, a)) / (2 * h);
      const double da = (fuel_rate(k, v, a + h) - fuel_rate(k, v, a - h)) / (2 * h);
      const double dvv =
          (fuel_rate_model(k, v + h, a).d_speed - fuel_rate_model(k, v - h, a).d_speed) / (2 * h);
      const double dva =
          (fuel_rate_model(k, v, a + h).d_speed - fuel_rate_model(k, v, a - h).d_speed) / (2 * h);
      EXPECT_LE(rel(r.d_speed, dv), 1e-7);
      EXPECT_LE(rel(r.d_traction, da), 1e-7);
      EXPECT_LE(std::abs(r.d2_speed - dvv), 1e-7 * std::max(1.0, std::abs(dvv)));
      EXPECT_LE(std::abs(r.d2_speed_traction - dva), 1e-7 * std::max(1.0, std::abs(dva)));
    }
  }
}

TEST(FuelModel, ShippedSetsArePhysical) {
  EXPECT_TRUE(is_physical(FuelCoeffs::sedan_appendix(), 24.0, 3.0));
  // The sedan idle polynomial turns negative near the top of the speed range.
  EXPECT_LT(fuel_rate(FuelCoeffs::sedan_appendix(), 27.0, 0.0), 0.0);
  EXPECT_TRUE(is_physical(FuelCoeffs::truck_appendix_realigned(), 27.0, 3.0));
  FuelCoeffs bad;
  bad.c = {-1.0, 0.0, 0.0};
  EXPECT_FALSE(is_physical(bad, 27.0, 3.0));
}

TEST(FuelFit, ExactRecoveryFromModelSamples) {
  const auto truth = FuelCoeffs::truck_appendix_printed();
  std::vector<FitSample> samples;
  for (double v = 1.0; v <= 26.0; v += 1.0)
    for (double a = 0.0; a <= 2.0; a += 0.25) samples.push_back({v, a, fuel_rate(truth, v, a)});
  const auto fit = fit_fuel_model(samples);
  for (int i = 0; i < 5; ++i) EXPECT_LE(rel(fit.coeffs.o[i], truth.o[i]), 1e-6) << "o" << i;
  for (int i = 0; i < 3; ++i) EXPECT_LE(rel(fit.coeffs.c[i], truth.c[i]), 1e-6) << "c" << i;
}

TEST(FuelFit, SingleSpeedIsDegenerate) {
  std::vector<FitSample> samples;
  for (int i = 0; i < 8; ++i) samples.push_back({10.0, 0.1 * i, 1.0 + 0.1 * i});
  EXPECT_THROW(fit_fuel_model(samples), DegenerateSamples);
  EXPECT_THROW(fit_fuel_model(std::span<const FitSample>(samples.data(), 5)), DegenerateSamples);
}

TEST(FuelFit, SyntheticTruckMapAccuracy) {
  const auto r = run_fit_pipeline(FitPipeline::light_truck());
  EXPECT_GE(r.holdout_accuracy_pct, 95.0);
  EXPECT_GT(r.n_holdout, 0u);
  EXPECT_NEAR(static_cast<double>(r.n_holdout) / (r.n_holdout + r.n_train), 0.3, 0.01);
}

TEST(FuelFit, SplitIsDeterministic) {
  std::vector<FitSample> s;
  for (int i = 0; i < 100; ++i) s.push_back({1.0 * i, 0.0, 1.0});
  const auto a = split_samples(s, 0.3, 5), b = split_samples(s, 0.3, 5);
  ASSERT_EQ(a.second.size(), 30u);
  for (std::size_t i = 0; i < a.second.size(); ++i) EXPECT_EQ(a.second[i].v, b.second[i].v);
}

TEST(PowertrainIo, RoundTrips) {
  const auto map = build_engine_map(MapSpec::sedan());
  const auto back = engine_map_from_json(to_json(map));
  EXPECT_EQ(back.bsfc_surface(), map.bsfc_surface());
  const auto k = FuelCoeffs::sedan_appendix();
  const auto kk = fuel_coeffs_from_json(to_json(k));
  EXPECT_EQ(kk.o, k.o);
  EXPECT_EQ(kk.c, k.c);
  auto bad = to_json(k);
  bad["version"] = 99;
  EXPECT_THROW(fuel_coeffs_from_json(bad), InvalidSpec);
}
