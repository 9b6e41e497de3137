#include <cmath>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "emato/error.hpp"
#include "emato/scenarios/config.hpp"
#include "emato/scenarios/cycle.hpp"
#include "emato/scenarios/metrics.hpp"
#include "emato/scenarios/runner.hpp"

using namespace emato;
using namespace emato::scenarios;

TEST(Metrics, SpacingAndUnits) {
  EXPECT_DOUBLE_EQ(acc_spacing(20.0, 1.5, 50.0), 80.0);
  EXPECT_DOUBLE_EQ(acc_spacing(0.0, 1.5, 50.0), 50.0);
  // One gallon per mile.
  EXPECT_NEAR(mpg_from_ml_per_m(kGallonMl / kMileM), 1.0, 1e-12);
}

TEST(Metrics, ComputeFromSteps) {
  std::vector<polytraj::ExportRow> rows(10);
  for (auto& r : rows) {
    r.f_r = 2.0;
    r.j = 1.0;
  }
  rows[0].j = -3.0;
  const auto m = compute_metrics(rows, 0.1, 20.0);
  EXPECT_DOUBLE_EQ(m.duration, 1.0);
  EXPECT_DOUBLE_EQ(m.avg_speed, 20.0);
  EXPECT_NEAR(m.total_fuel, 2.0, 1e-12);
  EXPECT_NEAR(m.ml_per_m, 0.1, 1e-12);
  EXPECT_NEAR(m.mean_sq_jerk, (9.0 + 9.0) / 10.0, 1e-12);
  EXPECT_NEAR(m.mean_abs_jerk, 12.0 / 10.0, 1e-12);
  EXPECT_NEAR(m.mpg, (kGallonMl / kMileM) / 0.1, 1e-9);
}

TEST(Metrics, Errors) {
  std::vector<polytraj::ExportRow> rows(3);
  EXPECT_THROW(compute_metrics({}, 0.1, 10.0), InvalidArgument);
  EXPECT_THROW(compute_metrics(rows, 0.1, 0.0), UndefinedEfficiency);
  EXPECT_TRUE(std::isinf(compute_metrics(rows, 0.1, 5.0).mpg));
}

TEST(Cycle, InterpolationAndDistance) {
  const DrivingCycle c("ramp", {0.0, 10.0}, {0.0, 10.0});
  EXPECT_DOUBLE_EQ(c.speed_at(5.0), 5.0);
  EXPECT_NEAR(c.distance_at(10.0), 50.0, 1e-9);
  EXPECT_NEAR(c.total_distance(), 50.0, 1e-9);
}

TEST(Cycle, CsvRoundTrip) {
  const auto c = DrivingCycle::urban();
  const auto path = std::filesystem::temp_directory_path() / "emato_cycle_roundtrip.csv";
  {
    std::ofstream out(path);
    c.write_csv(out);
  }
  const auto back = DrivingCycle::from_csv(path, "urban");
  ASSERT_EQ(back.times().size(), c.times().size());
  for (std::size_t i = 0; i < c.times().size(); ++i) {
    EXPECT_NEAR(back.times()[i], c.times()[i], 1e-7);
    EXPECT_NEAR(back.speeds()[i], c.speeds()[i], 1e-7);
  }
  std::filesystem::remove(path);
  EXPECT_THROW(DrivingCycle::from_csv("/nonexistent/cycle.csv"), InvalidSpec);
  EXPECT_THROW(DrivingCycle::by_name("moon"), InvalidSpec);
}

TEST(LeadPrediction, ConstantCycle) {
  const auto c = DrivingCycle::constant(20.0, 60.0);
  const auto p = lead_prediction(c, 10.0, 50, 0.1, 80.0);
  ASSERT_EQ(p.agents.size(), 1u);
  const auto& a = p.agents[0];
  EXPECT_NEAR(a.l[0], 80.0 + 200.0, 1e-9);
  EXPECT_NEAR(a.l[49], 80.0 + 20.0 * 14.9, 1e-9);
  EXPECT_DOUBLE_EQ(a.v[25], 20.0);
  EXPECT_THROW(lead_prediction(c, 61.0, 5, 0.1), CycleExhausted);
}

TEST(Config, JsonRoundTrip) {
  auto cfg = make_config("sedan", "rolling", "emato-r");
  cfg.acc.terminal_speed_deficit = 2.0;
  cfg.frenet.lane_speeds_kmh = {40.0, 45.0};
  cfg.frenet.ego_lane = 0;
  const auto back = config_from_json(config_to_json(cfg));
  EXPECT_EQ(back.vehicle, "sedan");
  EXPECT_EQ(back.algorithm, "emato-r");
  EXPECT_EQ(back.slope.kind(), dynamics::SlopeKind::rolling);
  EXPECT_DOUBLE_EQ(back.acc.terminal_speed_deficit, 2.0);
  EXPECT_EQ(back.frenet.lane_speeds_kmh, cfg.frenet.lane_speeds_kmh);
  EXPECT_DOUBLE_EQ(back.params.mass, 1200.0);
  EXPECT_EQ(config_to_json(back), config_to_json(cfg));
}

TEST(Config, RejectsUnknownKeysAndValues) {
  EXPECT_THROW(config_from_json(nlohmann::json{{"vehicel", "truck"}}), InvalidSpec);
  EXPECT_THROW(config_from_json(nlohmann::json{{"overrides", {{"acc.gapmin", 1.0}}}}), InvalidSpec);
  EXPECT_THROW(config_from_json(nlohmann::json{{"dt", "fast"}}), InvalidSpec);
  EXPECT_THROW(make_config("truck", "flat", "warp"), InvalidSpec);
  EXPECT_THROW(config_from_json(nlohmann::json{{"overrides", {{"acc.gap_min", 400.0}}}}),
               InvalidSpec);
}

TEST(Png, OrderingAndPulses) {
  const auto r = run_cc_png(make_config("truck", "flat", "png"));
  EXPECT_LT(r.emato.metrics.total_fuel, r.cc.metrics.total_fuel);
  EXPECT_LT(r.cc.metrics.total_fuel, r.energy_quintic.metrics.total_fuel);
  std::vector<double> v;
  for (const auto& s : r.emato.steps) v.push_back(s.v);
  EXPECT_GE(count_extrema(v), 3);
  EXPECT_NEAR(r.emato.metrics.distance, 900.0, 1e-3);
  EXPECT_NEAR(r.cc.metrics.distance, 900.0, 1e-3);
}

TEST(Png, WithoutFuelWeightTracksCruise) {
  auto cfg = make_config("truck", "flat", "png");
  cfg.weights = polytraj::Weights{0.0, 1.0, 1.0, 1.0, 0.0, 0.0};
  const auto r = run_cc_png(cfg);
  EXPECT_NEAR(r.emato.metrics.total_fuel, r.cc.metrics.total_fuel,
              0.005 * r.cc.metrics.total_fuel);
}

TEST(CountExtrema, Examples) {
  const std::vector<double> flat{1, 1, 1}, wave{0, 1, 0, 1, 0}, mono{0, 1, 2, 3};
  EXPECT_EQ(count_extrema(flat), 0);
  EXPECT_EQ(count_extrema(wave), 3);
  EXPECT_EQ(count_extrema(mono), 0);
}

TEST(Acc, EmergencyStopKeepsMinimumGap) {
  auto cfg = make_config("truck", "flat", "emato-b");
  const auto cycle = DrivingCycle::emergency_stop(20.0, 15.0, 4.0, 35.0);
  for (const char* algo : {"emato-b", "quintic"}) {
    cfg.algorithm = algo;
    const auto r = run_acc(cfg, cycle);
    EXPECT_EQ(r.gap_violations, 0) << algo;
    EXPECT_GE(r.min_gap(), cfg.acc.spacing.gap_min - 1e-6) << algo;
    ASSERT_FALSE(r.steps.empty());
    EXPECT_LT(r.steps.back().v, 1.0) << algo;
  }
}

TEST(Acc, Deterministic) {
  const auto cfg = make_config("sedan", "rolling", "emato-r");
  const auto cycle = DrivingCycle::constant(18.0, 20.0);
  const auto a = run_acc(cfg, cycle), b = run_acc(cfg, cycle);
  EXPECT_EQ(metrics_json(a), metrics_json(b));
  ASSERT_EQ(a.steps.size(), b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) EXPECT_EQ(a.steps[i].v, b.steps[i].v);
}

TEST(Acc, RejectsForeignAlgorithm) {
  EXPECT_ANY_THROW(run_acc(make_config("truck", "flat", "qf-v"), DrivingCycle::constant(10, 10)));
}

TEST(Matrix, BaselinesAndSizes) {
  EXPECT_EQ(baseline_of("png"), "cc");
  EXPECT_EQ(baseline_of("emato-b"), "quintic");
  EXPECT_EQ(baseline_of("emato-v"), "quintic");
  EXPECT_EQ(baseline_of("emato-fm"), "qf-m");
  EXPECT_EQ(baseline_of("quintic"), "");
  EXPECT_EQ(acc_matrix().size(), 24u);
  EXPECT_EQ(frenet_matrix().size(), 36u);
  const auto cells = make_matrix("acc", {"truck"}, {"flat", "steep"}, {"quintic"});
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells[1].key(), "acc/truck/steep/quintic");
}

TEST(Matrix, ImprovementCsv) {
  const auto cells = make_matrix("acc", {"sedan"}, {"flat"}, {"quintic", "emato-b"});
  const auto res = run_matrix_serial(cells, make_config("sedan", "flat", "quintic"),
                                     DrivingCycle::constant(15.0, 12.0));
  ASSERT_EQ(res.size(), 2u);
  for (const auto& r : res) EXPECT_TRUE(r.ok) << r.error;
  std::ostringstream os;
  write_improvement_csv(os, res);
  const auto text = os.str();
  EXPECT_NE(text.find("scenario,vehicle,slope,algorithm,baseline"), std::string::npos);
  EXPECT_NE(text.find("acc,sedan,flat,emato-b,quintic"), std::string::npos);
}
