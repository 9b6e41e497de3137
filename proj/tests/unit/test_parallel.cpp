#include <gtest/gtest.h>

#include "emato/polytraj/candidate.hpp"
#include "emato/polytraj/quintic.hpp"
#include "emato/powertrain/fuel_fit.hpp"
#include "emato/scenarios/config.hpp"
#include "emato/scenarios/cycle.hpp"
#include "emato/scenarios/metrics.hpp"
#include "emato/scenarios/runner.hpp"

using namespace emato;

namespace {

std::vector<polytraj::Candidate> candidate_fan(std::size_t count) {
  const auto p = dynamics::VehicleParams::truck();
  const auto slope = dynamics::SlopeProfile::rolling();
  std::vector<polytraj::Candidate> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double v = 5.0 + 0.2 * static_cast<double>(i);
    const auto seg = polytraj::quintic_fit({0, 15, 0}, {0.5 * (15 + v) * 4.9, v, 0}, 4.9);
    out.push_back(polytraj::make_longitudinal_candidate(i, seg, 50, 0.1, slope, p));
  }
  return out;
}

}  // namespace

TEST(Parallel, GearPolicyMatchesSerial) {
  const auto fp = powertrain::FitPipeline::light_truck();
  const auto map = powertrain::build_engine_map(fp.map);
  const auto a = powertrain::optimize_gear_policy(map, fp.transmission, fp.grid, fp.mass, 0.85);
  const auto b =
      powertrain::optimize_gear_policy_serial(map, fp.transmission, fp.grid, fp.mass, 0.85);
  EXPECT_EQ(a.table(), b.table());
}

TEST(Parallel, CandidateChecksMatchSerial) {
  auto a = candidate_fan(80), b = candidate_fan(80);
  AgentPrediction lead;
  for (int k = 0; k < 50; ++k) lead.l.push_back(40.0 + 9.0 * 0.1 * k);
  TrafficPrediction traffic;
  traffic.agents.push_back(lead);
  const auto p = dynamics::VehicleParams::truck();
  polytraj::check_candidates(a, p, traffic);
  polytraj::check_candidates_serial(b, p, traffic);
  int infeasible = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].verdict, b[i].verdict) << i;
    infeasible += !a[i].feasible();
  }
  EXPECT_GT(infeasible, 0);
  EXPECT_LT(infeasible, 80);
}

TEST(Parallel, CandidateCostsMatchSerial) {
  const auto c = candidate_fan(64);
  for (const auto& w : {polytraj::Weights::holistic_acc(), polytraj::Weights::frenet_mixed()}) {
    const auto a = polytraj::candidate_costs(c, w);
    const auto b = polytraj::candidate_costs_serial(c, w);
    EXPECT_EQ(a, b);
  }
}

TEST(Parallel, MatrixMatchesSerial) {
  using namespace scenarios;
  const auto cells = make_matrix("acc", {"sedan", "truck"}, {"flat", "rolling"},
                                 {"quintic", "emato-r"});
  const auto base = make_config("truck", "flat", "quintic");
  const auto cycle = DrivingCycle::constant(16.0, 10.0);
  const auto a = run_matrix(cells, base, cycle, 4);
  const auto b = run_matrix_serial(cells, base, cycle);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].cell.key(), b[i].cell.key());
    EXPECT_EQ(a[i].ok, b[i].ok);
    EXPECT_EQ(metrics_json(a[i].run), metrics_json(b[i].run)) << a[i].cell.key();
  }
}
