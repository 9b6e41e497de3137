#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "emato/dynamics/slope_profile.hpp"
#include "emato/dynamics/vehicle_params.hpp"
#include "emato/error.hpp"
#include "emato/polytraj/candidate.hpp"
#include "emato/polytraj/quintic.hpp"
#include "emato/polytraj/reference_line.hpp"
#include "emato/polytraj/trajectory.hpp"

using namespace emato;
using namespace emato::polytraj;
using emato::dynamics::SlopeProfile;
using emato::dynamics::VehicleParams;

TEST(Quintic, RestToRestUnitMove) {
  const auto q = quintic_fit({0, 0, 0}, {1, 0, 0}, 1.0);
  const std::array<double, 6> expect{0, 0, 0, 10, -15, 6};
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(q.coeffs()[i], expect[i], 1e-12) << i;
  EXPECT_NEAR(q.pos(0.5), 0.5, 1e-12);
  EXPECT_NEAR(q.vel(0.5), 1.875, 1e-12);
  EXPECT_NEAR(q.jerk(0.0), 60.0, 1e-12);
}

TEST(Quintic, ConstantSpeedIsLinear) {
  const auto q = quintic_fit({0, 10, 0}, {50, 10, 0}, 5.0);
  for (double t : {0.0, 1.3, 4.9}) {
    EXPECT_NEAR(q.pos(t), 10.0 * t, 1e-10);
    EXPECT_NEAR(q.acc(t), 0.0, 1e-10);
  }
}

TEST(Quintic, ReproducesRandomBoundaries) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-20.0, 20.0), ut(0.5, 8.0);
  for (int i = 0; i < 1000; ++i) {
    const BoundaryState a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
    const double T = ut(rng);
    const auto q = quintic_fit(a, b, T);
    const auto s0 = q.state(0.0), s1 = q.state(T);
    const double scale = 1.0 + std::abs(b.p) + std::abs(b.dp) + std::abs(b.ddp);
    EXPECT_NEAR(s0.p, a.p, 1e-9 * scale);
    EXPECT_NEAR(s0.dp, a.dp, 1e-9 * scale);
    EXPECT_NEAR(s0.ddp, a.ddp, 1e-9 * scale);
    EXPECT_NEAR(s1.p, b.p, 1e-9 * scale);
    EXPECT_NEAR(s1.dp, b.dp, 1e-9 * scale);
    EXPECT_NEAR(s1.ddp, b.ddp, 1e-9 * scale);
  }
}

TEST(Quintic, RejectsZeroDuration) {
  EXPECT_ANY_THROW(quintic_fit({0, 0, 0}, {1, 0, 0}, 0.0));
}

TEST(Quintic, OneDimensionalSampling) {
  const dynamics::KinState start{0.0, 10.0, 0.0};
  const std::vector<double> speeds{8.0, 10.0, 12.0};
  const auto grid = speed_end_grid(start, speeds, 5.0);
  ASSERT_EQ(grid.size(), 3u);
  EXPECT_NEAR(grid[0].l, 45.0, 1e-12);
  EXPECT_NEAR(grid[2].l, 55.0, 1e-12);
  const auto segs = sample_1d_candidates(start, grid, 5.0);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    EXPECT_NEAR(segs[i].pos(5.0), grid[i].l, 1e-9);
    EXPECT_NEAR(segs[i].vel(5.0), speeds[i], 1e-9);
    EXPECT_NEAR(segs[i].vel(0.0), 10.0, 1e-12);
  }
}

TEST(Quintic, SpeedSamplesClampAndDeduplicate) {
  const std::vector<double> offs{-3, 0, 3, 6};
  const auto v = speed_samples(25.0, offs, 0.0, 27.0);
  EXPECT_EQ(v, (std::vector<double>{22.0, 25.0, 27.0}));
}

TEST(ReferenceLine, StraightMapping) {
  const auto ref = ReferenceLine::straight(100.0, {-3.5, 0.0, 3.5});
  const auto g = ref.to_global(30.0, 3.5);
  EXPECT_NEAR(g.x, 30.0, 1e-9);
  EXPECT_NEAR(g.y, 3.5, 1e-9);
  EXPECT_NEAR(ref.curvature(40.0), 0.0, 1e-12);
  EXPECT_EQ(ref.nearest_lane(3.0), 2u);
  EXPECT_THROW(ref.to_global(120.0, 0.0), RangeError);
}

TEST(ReferenceLine, CurvedRoundTrip) {
  std::vector<Vec2> wp;
  for (int i = 0; i <= 40; ++i) {
    const double a = 0.5 * std::numbers::pi * i / 40.0;
    wp.push_back({100.0 * std::sin(a), 100.0 * (1.0 - std::cos(a))});
  }
  const ReferenceLine ref(wp);
  EXPECT_NEAR(ref.length(), 50.0 * std::numbers::pi, 0.05);
  EXPECT_NEAR(ref.curvature(70.0), 0.01, 1e-3);
  for (double s : {10.0, 60.0, 120.0})
    for (double d : {-2.0, 0.0, 3.0}) {
      const auto g = ref.to_global(s, d);
      const auto f = ref.to_frenet(g);
      EXPECT_NEAR(f.x, s, 1e-6);
      EXPECT_NEAR(f.y, d, 1e-6);
    }
}

TEST(ReferenceLine, RejectsRepeatedWaypoints) {
  EXPECT_THROW(ReferenceLine({{0, 0}, {0, 0}}), InvalidSpec);
}

TEST(PathTrajectory, SteadyStateFromGlobalPoints) {
  const auto ref = ReferenceLine::straight(500.0);
  const auto s = quintic_fit({0, 15, 0}, {75, 15, 0}, 5.0);
  const auto d = quintic_fit({0, 0, 0}, {0, 0, 0}, 5.0);
  const auto global = frenet_to_global(s, d, ref, 51, 0.1);
  std::vector<double> road(51);
  for (std::size_t k = 0; k < 51; ++k) road[k] = s.pos(0.1 * k);
  const auto params = VehicleParams::truck();
  const auto traj = to_path_trajectory(global, road, 0.0, 0.1, SlopeProfile::flat(), params);
  ASSERT_EQ(traj.size(), 51u);
  for (const auto& z : traj.z) {
    EXPECT_NEAR(z.v, 15.0, 1e-9);
    EXPECT_NEAR(z.a_v, 0.0, 1e-7);
    EXPECT_NEAR(z.jerk, 0.0, 1e-5);
  }
  EXPECT_NEAR(traj.z.back().l, 75.0, 1e-9);
  EXPECT_GT(traj.fuel(), 0.0);
}

namespace {

Candidate cruise(double v, std::size_t index = 0) {
  const auto seg = quintic_fit({0, v, 0}, {5 * v, v, 0}, 5.0);
  return make_longitudinal_candidate(index, seg, 51, 0.1, SlopeProfile::flat(),
                                     VehicleParams::truck());
}

}  // namespace

TEST(Feasibility, Verdicts) {
  const auto params = VehicleParams::truck();
  auto c = cruise(10.0);
  EXPECT_EQ(feasibility_check(c, params, {}), Infeasibility::none);

  TrafficPrediction traffic;
  AgentPrediction blocker;
  blocker.l.assign(51, 30.0);
  traffic.agents.push_back(blocker);
  EXPECT_EQ(feasibility_check(c, params, traffic), Infeasibility::collision);

  const auto jerky = quintic_fit({0, 10, 0}, {30, 0, 0}, 1.0);
  auto j = make_longitudinal_candidate(1, jerky, 11, 0.1, SlopeProfile::flat(), params);
  EXPECT_EQ(feasibility_check(j, params, {}), Infeasibility::overjerky);

  traffic.agents[0].l.assign(10, 30.0);
  EXPECT_THROW(feasibility_check(c, params, traffic), AlignmentError);
}

TEST(Objective, HandComputedValue) {
  PathTrajectory t;
  t.dt = 0.5;
  t.z.push_back({0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0});
  t.u.push_back({});
  Weights w;
  w.w_v = 0.5;
  EXPECT_DOUBLE_EQ(evaluate_objective(t, w), 0.25);
  const std::vector<double> vref{1.0};
  EXPECT_DOUBLE_EQ(evaluate_objective(t, w, vref), 0.0);
  const std::vector<double> bad{1.0, 2.0};
  EXPECT_THROW(evaluate_objective(t, w, bad), AlignmentError);
}

TEST(Objective, FuelTermUsesSpeedGuard) {
  PathTrajectory t;
  t.dt = 1.0;
  t.z.push_back({0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.2});
  t.u.push_back({});
  Weights w;
  w.w_f = 1.0;
  EXPECT_DOUBLE_EQ(evaluate_objective(t, w), 0.2 / kSpeedGuard);
}

TEST(Objective, NonNegativeProperty) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uv(0.0, 27.0);
  for (int i = 0; i < 50; ++i) {
    const auto c = cruise(uv(rng));
    for (const auto& w : {Weights::holistic_acc(), Weights::frenet_mixed(), Weights::frenet_energy()})
      EXPECT_GE(evaluate_objective(c.path, w), 0.0);
  }
}

TEST(SelectCandidate, PicksCheapestFeasible) {
  std::vector<Candidate> cands{cruise(15.0, 0), cruise(19.0, 1), cruise(25.0, 2)};
  const auto w = Weights::frenet_speed(19.44);
  EXPECT_EQ(select_candidate(cands, w), 1u);
  cands[1].verdict = Infeasibility::collision;
  const auto pick = select_candidate(cands, w);
  EXPECT_NE(pick, 1u);
  for (auto& c : cands) c.verdict = Infeasibility::limits;
  EXPECT_THROW(select_candidate(cands, w), NoFeasibleCandidate);
}

TEST(SelectCandidate, TiesGoToLowestIndex) {
  std::vector<Candidate> cands{cruise(15.0, 4), cruise(15.0, 2)};
  EXPECT_EQ(select_candidate(cands, Weights::frenet_speed()), 1u);
}

TEST(Weights, Presets) {
  const auto h = Weights::holistic_acc();
  EXPECT_DOUBLE_EQ(h.w_a, 14.51);
  EXPECT_DOUBLE_EQ(h.w_b, 14.51);
  EXPECT_DOUBLE_EQ(h.w_j, 1.16);
  EXPECT_DOUBLE_EQ(h.w_f, 38.91);
  EXPECT_DOUBLE_EQ(h.w_v, 0.0);
  const auto m = Weights::frenet_mixed(20.0);
  EXPECT_DOUBLE_EQ(m.w_v, 1.0);
  EXPECT_DOUBLE_EQ(m.w_j, 0.001);
  EXPECT_DOUBLE_EQ(m.w_f, 100.0);
  Weights bad;
  bad.w_f = -1.0;
  EXPECT_THROW(bad.validate(), InvalidSpec);
}

TEST(Export, RowsFollowCandidate) {
  const auto c = cruise(10.0);
  const auto rows = export_rows(c, 2.0);
  ASSERT_EQ(rows.size(), c.size());
  EXPECT_DOUBLE_EQ(rows[10].t, 3.0);
  EXPECT_DOUBLE_EQ(rows[10].v, c.path.z[10].v);
  std::ostringstream os;
  write_candidate_csv(os, c);
  EXPECT_EQ(os.str().substr(0, 8), "t,x,y,ya");
}
