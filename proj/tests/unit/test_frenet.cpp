#include <cmath>

#include <gtest/gtest.h>

#include "emato/error.hpp"
#include "emato/polytraj/candidate.hpp"
#include "emato/polytraj/quintic.hpp"
#include "emato/scenarios/config.hpp"
#include "emato/scenarios/runner.hpp"

using namespace emato;
using namespace emato::scenarios;
using polytraj::GlobalPoint;

namespace {

std::vector<GlobalPoint> line(std::size_t n, double x0, double y) {
  std::vector<GlobalPoint> p(n);
  for (std::size_t k = 0; k < n; ++k) p[k] = {x0 + static_cast<double>(k), y, 0.0, 0.0};
  return p;
}

TrafficPrediction agent_along(std::span<const GlobalPoint> pts) {
  AgentPrediction a;
  for (const auto& p : pts) {
    a.x.push_back(p.x);
    a.y.push_back(p.y);
  }
  TrafficPrediction t;
  t.agents.push_back(a);
  return t;
}

double distance_to_polyline(const GlobalPoint& q, std::span<const GlobalPoint> poly) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
    const double ex = poly[i + 1].x - poly[i].x, ey = poly[i + 1].y - poly[i].y;
    const double len2 = ex * ex + ey * ey;
    double u = len2 > 0 ? ((q.x - poly[i].x) * ex + (q.y - poly[i].y) * ey) / len2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    best = std::min(best, std::hypot(q.x - poly[i].x - u * ex, q.y - poly[i].y - u * ey));
  }
  return best;
}

}  // namespace

TEST(HomotopyCheck, IdenticalTrajectoriesAccept) {
  const auto ref = line(20, 0.0, 0.0);
  const auto far = line(20, 0.0, 20.0);
  const auto c = homotopy_safety_check(ref, ref, agent_along(far), 3.0);
  EXPECT_TRUE(c.accept);
  EXPECT_DOUBLE_EQ(c.xi, 0.0);
  EXPECT_NEAR(c.clearance, 20.0, 1e-12);
}

TEST(HomotopyCheck, EmptyTrafficAccepts) {
  const auto ref = line(20, 0.0, 0.0);
  const auto opt = line(20, 0.0, 50.0);
  EXPECT_TRUE(homotopy_safety_check(opt, ref, {}, 3.0).accept);
}

TEST(HomotopyCheck, CloseFollowerRejectsLargeDisplacement) {
  const auto ref = line(20, 0.0, 0.0);
  const auto follower = line(20, -5.0, 0.0);
  const auto opt = line(20, 0.0, 6.0);
  const auto c = homotopy_safety_check(opt, ref, agent_along(follower), 3.0);
  EXPECT_FALSE(c.accept);
  EXPECT_NEAR(c.xi, 6.0, 1e-12);
  EXPECT_NEAR(c.clearance, 5.0, 1e-12);
  const auto small = line(20, 0.0, 1.5);
  EXPECT_TRUE(homotopy_safety_check(small, ref, agent_along(follower), 3.0).accept);
}

TEST(HomotopyCheck, LengthMismatchThrows) {
  EXPECT_THROW(homotopy_safety_check(line(5, 0, 0), line(6, 0, 0), {}, 3.0), AlignmentError);
}

TEST(PlaceOnPath, PointsStayOnCandidatePath) {
  const auto cfg = make_config("truck", "flat", "emato-fm");
  const auto road = frenet_road(cfg.frenet);
  const auto s = polytraj::quintic_fit({0, 14, 0}, {0.5 * (14 + 16) * 4.9, 16, 0}, 4.9);
  const auto d = polytraj::quintic_fit({0, 0, 0}, {3.5, 0, 0}, 4.9);
  const auto cand = polytraj::make_frenet_candidate(0, s, d, road, 50, 0.1, 0.0, cfg.slope,
                                                    cfg.params);
  ASSERT_EQ(cand.global.size(), 50u);
  auto opt = cand.path;
  for (std::size_t k = 0; k < opt.size(); ++k) opt.z[k].l *= 0.9;
  const auto placed = place_on_path(cand, opt, road);
  ASSERT_EQ(placed.size(), cand.global.size());
  // On a straight road the point (x, y) lies on the curve when y = d(tau) with s(tau) = x.
  for (const auto& p : placed) {
    double lo = 0.0, hi = 4.9;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (s.pos(mid) < p.x ? lo : hi) = mid;
    }
    EXPECT_NEAR(p.y, d.pos(0.5 * (lo + hi)), 1e-6);
    EXPECT_LE(distance_to_polyline(p, cand.global), 1e-2);
  }
  // Unchanged arc lengths return the candidate itself.
  const auto same = place_on_path(cand, cand.path, road);
  for (std::size_t k = 0; k < same.size(); ++k) {
    EXPECT_NEAR(same[k].x, cand.global[k].x, 1e-6);
    EXPECT_NEAR(same[k].y, cand.global[k].y, 1e-6);
  }
}

TEST(FrenetTraffic, LayoutIsSeeded) {
  const FrenetParams p;
  const auto a = FrenetTraffic::layout(p, 7), b = FrenetTraffic::layout(p, 7),
             c = FrenetTraffic::layout(p, 8);
  ASSERT_EQ(a.vehicles.size(), 6u);
  bool differs = false;
  for (std::size_t i = 0; i < a.vehicles.size(); ++i) {
    EXPECT_EQ(a.vehicles[i].s0, b.vehicles[i].s0);
    EXPECT_GE(a.vehicles[i].s0, p.first_vehicle_min);
    differs |= a.vehicles[i].s0 != c.vehicles[i].s0;
  }
  EXPECT_TRUE(differs);
  EXPECT_DOUBLE_EQ(a.vehicles[0].d, -3.5);
  EXPECT_DOUBLE_EQ(a.vehicles[5].d, 3.5);
}

TEST(FrenetTraffic, PredictionMovesAlongLane) {
  const FrenetParams p;
  const auto road = frenet_road(p);
  const auto t = FrenetTraffic::layout(p, 7);
  const auto pred = t.predict(road, 2.0, 10, 0.1);
  ASSERT_EQ(pred.agents.size(), 6u);
  const auto& v0 = t.vehicles[0];
  EXPECT_NEAR(pred.agents[0].x[0], v0.s0 + 2.0 * v0.v, 1e-6);
  EXPECT_NEAR(pred.agents[0].y[9], v0.d, 1e-6);
}

class FrenetRuns : public ::testing::Test {
 protected:
  static RunResult run(const std::string& algo) {
    auto cfg = make_config("truck", "flat", algo);
    cfg.frenet.distance = 800.0;
    return run_frenet(cfg, FrenetTraffic::layout(cfg.frenet, cfg.seed));
  }
};

TEST_F(FrenetRuns, NoCollisions) {
  for (const char* algo : {"qf-v", "qf-e", "emato-fm"}) {
    const auto r = run(algo);
    EXPECT_EQ(r.collisions, 0) << algo;
    EXPECT_GE(r.min_clearance(), 3.0 - 1e-6) << algo;
    EXPECT_GE(r.metrics.distance, 800.0 - 1e-6) << algo;
  }
}

TEST_F(FrenetRuns, SpeedPolicyIsFastest) {
  const auto v = run("qf-v"), m = run("qf-m"), e = run("qf-e");
  EXPECT_GE(v.metrics.avg_speed, m.metrics.avg_speed);
  EXPECT_GE(v.metrics.avg_speed, e.metrics.avg_speed);
  EXPECT_GE(e.metrics.mpg, v.metrics.mpg);
}

TEST(FrenetRun, RejectsLongitudinalAlgorithm) {
  auto cfg = make_config("truck", "flat", "emato-b");
  EXPECT_THROW(run_frenet(cfg, FrenetTraffic::layout(cfg.frenet, 1)), InvalidSpec);
}
