#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "common.hpp"
#include "emato/error.hpp"
#include "emato/optimizer/problem.hpp"
#include "emato/polytraj/quintic.hpp"
#include "emato/scenarios/runner.hpp"

namespace emato::scenarios {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRoadMargin = 1500.0;  // m of road beyond the target distance
constexpr double kTimeBudget = 1200.0;  // s

struct FrenetState {
  polytraj::BoundaryState s;
  polytraj::BoundaryState d;
};

// Executable plan: path-coordinate trajectory plus its planar and road trace.
struct Plan {
  polytraj::PathTrajectory path;
  std::vector<polytraj::GlobalPoint> global;
  std::vector<FrenetState> frenet;

  std::size_t size() const { return path.size(); }
};

std::optional<std::size_t> policy_of(const std::string& algo, bool& refine) {
  static const char* names[] = {"qf-v", "qf-m", "qf-e"};
  for (std::size_t i = 0; i < 3; ++i) {
    if (algo == names[i]) {
      refine = false;
      return i;
    }
    if (algo == std::string("emato-f") + names[i][3]) {
      refine = true;
      return i;
    }
  }
  return std::nullopt;
}

polytraj::Weights policy_weights(std::size_t policy, double v_d) {
  switch (policy) {
    case 0: return polytraj::Weights::frenet_speed(v_d);
    case 1: return polytraj::Weights::frenet_mixed(v_d);
    default: return polytraj::Weights::frenet_energy();
  }
}

// Road point that keeps going straight past either end of the line.
polytraj::Vec2 road_point(const polytraj::ReferenceLine& ref, double s, double d) {
  const double sc = std::clamp(s, 0.0, ref.length());
  const auto p = ref.to_global(sc, d);
  const double h = ref.heading(sc);
  return {p.x + (s - sc) * std::cos(h), p.y + (s - sc) * std::sin(h)};
}

Plan plan_from_candidate(const polytraj::Candidate& c) {
  Plan p;
  p.path = c.path;
  p.global = c.global;
  const double dt = c.path.dt;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double t = static_cast<double>(k) * dt;
    p.frenet.push_back({c.s_seg.state(t), c.d_seg.state(t)});
  }
  return p;
}

Plan tail(const Plan& p, std::size_t from) {
  Plan t;
  t.path = detail::tail(p.path, from);
  t.global.assign(p.global.begin() + static_cast<std::ptrdiff_t>(from), p.global.end());
  t.frenet.assign(p.frenet.begin() + static_cast<std::ptrdiff_t>(from), p.frenet.end());
  return t;
}

double min_distance(const polytraj::GlobalPoint& g, const TrafficPrediction& traffic,
                    std::size_t k) {
  double best = kInf;
  for (const auto& a : traffic.agents) best = std::min(best, std::hypot(g.x - a.x[k], g.y - a.y[k]));
  return best;
}

bool plan_is_clear(const Plan& p, const TrafficPrediction& traffic, double r_safe) {
  for (std::size_t k = 0; k < p.size(); ++k)
    if (min_distance(p.global[k], traffic, k) < r_safe) return false;
  return true;
}

// Foot of an agent on the candidate polyline: path coordinate and distance.
std::pair<double, double> project_on_path(const polytraj::Candidate& c, double x, double y) {
  double best_l = c.path.z.front().l, best_d = kInf;
  for (std::size_t k = 0; k + 1 < c.size(); ++k) {
    const auto& a = c.global[k];
    const auto& b = c.global[k + 1];
    const double ex = b.x - a.x, ey = b.y - a.y;
    const double len2 = ex * ex + ey * ey;
    double u = len2 > 0.0 ? ((x - a.x) * ex + (y - a.y) * ey) / len2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    const double dist = std::hypot(a.x + u * ex - x, a.y + u * ey - y);
    if (dist < best_d) {
      best_d = dist;
      best_l = c.path.z[k].l + u * (c.path.z[k + 1].l - c.path.z[k].l);
    }
  }
  return {best_l, best_d};
}

// Agents that come within r_safe of the candidate path become bounds on the
// path coordinate, on the side the reference passes them.
void path_bounds(const polytraj::Candidate& c, const polytraj::PathTrajectory& ref,
                 const TrafficPrediction& traffic, double r_safe,
                 optimizer::ConstraintSpec& cons) {
  const std::size_t n = c.size();
  cons.path_l_lo.assign(n, -kInf);
  cons.path_l_hi.assign(n, kInf);
  for (const auto& a : traffic.agents)
    for (std::size_t k = 1; k < n; ++k) {
      const auto [l_obs, delta] = project_on_path(c, a.x[k], a.y[k]);
      if (delta >= r_safe) continue;
      const double half = std::sqrt(r_safe * r_safe - delta * delta);
      const double l_ref = ref.z[k].l;
      if (l_ref <= l_obs - half)
        cons.path_l_hi[k] = std::min(cons.path_l_hi[k], l_obs - half);
      else if (l_ref >= l_obs + half)
        cons.path_l_lo[k] = std::max(cons.path_l_lo[k], l_obs + half);
    }
}

// Maps the optimized path coordinates back onto the candidate's quintic path.
Plan reallocate(const polytraj::Candidate& c, const polytraj::PathTrajectory& opt,
                const polytraj::ReferenceLine& road) {
  const std::size_t n = c.size();
  const double dt = c.path.dt;
  const double T = static_cast<double>(n - 1) * dt;
  std::vector<double> l_geo(n), tau(n);
  for (std::size_t k = 0; k < n; ++k) {
    l_geo[k] = c.path.z[k].l;
    tau[k] = static_cast<double>(k) * dt;
  }
  auto to_tau = [&](double l) {
    if (l <= l_geo.front()) return 0.0;
    if (l >= l_geo.back()) return T;
    const auto it = std::upper_bound(l_geo.begin(), l_geo.end(), l);
    const auto i = static_cast<std::size_t>(it - l_geo.begin());
    const double span = l_geo[i] - l_geo[i - 1];
    const double u = span > 0.0 ? (l - l_geo[i - 1]) / span : 0.0;
    return tau[i - 1] + u * (tau[i] - tau[i - 1]);
  };
  auto at = [&](double t) {
    return road_point(road, c.s_seg.pos(t), c.d_seg.pos(t));
  };
  auto gain = [&](double t) {
    constexpr double h = 1e-4;
    const auto a = at(t - h), b = at(t + h);
    return std::hypot(b.x - a.x, b.y - a.y) / (2.0 * h);
  };

  Plan p;
  p.path = opt;
  p.global.resize(n);
  p.frenet.resize(n);
  std::vector<double> xs(n), ys(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& z = opt.z[k];
    const double t = to_tau(z.l);
    const auto pt = at(t);
    xs[k] = pt.x;
    ys[k] = pt.y;
    const double g = gain(t);
    double td = 0.0, tdd = 0.0;
    if (g > 1e-6) {
      constexpr double h = 1e-4;
      const double dg = (gain(t + h) - gain(t - h)) / (2.0 * h);
      td = z.v / g;
      tdd = (z.a_v - dg * td * td) / g;
    }
    const auto s = c.s_seg.state(t), d = c.d_seg.state(t);
    p.frenet[k].s = {s.p, s.dp * td, s.ddp * td * td + s.dp * tdd};
    p.frenet[k].d = {d.p, d.dp * td, d.ddp * td * td + d.dp * tdd};
  }
  const auto dx = polytraj::differentiate(xs, dt), dy = polytraj::differentiate(ys, dt);
  const auto ddx = polytraj::differentiate(dx, dt), ddy = polytraj::differentiate(dy, dt);
  for (std::size_t k = 0; k < n; ++k) {
    auto& g = p.global[k];
    g.x = xs[k];
    g.y = ys[k];
    const double sp2 = dx[k] * dx[k] + dy[k] * dy[k];
    if (sp2 > 1e-12) {
      g.yaw = std::atan2(dy[k], dx[k]);
      g.curvature = (dx[k] * ddy[k] - dy[k] * ddx[k]) / (sp2 * std::sqrt(sp2));
    } else {
      g.yaw = k > 0 ? p.global[k - 1].yaw : c.global[0].yaw;
    }
  }
  return p;
}

// Decelerates along the road while settling on the nearest lane center.
Plan braking(const FrenetState& x, const polytraj::ReferenceLine& road, std::size_t n, double dt,
             double l0, const ScenarioConfig& cfg) {
  const double T = static_cast<double>(n - 1) * dt;
  const double v_end = std::max(0.0, x.s.dp - 0.9 * cfg.params.limits.a_b_max * T);
  const double s_end = x.s.p + 0.5 * (x.s.dp + v_end) * T;
  const double lane = road.lane_offsets()[road.nearest_lane(x.d.p)];
  const auto c = polytraj::make_frenet_candidate(
      0, polytraj::quintic_fit(x.s, {s_end, v_end, 0.0}, T),
      polytraj::quintic_fit(x.d, {lane, 0.0, 0.0}, T), road, n, dt, l0, cfg.slope, cfg.params);
  return plan_from_candidate(c);
}

polytraj::ExportRow row_of(const Plan& p, std::size_t k, double t) {
  auto r = detail::row_1d(p.path, k, t);
  r.x = p.global[k].x;
  r.y = p.global[k].y;
  r.yaw = p.global[k].yaw;
  r.s = p.frenet[k].s.p;
  r.d = p.frenet[k].d.p;
  return r;
}

}  // namespace

FrenetTraffic FrenetTraffic::layout(const FrenetParams& p, std::uint64_t seed) {
  FrenetTraffic out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> first(p.first_vehicle_min, p.first_vehicle_max);
  int id = 1;
  for (std::size_t i = 0; i < p.lane_speeds_kmh.size(); ++i) {
    const double s0 = first(rng);
    for (int j = 0; j < p.vehicles_per_lane; ++j) {
      Vehicle v;
      v.id = id++;
      v.lane = static_cast<int>(i);
      v.s0 = s0 + p.vehicle_spacing * j;
      v.d = (static_cast<double>(i) - p.ego_lane) * p.lane_width;
      v.v = p.lane_speeds_kmh[i] / 3.6;
      out.vehicles.push_back(v);
    }
  }
  return out;
}

TrafficPrediction FrenetTraffic::predict(const polytraj::ReferenceLine& ref, double t0,
                                         std::size_t n, double dt) const {
  TrafficPrediction pred;
  pred.dt = dt;
  for (const auto& veh : vehicles) {
    AgentPrediction a;
    a.id = veh.id;
    for (std::size_t k = 0; k < n; ++k) {
      const double t = t0 + static_cast<double>(k) * dt;
      const auto p = road_point(ref, veh.s0 + veh.v * t, veh.d);
      a.x.push_back(p.x);
      a.y.push_back(p.y);
      a.v.push_back(veh.v);
    }
    pred.agents.push_back(std::move(a));
  }
  return pred;
}

polytraj::ReferenceLine frenet_road(const FrenetParams& p) {
  std::vector<double> lanes;
  for (std::size_t i = 0; i < p.lane_speeds_kmh.size(); ++i)
    lanes.push_back((static_cast<double>(i) - p.ego_lane) * p.lane_width);
  return polytraj::ReferenceLine::straight(p.distance + kRoadMargin, lanes);
}

std::vector<polytraj::GlobalPoint> place_on_path(const polytraj::Candidate& cand,
                                                 const polytraj::PathTrajectory& opt,
                                                 const polytraj::ReferenceLine& road) {
  if (opt.size() != cand.size()) throw AlignmentError("trajectory and candidate differ in length");
  return reallocate(cand, opt, road).global;
}

SafetyCheck homotopy_safety_check(std::span<const polytraj::GlobalPoint> opt,
                                  std::span<const polytraj::GlobalPoint> ref,
                                  const TrafficPrediction& traffic, double r_safe) {
  if (opt.size() != ref.size()) throw AlignmentError("trajectories differ in length");
  for (const auto& a : traffic.agents)
    if (a.x.size() != ref.size() || a.y.size() != ref.size())
      throw AlignmentError("traffic prediction horizon differs from the trajectory");
  SafetyCheck c;
  c.clearance = kInf;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    c.xi = std::max(c.xi, std::hypot(opt[k].x - ref[k].x, opt[k].y - ref[k].y));
    for (const auto& a : traffic.agents)
      c.clearance = std::min(c.clearance, std::hypot(ref[k].x - a.x[k], ref[k].y - a.y[k]));
  }
  c.accept = c.xi + r_safe <= c.clearance;
  return c;
}

RunResult run_frenet(const ScenarioConfig& cfg, const FrenetTraffic& traffic) {
  cfg.validate();
  bool refine = false;
  const auto policy = policy_of(cfg.algorithm, refine);
  if (!policy) throw InvalidSpec("Frenet algorithm must be qf-v/m/e or emato-fv/fm/fe");

  const auto& fp = cfg.frenet;
  const auto& geo = fp.safety;
  const auto n = static_cast<std::size_t>(cfg.knots);
  const auto m = static_cast<std::size_t>(cfg.replan_steps());
  const double T = cfg.horizon();
  const double dt = cfg.dt;
  const auto road = frenet_road(fp);
  const auto select_w = policy_weights(*policy, fp.v_d);
  const auto w = cfg.weights.value_or(polytraj::Weights::holistic_acc());

  RunResult r;
  r.name = "frenet";
  r.algorithm = cfg.algorithm;
  r.dt = dt;

  FrenetState x{{0.0, fp.ego_speed_kmh / 3.6, 0.0}, {0.0, 0.0, 0.0}};
  const double s_start = x.s.p;
  double l = 0.0;
  std::optional<Plan> prev;
  bool done = false;

  for (std::size_t rollout = 0; !done; ++rollout) {
    const double t0 = static_cast<double>(rollout * m) * dt;
    if (t0 > kTimeBudget) {
      r.events.push_back({t0, "time-budget", "target distance not reached"});
      break;
    }
    const auto pred = traffic.predict(road, t0, n, dt);

    const auto speeds =
        polytraj::speed_samples(fp.v_d, fp.speed_offsets, 0.0, cfg.params.limits.v_max);
    std::vector<polytraj::Candidate> cands;
    for (const double d_end : road.lane_offsets())
      for (const double v : speeds) {
        const double s_end = x.s.p + 0.5 * (x.s.dp + v) * T;
        cands.push_back(polytraj::make_frenet_candidate(
            cands.size(), polytraj::quintic_fit(x.s, {s_end, v, 0.0}, T),
            polytraj::quintic_fit(x.d, {d_end, 0.0, 0.0}, T), road, n, dt, l, cfg.slope,
            cfg.params));
      }
    polytraj::check_candidates(cands, cfg.params, pred, geo);

    std::optional<Plan> plan;
    std::optional<std::size_t> chosen;
    try {
      chosen = polytraj::select_candidate(cands, select_w);
    } catch (const NoFeasibleCandidate&) {
    }
    if (chosen) {
      const auto& c = cands[*chosen];
      plan = plan_from_candidate(c);
      if (refine) {
        const auto ref = optimizer::discretize_reference(c.path, cfg.params);
        optimizer::ConstraintSpec cons;
        cons.kind = optimizer::ConstraintKind::frenet_homotopy;
        path_bounds(c, ref, pred, geo.r_safe, cons);
        const auto problem = optimizer::build_problem(
            ref, dynamics::predict_slope(cfg.slope, c.s), cons, w, cfg.params);
        const auto sol = optimizer::solve(problem, cfg.solver);
        r.solves.push_back(sol.stats);
        const bool ok = sol.stats.status != optimizer::SolveStatus::infeasible &&
                        sol.stats.max_violation <= 10.0 * cfg.solver.tol_feas;
        if (!ok) {
          r.events.push_back({t0, "solver-fallback",
                              std::string(optimizer::to_string(sol.stats.status)) + ": " +
                                  sol.stats.diagnostic});
        } else {
          auto refined = reallocate(c, sol.traj, road);
          const auto check = homotopy_safety_check(refined.global, c.global, pred, geo.r_safe);
          if (check.accept) {
            plan = std::move(refined);
          } else {
            r.events.push_back({t0, "homotopy-reject",
                                "xi " + std::to_string(check.xi) + " m, clearance " +
                                    std::to_string(check.clearance) + " m"});
          }
        }
      }
    }
    if (!plan && prev && prev->size() >= 2 * m + 1) {
      auto rest = tail(*prev, m);
      TrafficPrediction head = pred;
      for (auto& a : head.agents) {
        a.x.resize(rest.size());
        a.y.resize(rest.size());
      }
      if (plan_is_clear(rest, head, geo.r_safe)) {
        r.events.push_back({t0, "tail-fallback", "previous plan tail"});
        plan = std::move(rest);
      }
    }
    if (!plan) {
      r.events.push_back({t0, "emergency-brake", "no safe plan"});
      plan = braking(x, road, n, dt, l, cfg);
    }

    double fuel = 0.0;
    double t = t0;
    for (std::size_t k = 0; k < m; ++k) {
      r.steps.push_back(row_of(*plan, k, t));
      fuel += plan->path.z[k].f_r * dt;
      const double clear = min_distance(plan->global[k], pred, k);
      r.clearance.push_back(clear);
      if (clear < geo.r_safe - 1e-6) {
        ++r.collisions;
        r.events.push_back({t, "collision", "clearance " + std::to_string(clear) + " m"});
      }
      t += dt;
      if (plan->frenet[k + 1].s.p - s_start >= fp.distance) {
        x = plan->frenet[k + 1];
        l = plan->path.z[k + 1].l;
        done = true;
        break;
      }
    }
    r.rollout_fuel.push_back(fuel);
    if (done) break;
    x = plan->frenet[m];
    l = plan->path.z[m].l;
    prev = std::move(plan);
  }
  r.metrics = compute_metrics(r.steps, dt, x.s.p - s_start);
  return r;
}

}  // namespace emato::scenarios
