#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "emato/error.hpp"
#include "emato/optimizer/problem.hpp"
#include "emato/polytraj/quintic.hpp"
#include "emato/scenarios/runner.hpp"

namespace emato::scenarios {

namespace {

struct Course {
  std::size_t n = 0;  // knots per rollout
  int rollouts = 0;
};

Course course(const ScenarioConfig& cfg) {
  const auto& g = cfg.png;
  Course c;
  c.n = static_cast<std::size_t>(std::lround(g.replan_distance / g.v_d / cfg.dt)) + 1;
  if (c.n < 3) throw InvalidSpec("PnG replan distance too short for the time step");
  c.rollouts = static_cast<int>(std::ceil(g.distance / g.replan_distance - 1e-9));
  return c;
}

RunResult start_run(const ScenarioConfig& cfg, const std::string& algo) {
  RunResult r;
  r.name = "png";
  r.algorithm = algo;
  r.dt = cfg.dt;
  return r;
}

void finish(RunResult& r, double distance) {
  r.metrics = compute_metrics(r.steps, r.dt, distance);
}

polytraj::QuinticSegment segment_to(const dynamics::KinState& x, double l_end, double v_end,
                                    double duration) {
  return polytraj::quintic_fit({x.l, x.v, x.a_v}, {l_end, v_end, 0.0}, duration);
}

RunResult run_cc(const ScenarioConfig& cfg, const Course& c) {
  auto r = start_run(cfg, "cc");
  const auto& g = cfg.png;
  double t = 0.0, l = 0.0;
  for (int i = 0; i < c.rollouts; ++i) {
    const double span = std::min(g.replan_distance, g.distance - l);
    const double v = span / (static_cast<double>(c.n - 1) * cfg.dt);
    const auto plan = detail::cruise_plan(l, v, c.n, cfg.dt, cfg.slope, cfg.params);
    detail::execute_1d(plan, c.n - 1, t, r);
    l = plan.z.back().l;
  }
  finish(r, l);
  return r;
}

RunResult run_emato(const ScenarioConfig& cfg, const Course& c) {
  auto r = start_run(cfg, "png");
  const auto& g = cfg.png;
  const double T = static_cast<double>(c.n - 1) * cfg.dt;
  const auto w = cfg.weights.value_or(polytraj::Weights::pulse_and_glide(g.v_d));
  dynamics::KinState x{0.0, g.v_d, 0.0};
  double t = 0.0;
  for (int i = 0; i < c.rollouts; ++i) {
    const double l_end = x.l + std::min(g.replan_distance, g.distance - x.l);
    const auto seg = segment_to(x, l_end, (l_end - x.l) / T, T);
    const auto quintic = polytraj::path_from_quintic(seg, c.n, cfg.dt, cfg.slope, cfg.params);
    const auto ref = optimizer::discretize_reference(quintic, cfg.params);
    optimizer::ConstraintSpec cons;
    cons.kind = optimizer::ConstraintKind::bvp;
    cons.end_l = optimizer::Interval::exact(l_end);
    const auto problem = optimizer::build_problem(
        ref, dynamics::predict_slope(cfg.slope, detail::path_coords(ref)), cons, w, cfg.params);
    const auto sol = optimizer::solve(problem, cfg.solver);
    r.solves.push_back(sol.stats);
    const polytraj::PathTrajectory* plan = &sol.traj;
    if (sol.stats.status == optimizer::SolveStatus::infeasible ||
        sol.stats.max_violation > 10.0 * cfg.solver.tol_feas) {
      r.events.push_back({t, "fallback", "cruise segment: " + sol.stats.diagnostic});
      plan = &quintic;
    }
    detail::execute_1d(*plan, c.n - 1, t, r);
    x = detail::knot_state(*plan, c.n - 1);
  }
  finish(r, x.l);
  return r;
}

RunResult run_energy_quintic(const ScenarioConfig& cfg, const Course& c) {
  auto r = start_run(cfg, "energy-quintic");
  const auto& g = cfg.png;
  const double T = static_cast<double>(c.n - 1) * cfg.dt;
  dynamics::KinState x{0.0, g.v_d, 0.0};
  double t = 0.0;
  const auto w = polytraj::Weights::frenet_energy();
  for (int i = 0; i < c.rollouts; ++i) {
    const double l_end = x.l + std::min(g.replan_distance, g.distance - x.l);
    const auto speeds =
        polytraj::speed_samples(g.v_d, g.speed_offsets, 0.0, cfg.params.limits.v_max);
    std::vector<polytraj::Candidate> cands;
    for (const double v : speeds)
      cands.push_back(polytraj::make_longitudinal_candidate(
          cands.size(), segment_to(x, l_end, v, T), c.n, cfg.dt, cfg.slope, cfg.params));
    polytraj::check_candidates(cands, cfg.params, {});
    polytraj::PathTrajectory plan;
    try {
      plan = cands[polytraj::select_candidate(cands, w)].path;
    } catch (const NoFeasibleCandidate&) {
      r.events.push_back({t, "fallback", "no feasible energy candidate, cruise segment"});
      plan = polytraj::path_from_quintic(segment_to(x, l_end, (l_end - x.l) / T, T), c.n, cfg.dt,
                                         cfg.slope, cfg.params);
    }
    detail::execute_1d(plan, c.n - 1, t, r);
    x = detail::knot_state(plan, c.n - 1);
  }
  finish(r, x.l);
  return r;
}

}  // namespace

PngResults run_cc_png(const ScenarioConfig& cfg) {
  cfg.validate();
  const auto c = course(cfg);
  return {run_cc(cfg, c), run_emato(cfg, c), run_energy_quintic(cfg, c)};
}

int count_extrema(std::span<const double> x, double eps) {
  int count = 0;
  int last = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double d = x[i] - x[i - 1];
    const int sign = d > eps ? 1 : (d < -eps ? -1 : 0);
    if (sign == 0) continue;
    if (last != 0 && sign != last) ++count;
    last = sign;
  }
  return count;
}

}  // namespace emato::scenarios
