#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "common.hpp"
#include "emato/error.hpp"
#include "emato/optimizer/problem.hpp"
#include "emato/polytraj/quintic.hpp"
#include "emato/scenarios/runner.hpp"

namespace emato::scenarios {

namespace {

constexpr double kGapTol = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::optional<optimizer::AccVariant> variant_of(const std::string& algo) {
  if (algo == "emato-b") return optimizer::AccVariant::boundary;
  if (algo == "emato-r") return optimizer::AccVariant::relaxed;
  if (algo == "emato-v") return optimizer::AccVariant::tracking;
  return std::nullopt;
}

// Largest amount by which the gap leaves [lo, hi] on knots 1..n-1.
double gap_excess(const polytraj::PathTrajectory& plan, const std::vector<double>& leader_l,
                  double lo, double hi) {
  double worst = 0.0;
  const std::size_t n = std::min(plan.size(), leader_l.size());
  for (std::size_t k = 1; k < n; ++k) {
    const double gap = leader_l[k] - plan.z[k].l;
    worst = std::max({worst, lo - gap, gap - hi});
  }
  return worst;
}

}  // namespace

RunResult run_acc(const ScenarioConfig& cfg, const DrivingCycle& cycle) {
  cfg.validate();
  const auto variant = variant_of(cfg.algorithm);
  if (!variant && cfg.algorithm != "quintic")
    throw InvalidSpec("ACC algorithm must be quintic, emato-b, emato-r or emato-v");

  const auto& sp = cfg.acc.spacing;
  const auto& lim = cfg.params.limits;
  const auto n = static_cast<std::size_t>(cfg.knots);
  const auto m = static_cast<std::size_t>(cfg.replan_steps());
  const double T = cfg.horizon();
  const double dt = cfg.dt;

  polytraj::Weights w = polytraj::Weights::frenet_energy();
  if (variant) {
    w = *variant == optimizer::AccVariant::tracking ? polytraj::Weights::holistic_acc_tracking()
                                                     : polytraj::Weights::holistic_acc();
    if (cfg.weights) w = *cfg.weights;
  }
  const auto select_w = polytraj::Weights::frenet_energy();

  RunResult r;
  r.name = "acc";
  r.algorithm = cfg.algorithm;
  r.dt = dt;

  const double l_lead0 = sp.spacing(cycle.speed_at(0.0));
  dynamics::KinState x{0.0, cycle.speed_at(0.0), 0.0};
  std::optional<polytraj::PathTrajectory> prev;
  double t = 0.0;

  for (std::size_t rollout = 0;; ++rollout) {
    t = static_cast<double>(rollout * m) * dt;
    if (t + static_cast<double>(m) * dt > cycle.total_time() + 1e-9) break;
    const auto pred = lead_prediction(cycle, t, n, dt, l_lead0);
    const auto& leader = pred.agents.front();
    const double v_lT = leader.v.back();

    // Energy-policy quintic candidates around the desired end spacing.
    const auto speeds = polytraj::speed_samples(v_lT, cfg.acc.speed_offsets, 0.0, lim.v_max);
    std::vector<polytraj::Candidate> cands;
    for (const double off : cfg.acc.gap_offsets)
      for (const double v : speeds) {
        const double l_end = leader.l.back() - (sp.spacing(v_lT) + off);
        const auto seg = polytraj::quintic_fit({x.l, x.v, x.a_v}, {l_end, v, 0.0}, T);
        cands.push_back(polytraj::make_longitudinal_candidate(cands.size(), seg, n, dt, cfg.slope,
                                                              cfg.params));
      }
    polytraj::check_candidates(cands, cfg.params, {});
    std::vector<double> excess(cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i) {
      excess[i] = gap_excess(cands[i].path, leader.l, sp.gap_min, kInf);
      if (cands[i].feasible() && excess[i] > kGapTol)
        cands[i].verdict = polytraj::Infeasibility::collision;
    }
    std::optional<std::size_t> chosen;
    try {
      chosen = polytraj::select_candidate(cands, select_w);
    } catch (const NoFeasibleCandidate&) {
    }

    std::optional<polytraj::PathTrajectory> plan;
    if (chosen) plan = cands[*chosen].path;

    if (variant) {
      // Without a feasible quintic the solve still starts from the candidate
      // closest to the gap window.
      std::size_t warm = chosen.value_or(0);
      if (!chosen)
        warm = static_cast<std::size_t>(std::min_element(excess.begin(), excess.end()) -
                                        excess.begin());
      const auto ref = optimizer::discretize_reference(cands[warm].path, cfg.params);
      auto cons = optimizer::acc_constraints(*variant, pred, sp);
      std::vector<double> v_ref;
      if (*variant == optimizer::AccVariant::tracking) {
        v_ref = leader.v;
        const double dv = cfg.acc.terminal_speed_deficit;
        cons.end_v.lo = std::max(0.0, v_lT - dv);
        cons.end_gap.hi =
            std::max(sp.gap_min, sp.gap_max - dv * dv / (2.0 * cfg.acc.catch_up_accel));
      }
      const auto problem = optimizer::build_problem(
          ref, dynamics::predict_slope(cfg.slope, detail::path_coords(ref)), cons, w, cfg.params,
          v_ref);
      const auto sol = optimizer::solve(problem, cfg.solver);
      r.solves.push_back(sol.stats);
      const bool ok = sol.stats.status != optimizer::SolveStatus::infeasible &&
                      sol.stats.max_violation <= 10.0 * cfg.solver.tol_feas;
      if (ok) {
        plan = sol.traj;
      } else {
        r.events.push_back({t, "solver-fallback",
                            std::string(optimizer::to_string(sol.stats.status)) + ": " +
                                sol.stats.diagnostic});
      }
    }

    if (!plan && prev && prev->size() >= 2 * m + 1) {
      auto rest = detail::tail(*prev, m);
      if (gap_excess(rest, leader.l, sp.gap_min, kInf) <= kGapTol) {
        r.events.push_back({t, "tail-fallback", "previous plan tail"});
        plan = std::move(rest);
      }
    }
    if (!plan) {
      r.events.push_back({t, "emergency-brake", "no safe plan"});
      plan = detail::braking_plan(x, n, dt, cfg.slope, cfg.params);
    }

    for (std::size_t k = 0; k < m; ++k) {
      const double gap = leader.l[k] - plan->z[k].l;
      r.gap.push_back(gap);
      if (gap < sp.gap_min - kGapTol) {
        ++r.gap_violations;
        r.events.push_back({t + static_cast<double>(k) * dt, "gap-violation",
                            "gap " + std::to_string(gap) + " m"});
      }
    }
    detail::execute_1d(*plan, m, t, r);
    x = detail::knot_state(*plan, m);
    prev = std::move(plan);
  }
  r.metrics = compute_metrics(r.steps, dt, x.l);
  return r;
}

}  // namespace emato::scenarios
