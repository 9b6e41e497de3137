#include "emato/polytraj/candidate.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "emato/error.hpp"

namespace emato::polytraj {

namespace {
constexpr double kLimitTol = 1e-6;
}

const char* to_string(Infeasibility v) {
  switch (v) {
    case Infeasibility::none: return "feasible";
    case Infeasibility::collision: return "collision";
    case Infeasibility::overjerky: return "overjerky";
    case Infeasibility::overcurvy: return "overcurvy";
    case Infeasibility::limits: return "limits";
  }
  return "unknown";
}

std::vector<GlobalPoint> frenet_to_global(const QuinticSegment& s_seg, const QuinticSegment& d_seg,
                                          const ReferenceLine& ref, std::size_t n, double dt) {
  std::vector<GlobalPoint> out(n);
  std::vector<double> xs(n), ys(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Vec2 p = ref.to_global(s_seg.pos(t), d_seg.pos(t));
    xs[k] = p.x;
    ys[k] = p.y;
  }
  const auto dx = differentiate(xs, dt);
  const auto dy = differentiate(ys, dt);
  const auto ddx = differentiate(dx, dt);
  const auto ddy = differentiate(dy, dt);
  for (std::size_t k = 0; k < n; ++k) {
    const double sp2 = dx[k] * dx[k] + dy[k] * dy[k];
    out[k].x = xs[k];
    out[k].y = ys[k];
    if (sp2 > 1e-12) {
      out[k].yaw = std::atan2(dy[k], dx[k]);
      out[k].curvature = (dx[k] * ddy[k] - dy[k] * ddx[k]) / (sp2 * std::sqrt(sp2));
    } else {
      out[k].yaw = k > 0 ? out[k - 1].yaw : ref.heading(s_seg.pos(0.0));
      out[k].curvature = 0.0;
    }
  }
  return out;
}

PathTrajectory to_path_trajectory(std::span<const GlobalPoint> global,
                                  std::span<const double> road_s, double l0, double dt,
                                  const dynamics::SlopeProfile& slope,
                                  const dynamics::VehicleParams& params) {
  const std::size_t n = global.size();
  if (road_s.size() != n) throw AlignmentError("road coordinate length mismatch");
  std::vector<double> l(n, l0);
  for (std::size_t k = 1; k < n; ++k)
    l[k] = l[k - 1] + std::hypot(global[k].x - global[k - 1].x, global[k].y - global[k - 1].y);
  const auto v = differentiate(l, dt);
  const auto a = differentiate(v, dt);
  const auto j = differentiate(a, dt);
  PathTrajectory traj;
  traj.dt = dt;
  traj.z.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    traj.z[k].l = l[k];
    traj.z[k].v = v[k];
    traj.z[k].a_v = a[k];
    traj.z[k].jerk = j[k];
  }
  complete_path(traj, road_s, slope, params);
  return traj;
}

Candidate make_longitudinal_candidate(std::size_t index, const QuinticSegment& seg, std::size_t n,
                                      double dt, const dynamics::SlopeProfile& slope,
                                      const dynamics::VehicleParams& params) {
  Candidate c;
  c.index = index;
  c.s_seg = seg;
  c.d_seg = QuinticSegment({0, 0, 0, 0, 0, 0}, seg.duration());
  c.path = path_from_quintic(seg, n, dt, slope, params);
  c.s.resize(n);
  c.d.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) c.s[k] = c.path.z[k].l;
  return c;
}

Candidate make_frenet_candidate(std::size_t index, const QuinticSegment& s_seg,
                                const QuinticSegment& d_seg, const ReferenceLine& ref,
                                std::size_t n, double dt, double l0,
                                const dynamics::SlopeProfile& slope,
                                const dynamics::VehicleParams& params) {
  Candidate c;
  c.index = index;
  c.s_seg = s_seg;
  c.d_seg = d_seg;
  c.lateral = true;
  c.s.resize(n);
  c.d.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    c.s[k] = s_seg.pos(t);
    c.d[k] = d_seg.pos(t);
  }
  c.global = frenet_to_global(s_seg, d_seg, ref, n, dt);
  c.path = to_path_trajectory(c.global, c.s, l0, dt, slope, params);
  return c;
}

Infeasibility feasibility_check(const Candidate& cand, const dynamics::VehicleParams& params,
                                const TrafficPrediction& traffic, const SafetyGeometry& geometry) {
  const std::size_t n = cand.size();
  const bool planar = !cand.global.empty();
  if (!traffic.empty()) {
    if (std::abs(traffic.dt - cand.path.dt) > 1e-9)
      throw AlignmentError("traffic prediction dt differs from the candidate");
    for (const auto& a : traffic.agents) {
      const bool ok = planar ? (a.x.size() == n && a.y.size() == n) : a.l.size() == n;
      if (!ok) throw AlignmentError("traffic prediction horizon differs from the candidate");
    }
  }
  const auto& lim = params.limits;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& z = cand.path.z[k];
    const auto& u = cand.path.u[k];
    for (const auto& a : traffic.agents) {
      const double dist = planar ? std::hypot(cand.global[k].x - a.x[k], cand.global[k].y - a.y[k])
                                 : std::abs(z.l - a.l[k]);
      if (dist < geometry.r_safe) return Infeasibility::collision;
    }
    if (std::abs(z.jerk) > lim.j_max + kLimitTol) return Infeasibility::overjerky;
    if (planar && std::abs(cand.global[k].curvature) > geometry.kappa_max)
      return Infeasibility::overcurvy;
    if (z.v < -kLimitTol || z.v > lim.v_max + kLimitTol || z.a_v > lim.a_v_max + kLimitTol ||
        z.a_v < -lim.a_b_max - kLimitTol || u.a_t > lim.a_t_max + kLimitTol ||
        u.a_b > lim.a_b_max + kLimitTol)
      return Infeasibility::limits;
  }
  return Infeasibility::none;
}

void check_candidates(std::span<Candidate> cands, const dynamics::VehicleParams& params,
                      const TrafficPrediction& traffic, const SafetyGeometry& geometry) {
  const auto n = static_cast<std::ptrdiff_t>(cands.size());
  // Alignment errors must escape the parallel region as exceptions.
  std::vector<int> failed(cands.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      cands[i].verdict = feasibility_check(cands[i], params, traffic, geometry);
    } catch (...) {
      failed[i] = 1;
    }
  }
  for (std::size_t i = 0; i < failed.size(); ++i)
    if (failed[i]) cands[i].verdict = feasibility_check(cands[i], params, traffic, geometry);
}

void check_candidates_serial(std::span<Candidate> cands, const dynamics::VehicleParams& params,
                             const TrafficPrediction& traffic, const SafetyGeometry& geometry) {
  for (auto& c : cands) c.verdict = feasibility_check(c, params, traffic, geometry);
}

std::vector<double> candidate_costs(std::span<const Candidate> cands, const Weights& w,
                                    std::span<const double> v_ref) {
  const auto n = static_cast<std::ptrdiff_t>(cands.size());
  std::vector<double> cost(cands.size(), std::numeric_limits<double>::infinity());
  std::vector<int> failed(cands.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (!cands[i].feasible()) continue;
    try {
      cost[i] = evaluate_objective(cands[i].path, w, v_ref);
    } catch (...) {
      failed[i] = 1;
    }
  }
  for (std::size_t i = 0; i < failed.size(); ++i)
    if (failed[i]) evaluate_objective(cands[i].path, w, v_ref);
  return cost;
}

std::vector<double> candidate_costs_serial(std::span<const Candidate> cands, const Weights& w,
                                           std::span<const double> v_ref) {
  std::vector<double> cost(cands.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < cands.size(); ++i)
    if (cands[i].feasible()) cost[i] = evaluate_objective(cands[i].path, w, v_ref);
  return cost;
}

std::size_t select_candidate(std::span<const Candidate> cands, const Weights& w,
                             std::span<const double> v_ref) {
  const auto cost = candidate_costs_serial(cands, w, v_ref);
  std::size_t best = cands.size();
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (!cands[i].feasible()) continue;
    if (best == cands.size() || cost[i] < cost[best] ||
        (cost[i] == cost[best] && cands[i].index < cands[best].index))
      best = i;
  }
  if (best == cands.size()) throw NoFeasibleCandidate("no feasible candidate");
  return best;
}

void write_csv_header(std::ostream& out) {
  out << "t,x,y,yaw,s,d,l,v,a_v,j,theta,a_r,a_t,a_b,f_r\n";
}

void write_csv_row(std::ostream& out, const ExportRow& r) {
  out << r.t << ',' << r.x << ',' << r.y << ',' << r.yaw << ',' << r.s << ',' << r.d << ','
      << r.l << ',' << r.v << ',' << r.a_v << ',' << r.j << ',' << r.theta << ',' << r.a_r << ','
      << r.a_t << ',' << r.a_b << ',' << r.f_r << '\n';
}

std::vector<ExportRow> export_rows(const Candidate& cand, double t0) {
  std::vector<ExportRow> rows(cand.size());
  for (std::size_t k = 0; k < cand.size(); ++k) {
    const auto& z = cand.path.z[k];
    const auto& u = cand.path.u[k];
    auto& r = rows[k];
    r.t = t0 + static_cast<double>(k) * cand.path.dt;
    if (!cand.global.empty()) {
      r.x = cand.global[k].x;
      r.y = cand.global[k].y;
      r.yaw = cand.global[k].yaw;
    } else {
      r.x = z.l;
    }
    r.s = cand.s[k];
    r.d = cand.d[k];
    r.l = z.l;
    r.v = z.v;
    r.a_v = z.a_v;
    r.j = z.jerk;
    r.theta = z.theta;
    r.a_r = z.a_r;
    r.a_t = u.a_t;
    r.a_b = u.a_b;
    r.f_r = z.f_r;
  }
  return rows;
}

void write_candidate_csv(std::ostream& out, const Candidate& cand, double t0) {
  write_csv_header(out);
  for (const auto& r : export_rows(cand, t0)) write_csv_row(out, r);
}

}  // namespace emato::polytraj
