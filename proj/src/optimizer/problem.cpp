#include "emato/optimizer/problem.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "emato/dynamics/longitudinal.hpp"
#include "emato/error.hpp"

namespace emato::optimizer {

Interval Interval::intersect(const Interval& o) const {
  return {std::max(lo, o.lo), std::min(hi, o.hi)};
}

const char* to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::bvp: return "bvp";
    case ConstraintKind::acc_b: return "acc-b";
    case ConstraintKind::acc_r: return "acc-r";
    case ConstraintKind::acc_v: return "acc-v";
    case ConstraintKind::frenet_homotopy: return "frenet-homotopy";
  }
  return "unknown";
}

ConstraintSpec acc_constraints(AccVariant variant, const TrafficPrediction& pred,
                               const AccParams& params) {
  if (!(params.gap_min < params.gap_max))
    throw InvalidSpec("ACC spacing: minimum gap must be below the maximum gap");
  if (pred.agents.empty()) throw AlignmentError("ACC constraints need a leader prediction");
  const auto& lead = pred.agents.front();
  if (lead.l.empty() || lead.l.size() != lead.v.size())
    throw AlignmentError("leader prediction needs path positions and speeds of equal length");
  ConstraintSpec c;
  c.leader_l = lead.l;
  c.gap = {params.gap_min, params.gap_max};
  const double desired = params.spacing(lead.v.back());
  switch (variant) {
    case AccVariant::boundary:
      c.kind = ConstraintKind::acc_b;
      c.end_gap = Interval::exact(desired);
      break;
    case AccVariant::relaxed:
      c.kind = ConstraintKind::acc_r;
      c.end_gap = {desired - params.gap_relax, desired + params.gap_relax};
      break;
    case AccVariant::tracking:
      c.kind = ConstraintKind::acc_v;
      c.end_gap = c.gap;
      break;
  }
  return c;
}

EmatoProblem::EmatoProblem(polytraj::PathTrajectory reference, dynamics::SlopePrediction slope,
                           ConstraintSpec cons, polytraj::Weights weights,
                           dynamics::VehicleParams params, std::vector<double> v_ref)
    : ref_(std::move(reference)),
      theta_(std::move(slope.theta)),
      cons_(std::move(cons)),
      w_(weights),
      p_(std::move(params)),
      v_ref_(std::move(v_ref)) {
  n_ = static_cast<int>(ref_.z.size());
  const auto n = ref_.z.size();
  if (n < 2) throw AlignmentError("reference needs at least two knots");
  if (ref_.u.size() != n) throw AlignmentError("reference controls length mismatch");
  if (theta_.size() != n) throw AlignmentError("slope prediction length mismatch");
  if (!cons_.leader_l.empty() && cons_.leader_l.size() != n)
    throw AlignmentError("leader prediction length mismatch");
  if (!cons_.path_l_lo.empty() && cons_.path_l_lo.size() != n)
    throw AlignmentError("path lower bound length mismatch");
  if (!cons_.path_l_hi.empty() && cons_.path_l_hi.size() != n)
    throw AlignmentError("path upper bound length mismatch");
  if (!v_ref_.empty() && v_ref_.size() != n) throw AlignmentError("speed reference length mismatch");
  w_.validate();
  p_.validate();
  for (std::size_t k = 0; k < n; ++k) ref_.z[k].theta = theta_[k];
  warm_ = pack(ref_);
}

double EmatoProblem::resistance(int k, double v) const {
  return dynamics::resistance_accel(v, theta_[k], p_);
}

int EmatoProblem::num_cons() const { return 3 + 3 * (n_ - 1) + 3 + n_; }

void EmatoProblem::var_bounds(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const {
  lo.resize(num_vars());
  hi.resize(num_vars());
  const auto& lim = p_.limits;
  for (int k = 0; k < n_; ++k) {
    Interval l;
    if (k > 0) {
      if (!cons_.leader_l.empty() && cons_.gap.bounded())
        l = l.intersect({cons_.leader_l[k] - cons_.gap.hi, cons_.leader_l[k] - cons_.gap.lo});
      if (!cons_.path_l_lo.empty()) l.lo = std::max(l.lo, cons_.path_l_lo[k]);
      if (!cons_.path_l_hi.empty()) l.hi = std::min(l.hi, cons_.path_l_hi[k]);
    }
    lo[idx(k, L)] = l.lo;
    hi[idx(k, L)] = l.hi;
    lo[idx(k, V)] = 0.0;
    hi[idx(k, V)] = lim.v_max;
    lo[idx(k, A)] = -lim.a_b_max;
    hi[idx(k, A)] = lim.a_v_max;
    lo[idx(k, J)] = -lim.j_max;
    hi[idx(k, J)] = lim.j_max;
    lo[idx(k, B)] = 0.0;
    hi[idx(k, B)] = lim.a_b_max;
  }
}

void EmatoProblem::con_bounds(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const {
  lo = Eigen::VectorXd::Zero(num_cons());
  hi = Eigen::VectorXd::Zero(num_cons());
  const auto& z0 = ref_.z.front();
  lo[0] = hi[0] = z0.l;
  lo[1] = hi[1] = z0.v;
  lo[2] = hi[2] = z0.a_v;
  const int e = 3 + 3 * (n_ - 1);
  Interval end_l = cons_.end_l;
  if (!cons_.leader_l.empty() && cons_.end_gap.bounded()) {
    const double lead = cons_.leader_l.back();
    end_l = end_l.intersect({lead - cons_.end_gap.hi, lead - cons_.end_gap.lo});
  }
  lo[e] = end_l.lo;
  hi[e] = end_l.hi;
  lo[e + 1] = cons_.end_v.lo;
  hi[e + 1] = cons_.end_v.hi;
  lo[e + 2] = cons_.end_a.lo;
  hi[e + 2] = cons_.end_a.hi;
  for (int k = 0; k < n_; ++k) {
    lo[e + 3 + k] = 0.0;
    hi[e + 3 + k] = p_.limits.a_t_max;
  }
}

namespace {

// Per-knot objective value, gradient over (v, a, j, b) and Hessian entries.
struct KnotTerms {
  double value = 0.0;
  double gv = 0.0, ga = 0.0, gj = 0.0, gb = 0.0;
  double hvv = 0.0, haa = 0.0, hjj = 0.0, hbb = 0.0, hav = 0.0, hbv = 0.0;
};

}  // namespace

static KnotTerms knot_terms(const dynamics::VehicleParams& p, const polytraj::Weights& w,
                            double theta, double vd, double dt, double v, double a, double j,
                            double b) {
  KnotTerms t;
  const double ev = v - vd;
  t.value = w.w_v * ev * ev + w.w_a * a * a + w.w_b * b * b + w.w_j * j * j;
  t.gv = 2 * w.w_v * ev;
  t.ga = 2 * w.w_a * a;
  t.gb = 2 * w.w_b * b;
  t.gj = 2 * w.w_j * j;
  t.hvv = 2 * w.w_v;
  t.haa = 2 * w.w_a;
  t.hbb = 2 * w.w_b;
  t.hjj = 2 * w.w_j;
  if (w.w_f != 0.0) {
    const double k1 = p.k1();
    const double a_t = a + dynamics::resistance_accel(v, theta, p) + b;
    const auto fr = powertrain::fuel_rate_model(p.fuel, v, a_t);
    const double ar1 = 2 * k1 * v;
    const double g = fr.value;
    const double G = fr.d_traction;
    const double gv = fr.d_speed + G * ar1;
    const double gvv = fr.d2_speed + 2 * fr.d2_speed_traction * ar1 + G * 2 * k1;
    const double gva = fr.d2_speed_traction;
    double h, hv, ha, hvv, hva, haa = 0.0;
    if (v > polytraj::kSpeedGuard) {
      h = g / v;
      hv = gv / v - g / (v * v);
      ha = G / v;
      hvv = gvv / v - 2 * gv / (v * v) + 2 * g / (v * v * v);
      hva = gva / v - G / (v * v);
    } else {
      const double e = polytraj::kSpeedGuard;
      h = g / e;
      hv = gv / e;
      ha = G / e;
      hvv = gvv / e;
      hva = gva / e;
    }
    t.value += w.w_f * h;
    t.gv += w.w_f * hv;
    t.ga += w.w_f * ha;
    t.gb += w.w_f * ha;
    t.hvv += w.w_f * hvv;
    t.hav += w.w_f * hva;
    t.hbv += w.w_f * hva;
    t.haa += w.w_f * haa;
    t.hbb += w.w_f * haa;
  }
  t.value *= dt;
  t.gv *= dt;
  t.ga *= dt;
  t.gj *= dt;
  t.gb *= dt;
  t.hvv *= dt;
  t.haa *= dt;
  t.hjj *= dt;
  t.hbb *= dt;
  t.hav *= dt;
  t.hbv *= dt;
  return t;
}

double EmatoProblem::objective(const Eigen::VectorXd& x) const {
  double total = 0.0;
  for (int k = 0; k < n_; ++k) {
    const double vd = v_ref_.empty() ? w_.v_d : v_ref_[k];
    total += knot_terms(p_, w_, theta_[k], vd, dt(), x[idx(k, V)], x[idx(k, A)], x[idx(k, J)],
                    x[idx(k, B)])
             .value;
  }
  return total;
}

void EmatoProblem::gradient(const Eigen::VectorXd& x, Eigen::VectorXd& g) const {
  g = Eigen::VectorXd::Zero(num_vars());
  for (int k = 0; k < n_; ++k) {
    const double vd = v_ref_.empty() ? w_.v_d : v_ref_[k];
    const auto t = knot_terms(p_, w_, theta_[k], vd, dt(), x[idx(k, V)], x[idx(k, A)],
                              x[idx(k, J)], x[idx(k, B)]);
    g[idx(k, V)] = t.gv;
    g[idx(k, A)] = t.ga;
    g[idx(k, J)] = t.gj;
    g[idx(k, B)] = t.gb;
  }
}

void EmatoProblem::constraints(const Eigen::VectorXd& x, Eigen::VectorXd& c) const {
  c.resize(num_cons());
  const double h = dt();
  c[0] = x[idx(0, L)];
  c[1] = x[idx(0, V)];
  c[2] = x[idx(0, A)];
  for (int k = 0; k + 1 < n_; ++k) {
    const double l = x[idx(k, L)], v = x[idx(k, V)], a = x[idx(k, A)], j = x[idx(k, J)];
    const int r = 3 + 3 * k;
    c[r] = x[idx(k + 1, L)] - (l + v * h + a * h * h / 2 + j * h * h * h / 6);
    c[r + 1] = x[idx(k + 1, V)] - (v + a * h + j * h * h / 2);
    c[r + 2] = x[idx(k + 1, A)] - (a + j * h);
  }
  const int e = 3 + 3 * (n_ - 1);
  c[e] = x[idx(n_ - 1, L)];
  c[e + 1] = x[idx(n_ - 1, V)];
  c[e + 2] = x[idx(n_ - 1, A)];
  for (int k = 0; k < n_; ++k)
    c[e + 3 + k] = x[idx(k, A)] + resistance(k, x[idx(k, V)]) + x[idx(k, B)];
}

SparsityPattern EmatoProblem::jacobian_pattern() const {
  SparsityPattern s;
  s.add(0, idx(0, L));
  s.add(1, idx(0, V));
  s.add(2, idx(0, A));
  for (int k = 0; k + 1 < n_; ++k) {
    const int r = 3 + 3 * k;
    s.add(r, idx(k + 1, L));
    s.add(r, idx(k, L));
    s.add(r, idx(k, V));
    s.add(r, idx(k, A));
    s.add(r, idx(k, J));
    s.add(r + 1, idx(k + 1, V));
    s.add(r + 1, idx(k, V));
    s.add(r + 1, idx(k, A));
    s.add(r + 1, idx(k, J));
    s.add(r + 2, idx(k + 1, A));
    s.add(r + 2, idx(k, A));
    s.add(r + 2, idx(k, J));
  }
  const int e = 3 + 3 * (n_ - 1);
  s.add(e, idx(n_ - 1, L));
  s.add(e + 1, idx(n_ - 1, V));
  s.add(e + 2, idx(n_ - 1, A));
  for (int k = 0; k < n_; ++k) {
    s.add(e + 3 + k, idx(k, V));
    s.add(e + 3 + k, idx(k, A));
    s.add(e + 3 + k, idx(k, B));
  }
  return s;
}

void EmatoProblem::jacobian_values(const Eigen::VectorXd& x, std::vector<double>& v) const {
  const double h = dt();
  v.clear();
  v.reserve(3 + 12 * (n_ - 1) + 3 + 3 * n_);
  v.insert(v.end(), {1.0, 1.0, 1.0});
  for (int k = 0; k + 1 < n_; ++k) {
    v.insert(v.end(), {1.0, -1.0, -h, -h * h / 2, -h * h * h / 6});
    v.insert(v.end(), {1.0, -1.0, -h, -h * h / 2});
    v.insert(v.end(), {1.0, -1.0, -h});
  }
  v.insert(v.end(), {1.0, 1.0, 1.0});
  for (int k = 0; k < n_; ++k) {
    v.push_back(dynamics::resistance_accel_dv(x[idx(k, V)], p_));
    v.push_back(1.0);
    v.push_back(1.0);
  }
}

SparsityPattern EmatoProblem::hessian_pattern() const {
  SparsityPattern s;
  for (int k = 0; k < n_; ++k) {
    s.add(idx(k, V), idx(k, V));
    s.add(idx(k, A), idx(k, A));
    s.add(idx(k, J), idx(k, J));
    s.add(idx(k, B), idx(k, B));
    s.add(idx(k, A), idx(k, V));
    s.add(idx(k, B), idx(k, V));
  }
  return s;
}

void EmatoProblem::hessian_values(const Eigen::VectorXd& x, double sigma,
                                  const Eigen::VectorXd& lambda, std::vector<double>& v) const {
  v.clear();
  v.reserve(6 * n_);
  const int e = 3 + 3 * (n_ - 1);
  const double two_k1 = 2 * p_.k1();
  for (int k = 0; k < n_; ++k) {
    const double vd = v_ref_.empty() ? w_.v_d : v_ref_[k];
    const auto t = knot_terms(p_, w_, theta_[k], vd, dt(), x[idx(k, V)], x[idx(k, A)],
                              x[idx(k, J)], x[idx(k, B)]);
    v.push_back(sigma * t.hvv + lambda[e + 3 + k] * two_k1);
    v.push_back(sigma * t.haa);
    v.push_back(sigma * t.hjj);
    v.push_back(sigma * t.hbb);
    v.push_back(sigma * t.hav);
    v.push_back(sigma * t.hbv);
  }
}

std::string EmatoProblem::var_family(int i) const {
  switch (i % kVarsPerKnot) {
    case L: return cons_.leader_l.empty() ? "path position bounds" : "gap bounds";
    case V: return "speed bounds";
    case A: return "acceleration bounds";
    case J: return "jerk bounds";
    default: return "brake bounds";
  }
}

std::string EmatoProblem::con_family(int r) const {
  if (r < 3) return "initial state";
  const int e = 3 + 3 * (n_ - 1);
  if (r < e) return "dynamics";
  if (r < e + 3) return cons_.leader_l.empty() ? "end state" : "end gap";
  return "traction";
}

polytraj::PathTrajectory EmatoProblem::unpack(const Eigen::VectorXd& x) const {
  polytraj::PathTrajectory t;
  t.dt = dt();
  t.z.resize(n_);
  t.u.resize(n_);
  for (int k = 0; k < n_; ++k) {
    auto& z = t.z[k];
    z.l = x[idx(k, L)];
    z.v = x[idx(k, V)];
    z.a_v = x[idx(k, A)];
    z.jerk = x[idx(k, J)];
    z.theta = theta_[k];
    z.a_r = resistance(k, z.v);
    t.u[k].a_b = x[idx(k, B)];
    t.u[k].a_t = z.a_v + z.a_r + t.u[k].a_b;
    z.f_r = powertrain::fuel_rate(p_.fuel, z.v, t.u[k].a_t);
  }
  return t;
}

Eigen::VectorXd EmatoProblem::pack(const polytraj::PathTrajectory& traj) const {
  if (static_cast<int>(traj.z.size()) != n_) throw AlignmentError("trajectory length mismatch");
  Eigen::VectorXd x(num_vars());
  for (int k = 0; k < n_; ++k) {
    const auto& z = traj.z[k];
    x[idx(k, L)] = z.l;
    x[idx(k, V)] = z.v;
    x[idx(k, A)] = z.a_v;
    x[idx(k, J)] = z.jerk;
    x[idx(k, B)] = traj.u.size() == traj.z.size() ? traj.u[k].a_b : 0.0;
  }
  return x;
}

polytraj::PathTrajectory discretize_reference(const polytraj::PathTrajectory& ref,
                                              const dynamics::VehicleParams& params) {
  polytraj::PathTrajectory out = ref;
  const std::size_t n = ref.z.size();
  if (n < 2) return out;
  const double h = ref.dt;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    auto& z = out.z[k];
    const double j = (ref.z[k + 1].a_v - ref.z[k].a_v) / h;
    z.jerk = j;
    auto& next = out.z[k + 1];
    next.l = z.l + z.v * h + z.a_v * h * h / 2 + j * h * h * h / 6;
    next.v = z.v + z.a_v * h + j * h * h / 2;
    next.a_v = z.a_v + j * h;
  }
  out.z[n - 1].jerk = out.z[n - 2].jerk;
  polytraj::refresh_derived(out, params);
  return out;
}

EmatoProblem build_problem(const polytraj::PathTrajectory& reference,
                           const dynamics::SlopePrediction& slope, ConstraintSpec cons,
                           const polytraj::Weights& w, const dynamics::VehicleParams& params,
                           std::vector<double> v_ref) {
  if (reference.z.empty()) throw AlignmentError("empty reference");
  const auto& end = reference.z.back();
  switch (cons.kind) {
    case ConstraintKind::bvp:
      if (!cons.end_l.bounded()) cons.end_l = Interval::exact(end.l);
      break;
    case ConstraintKind::frenet_homotopy:
      if (!cons.end_l.bounded()) cons.end_l = Interval::exact(end.l);
      if (!cons.end_v.bounded()) cons.end_v = Interval::exact(end.v);
      if (!cons.end_a.bounded()) cons.end_a = Interval::exact(end.a_v);
      break;
    default:
      break;
  }
  return EmatoProblem(reference, slope, std::move(cons), w, params, std::move(v_ref));
}

Solution solve(const EmatoProblem& problem, const SolverOptions& opts) {
  const auto r = solve_nlp(problem, opts);
  Solution s;
  s.x = r.x;
  s.traj = problem.unpack(r.x);
  s.stats = {r.status, r.iterations, r.wall_time, r.objective, r.max_violation, r.diagnostic};
  return s;
}

GradientReport check_gradients(const Nlp& nlp, const Eigen::VectorXd& x, double tol) {
  GradientReport rep;
  const int n = nlp.num_vars();
  const int m = nlp.num_cons();
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  auto step = [](double xi) { return 1e-6 * std::max(1.0, std::abs(xi)); };

  Eigen::VectorXd g;
  nlp.gradient(x, g);
  std::vector<double> jv;
  nlp.jacobian_values(x, jv);
  const auto jp = nlp.jacobian_pattern();
  Eigen::MatrixXd Jd = Eigen::MatrixXd::Zero(m, n);
  for (std::size_t k = 0; k < jv.size(); ++k) Jd(jp.rows[k], jp.cols[k]) += jv[k];

  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Eigen::VectorXd lambda(m);
  for (int r = 0; r < m; ++r) lambda[r] = U(rng);
  const double sigma = 1.0;
  std::vector<double> hv;
  nlp.hessian_values(x, sigma, lambda, hv);
  const auto hp = nlp.hessian_pattern();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < hv.size(); ++k) {
    H(hp.rows[k], hp.cols[k]) += hv[k];
    if (hp.rows[k] != hp.cols[k]) H(hp.cols[k], hp.rows[k]) += hv[k];
  }

  auto lagrangian_grad = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd gp;
    nlp.gradient(p, gp);
    std::vector<double> v;
    nlp.jacobian_values(p, v);
    Eigen::VectorXd out = sigma * gp;
    for (std::size_t k = 0; k < v.size(); ++k) out[jp.cols[k]] += lambda[jp.rows[k]] * v[k];
    return out;
  };

  for (int i = 0; i < n; ++i) {
    const double h = step(x[i]);
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fd = (nlp.objective(xp) - nlp.objective(xm)) / (2 * h);
    rep.objective_rel_err = std::max(rep.objective_rel_err, rel(g[i], fd));
    Eigen::VectorXd cp, cm;
    nlp.constraints(xp, cp);
    nlp.constraints(xm, cm);
    const Eigen::VectorXd dc = (cp - cm) / (2 * h);
    for (int r = 0; r < m; ++r) rep.jacobian_rel_err = std::max(rep.jacobian_rel_err, rel(Jd(r, i), dc[r]));
    const Eigen::VectorXd dg = (lagrangian_grad(xp) - lagrangian_grad(xm)) / (2 * h);
    for (int r = 0; r < n; ++r) rep.hessian_rel_err = std::max(rep.hessian_rel_err, rel(H(r, i), dg[r]));
  }
  rep.passed = rep.objective_rel_err <= tol && rep.jacobian_rel_err <= tol &&
               rep.hessian_rel_err <= tol;
  return rep;
}

Eigen::VectorXd random_point(const EmatoProblem& problem, unsigned seed) {
  Eigen::VectorXd lo, hi;
  problem.var_bounds(lo, hi);
  const Eigen::VectorXd ref = problem.initial_point();
  std::mt19937_64 rng(seed);
  Eigen::VectorXd x(lo.size());
  for (int i = 0; i < lo.size(); ++i) {
    double a = std::isfinite(lo[i]) ? lo[i] : ref[i] - 1.0;
    double b = std::isfinite(hi[i]) ? hi[i] : ref[i] + 1.0;
    if (i % EmatoProblem::kVarsPerKnot == EmatoProblem::V) a = std::max(a, 1.0);
    if (b < a) b = a;
    x[i] = std::uniform_real_distribution<double>(a, b)(rng);
  }
  return x;
}

EmatoProblem random_bvp(const dynamics::VehicleParams& params, unsigned seed, int knots,
                        double dt) {
  if (knots < 3) throw InvalidArgument("a BVP needs at least three knots");
  std::mt19937_64 rng(seed);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  const double T = (knots - 1) * dt;
  const double v0 = uni(5.0, 20.0), vT = uni(5.0, 20.0);
  const auto seg =
      polytraj::quintic_fit({0.0, v0, uni(-0.3, 0.3)}, {0.5 * (v0 + vT) * T, vT, 0.0}, T);
  const auto slope = dynamics::SlopeProfile::sine(dynamics::SlopeKind::rolling, uni(0.0, 0.05),
                                                  uni(100.0, 600.0), uni(0.0, 6.28));
  const auto quintic =
      polytraj::path_from_quintic(seg, static_cast<std::size_t>(knots), dt, slope, params);
  const auto ref = discretize_reference(quintic, params);
  std::vector<double> l;
  for (const auto& z : ref.z) l.push_back(z.l);
  polytraj::Weights w{uni(0.1, 1.0), uni(0.1, 15.0), uni(0.1, 15.0), uni(0.1, 2.0),
                      uni(1.0, 40.0), uni(5.0, 20.0)};
  ConstraintSpec cons;
  cons.kind = ConstraintKind::bvp;
  return build_problem(ref, dynamics::predict_slope(slope, l), cons, w, params);
}

nlohmann::json problem_to_json(const EmatoProblem& problem, const Solution* solution) {
  using nlohmann::json;
  auto vec = [](const Eigen::VectorXd& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(std::isfinite(v[i]) ? json(v[i]) : json(nullptr));
    return a;
  };
  Eigen::VectorXd xl, xu, gl, gu;
  problem.var_bounds(xl, xu);
  problem.con_bounds(gl, gu);
  const auto& w = problem.weights();
  json j{{"format", "emato.nlp"},
         {"version", 1},
         {"kind", to_string(problem.spec().kind)},
         {"knots", problem.num_knots()},
         {"dt", problem.dt()},
         {"num_vars", problem.num_vars()},
         {"num_cons", problem.num_cons()},
         {"weights",
          {{"w_v", w.w_v}, {"w_a", w.w_a}, {"w_b", w.w_b}, {"w_j", w.w_j}, {"w_f", w.w_f},
           {"v_d", w.v_d}}},
         {"vehicle", problem.params().name},
         {"theta", problem.theta()},
         {"var_lo", vec(xl)},
         {"var_hi", vec(xu)},
         {"con_lo", vec(gl)},
         {"con_hi", vec(gu)},
         {"warm_start", vec(problem.initial_point())}};
  if (solution) {
    j["solution"] = vec(solution->x);
    j["stats"] = {{"status", to_string(solution->stats.status)},
                  {"iterations", solution->stats.iterations},
                  {"wall_time", solution->stats.wall_time},
                  {"objective", solution->stats.objective},
                  {"max_violation", solution->stats.max_violation},
                  {"diagnostic", solution->stats.diagnostic}};
  }
  return j;
}

}  // namespace emato::optimizer
