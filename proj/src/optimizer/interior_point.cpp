#include "emato/optimizer/interior_point.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace emato::optimizer {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::solved: return "solved";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

double max_violation(const Nlp& nlp, const Eigen::VectorXd& x, std::string* family) {
  Eigen::VectorXd xl, xu, gl, gu, c;
  nlp.var_bounds(xl, xu);
  nlp.con_bounds(gl, gu);
  nlp.constraints(x, c);
  double worst = 0.0;
  auto note = [&](double v, auto&& name) {
    if (v > worst) {
      worst = v;
      if (family) *family = name();
    }
  };
  for (int i = 0; i < x.size(); ++i) {
    note(xl[i] - x[i], [&] { return nlp.var_family(i); });
    note(x[i] - xu[i], [&] { return nlp.var_family(i); });
  }
  for (int r = 0; r < c.size(); ++r) {
    note(gl[r] - c[r], [&] { return nlp.con_family(r); });
    note(c[r] - gu[r], [&] { return nlp.con_family(r); });
  }
  return worst;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Clock = std::chrono::steady_clock;

// Problem in the form min f(x) s.t. c(w) = 0, lo <= w <= hi with
// w = (x, s) and one slack per inequality row.
struct Layout {
  int n = 0;
  int m = 0;
  int nw = 0;
  std::vector<int> slack;  // slack index in w per row, -1 for equality rows
  Eigen::VectorXd target;  // right-hand side of equality rows
  Eigen::VectorXd lo, hi;
  SparsityPattern jac;
  SparsityPattern hess;
};

class Problem {
 public:
  Problem(const Nlp& nlp, const SolverOptions& opts) : nlp_(nlp) {
    L_.n = nlp.num_vars();
    L_.m = nlp.num_cons();
    Eigen::VectorXd xl, xu, gl, gu;
    nlp.var_bounds(xl, xu);
    nlp.con_bounds(gl, gu);
    L_.slack.assign(L_.m, -1);
    L_.target = Eigen::VectorXd::Zero(L_.m);
    int ns = 0;
    for (int r = 0; r < L_.m; ++r) {
      if (gl[r] == gu[r]) {
        L_.target[r] = gl[r];
      } else {
        L_.slack[r] = L_.n + ns++;
      }
    }
    L_.nw = L_.n + ns;
    L_.lo.resize(L_.nw);
    L_.hi.resize(L_.nw);
    L_.lo.head(L_.n) = xl;
    L_.hi.head(L_.n) = xu;
    for (int r = 0; r < L_.m; ++r) {
      if (L_.slack[r] < 0) continue;
      L_.lo[L_.slack[r]] = gl[r];
      L_.hi[L_.slack[r]] = gu[r];
    }
    // Relaxation stays below the feasibility tolerance so converged iterates
    // count as feasible against the original bounds.
    auto relax = [&](double b) {
      return std::min(opts.bound_relax * std::max(1.0, std::abs(b)), 0.1 * opts.tol_feas);
    };
    for (int i = 0; i < L_.nw; ++i) {
      if (std::isfinite(L_.lo[i])) L_.lo[i] -= relax(L_.lo[i]);
      if (std::isfinite(L_.hi[i])) L_.hi[i] += relax(L_.hi[i]);
    }
    L_.jac = nlp.jacobian_pattern();
    L_.hess = nlp.hessian_pattern();
  }

  const Layout& layout() const { return L_; }

  double f(const Eigen::VectorXd& w) const { return nlp_.objective(w.head(L_.n)); }

  Eigen::VectorXd grad(const Eigen::VectorXd& w) const {
    Eigen::VectorXd gx;
    nlp_.gradient(w.head(L_.n), gx);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(L_.nw);
    g.head(L_.n) = gx;
    return g;
  }

  Eigen::VectorXd cons(const Eigen::VectorXd& w) const {
    Eigen::VectorXd c;
    nlp_.constraints(w.head(L_.n), c);
    for (int r = 0; r < L_.m; ++r) c[r] -= L_.slack[r] < 0 ? L_.target[r] : w[L_.slack[r]];
    return c;
  }

  // Jacobian of cons(w) as triplets.
  std::vector<Triplet> jac(const Eigen::VectorXd& w) const {
    std::vector<double> v;
    nlp_.jacobian_values(w.head(L_.n), v);
    std::vector<Triplet> t;
    t.reserve(v.size() + L_.m);
    for (std::size_t k = 0; k < v.size(); ++k) t.emplace_back(L_.jac.rows[k], L_.jac.cols[k], v[k]);
    for (int r = 0; r < L_.m; ++r)
      if (L_.slack[r] >= 0) t.emplace_back(r, L_.slack[r], -1.0);
    return t;
  }

  std::vector<double> hess(const Eigen::VectorXd& w, const Eigen::VectorXd& y) const {
    std::vector<double> v;
    nlp_.hessian_values(w.head(L_.n), 1.0, y, v);
    return v;
  }

 private:
  const Nlp& nlp_;
  Layout L_;
};

SpMat to_matrix(const std::vector<Triplet>& t, int rows, int cols) {
  SpMat A(rows, cols);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

// Multiplier estimate minimizing |grad + A' y - z| restricted to the
// given rows (all others get zero).
Eigen::VectorXd least_squares_multipliers(const SpMat& A, const Eigen::VectorXd& r,
                                          const std::vector<int>& rows) {
  const int m = static_cast<int>(A.rows());
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  if (rows.empty()) return y;
  std::vector<Triplet> sel;
  for (int k = 0; k < static_cast<int>(rows.size()); ++k) sel.emplace_back(k, rows[k], 1.0);
  SpMat S = to_matrix(sel, static_cast<int>(rows.size()), m);
  SpMat AR = S * A;
  SpMat N = AR * SpMat(AR.transpose());
  for (int k = 0; k < N.rows(); ++k) N.coeffRef(k, k) += 1e-12;
  Eigen::SimplicialLDLT<SpMat> ldlt(N);
  if (ldlt.info() != Eigen::Success) return y;
  Eigen::VectorXd yr = ldlt.solve(-(AR * r));
  if (ldlt.info() != Eigen::Success || !yr.allFinite()) return y;
  for (int k = 0; k < static_cast<int>(rows.size()); ++k) y[rows[k]] = yr[k];
  return y;
}

// First-order check at a point inside the bounds, with zero multipliers on
// inactive inequalities and sign-checked multipliers on active ones.
bool satisfies_kkt(const Problem& P, const Nlp& nlp, const Eigen::VectorXd& x,
                   const SolverOptions& opts) {
  const auto& L = P.layout();
  if (max_violation(nlp, x) > opts.tol_feas) return false;
  Eigen::VectorXd c;
  nlp.constraints(x, c);
  Eigen::VectorXd gl, gu, xl, xu;
  nlp.con_bounds(gl, gu);
  nlp.var_bounds(xl, xu);
  auto active = [](double v, double b) {
    return std::isfinite(b) && std::abs(v - b) <= 1e-9 * std::max(1.0, std::abs(b));
  };
  std::vector<int> rows;
  for (int r = 0; r < L.m; ++r)
    if (gl[r] == gu[r] || active(c[r], gl[r]) || active(c[r], gu[r])) rows.push_back(r);
  Eigen::VectorXd gx;
  nlp.gradient(x, gx);
  std::vector<double> jv;
  nlp.jacobian_values(x, jv);
  std::vector<Triplet> t;
  for (std::size_t k = 0; k < jv.size(); ++k) t.emplace_back(L.jac.rows[k], L.jac.cols[k], jv[k]);
  const SpMat J = to_matrix(t, L.m, L.n);
  const Eigen::VectorXd y = least_squares_multipliers(J, gx, rows);
  for (int r = 0; r < L.m; ++r) {
    if (gl[r] == gu[r]) continue;
    if (active(c[r], gl[r]) && y[r] > opts.tol_opt) return false;
    if (active(c[r], gu[r]) && y[r] < -opts.tol_opt) return false;
  }
  Eigen::VectorXd res = gx + J.transpose() * y;
  for (int i = 0; i < L.n; ++i) {
    if (active(x[i], xl[i]) && res[i] > 0) res[i] = 0;
    if (active(x[i], xu[i]) && res[i] < 0) res[i] = 0;
  }
  const double scale = std::max(1.0, y.lpNorm<1>() / std::max(1, L.m) / 100.0);
  return res.lpNorm<Eigen::Infinity>() / scale <= opts.tol_opt;
}

class KktSolver {
 public:
  KktSolver(const Layout& L) : L_(L) {}

  // Factorizes [H + D + dw I, A'; A, -dc I] with inertia (nw, m) and returns
  // false if no regularization up to the cap achieves it.
  bool factor(const std::vector<double>& hvals, const Eigen::VectorXd& sigma,
              const std::vector<Triplet>& jac) {
    const int dim = L_.nw + L_.m;
    double dw = 0.0;
    const double dc = 1e-10;
    for (int attempt = 0; attempt < 60; ++attempt) {
      std::vector<Triplet> t;
      t.reserve(hvals.size() + jac.size() + dim);
      for (std::size_t k = 0; k < hvals.size(); ++k) {
        int r = L_.hess.rows[k], c = L_.hess.cols[k];
        if (r < c) std::swap(r, c);
        t.emplace_back(r, c, hvals[k]);
      }
      for (int i = 0; i < L_.nw; ++i) t.emplace_back(i, i, sigma[i] + dw);
      for (const auto& e : jac) t.emplace_back(L_.nw + e.row(), e.col(), e.value());
      for (int r = 0; r < L_.m; ++r) t.emplace_back(L_.nw + r, L_.nw + r, -dc);
      K_ = to_matrix(t, dim, dim);
      if (!analyzed_) {
        ldlt_.analyzePattern(K_);
        analyzed_ = true;
      }
      ldlt_.factorize(K_);
      if (ldlt_.info() == Eigen::Success && inertia_ok()) {
        if (dw > 0) last_dw_ = dw;
        delta_w_ = dw;
        return true;
      }
      if (dw == 0.0) {
        dw = last_dw_ == 0.0 ? 1e-4 : std::max(1e-20, last_dw_ / 3.0);
      } else {
        dw *= last_dw_ == 0.0 ? 100.0 : 8.0;
      }
      if (dw > 1e40) return false;
    }
    return false;
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd x = ldlt_.solve(rhs);
    // Two rounds of iterative refinement against the regularized matrix.
    for (int it = 0; it < 2; ++it) {
      const Eigen::VectorXd r = rhs - K_.selfadjointView<Eigen::Lower>() * x;
      x += ldlt_.solve(r);
    }
    return x;
  }

  double delta_w() const { return delta_w_; }
  const SpMat& matrix() const { return K_; }

 private:
  bool inertia_ok() const {
    const Eigen::VectorXd& D = ldlt_.vectorD();
    int pos = 0, neg = 0;
    for (int i = 0; i < D.size(); ++i) {
      if (!std::isfinite(D[i])) return false;
      if (D[i] > 0) ++pos;
      else if (D[i] < 0) ++neg;
    }
    return pos == L_.nw && neg == L_.m;
  }

  const Layout& L_;
  SpMat K_;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower> ldlt_;
  bool analyzed_ = false;
  double last_dw_ = 0.0;
  double delta_w_ = 0.0;
};

struct Iterate {
  Eigen::VectorXd w, y, zl, zu;
};

}  // namespace

SolverResult solve_nlp(const Nlp& nlp, const SolverOptions& opts) {
  const auto t_start = Clock::now();
  SolverResult out;
  auto finish = [&](SolverResult& r) {
    r.wall_time = std::chrono::duration<double>(Clock::now() - t_start).count();
    r.objective = nlp.objective(r.x);
    r.max_violation = max_violation(nlp, r.x, nullptr);
    return r;
  };

  const Eigen::VectorXd x0 = nlp.initial_point();
  out.x = x0;
  out.lambda = Eigen::VectorXd::Zero(nlp.num_cons());

  // Crossed bounds make the feasible set empty.
  {
    Eigen::VectorXd xl, xu, gl, gu;
    nlp.var_bounds(xl, xu);
    nlp.con_bounds(gl, gu);
    for (int i = 0; i < xl.size(); ++i)
      if (xl[i] > xu[i]) {
        out.status = SolveStatus::infeasible;
        out.diagnostic = "empty bounds: " + nlp.var_family(i);
        return finish(out);
      }
    for (int r = 0; r < gl.size(); ++r)
      if (gl[r] > gu[r]) {
        out.status = SolveStatus::infeasible;
        out.diagnostic = "empty bounds: " + nlp.con_family(r);
        return finish(out);
      }
  }

  const Problem P(nlp, opts);
  const Layout& L = P.layout();

  if (opts.kkt_precheck && satisfies_kkt(P, nlp, x0, opts)) {
    out.status = SolveStatus::solved;
    out.iterations = 0;
    return finish(out);
  }

  const bool start_feasible = max_violation(nlp, x0) <= opts.tol_feas;
  const double start_obj = nlp.objective(x0);

  // Initial point pushed strictly inside the bounds.
  auto push_inside = [&](double v, double lo, double hi) {
    const double k = opts.bound_push;
    double pl = std::isfinite(lo) ? k * std::max(1.0, std::abs(lo)) : 0.0;
    double pu = std::isfinite(hi) ? k * std::max(1.0, std::abs(hi)) : 0.0;
    if (std::isfinite(lo) && std::isfinite(hi)) {
      pl = std::min(pl, k * (hi - lo));
      pu = std::min(pu, k * (hi - lo));
    }
    if (std::isfinite(lo)) v = std::max(v, lo + pl);
    if (std::isfinite(hi)) v = std::min(v, hi - pu);
    return v;
  };

  Iterate it;
  it.w.resize(L.nw);
  {
    Eigen::VectorXd c;
    nlp.constraints(x0, c);
    for (int i = 0; i < L.n; ++i) it.w[i] = push_inside(x0[i], L.lo[i], L.hi[i]);
    for (int r = 0; r < L.m; ++r)
      if (L.slack[r] >= 0) {
        const int s = L.slack[r];
        it.w[s] = push_inside(c[r], L.lo[s], L.hi[s]);
      }
  }

  double mu = opts.mu_init;
  const double mu_min = opts.tol_opt / 10.0;
  it.zl = Eigen::VectorXd::Zero(L.nw);
  it.zu = Eigen::VectorXd::Zero(L.nw);
  for (int i = 0; i < L.nw; ++i) {
    if (std::isfinite(L.lo[i])) it.zl[i] = mu / (it.w[i] - L.lo[i]);
    if (std::isfinite(L.hi[i])) it.zu[i] = mu / (L.hi[i] - it.w[i]);
  }
  {
    const SpMat A = to_matrix(P.jac(it.w), L.m, L.nw);
    std::vector<int> all(L.m);
    for (int r = 0; r < L.m; ++r) all[r] = r;
    it.y = least_squares_multipliers(A, P.grad(it.w) - it.zl + it.zu, all);
    if (it.y.lpNorm<Eigen::Infinity>() > 1e3) it.y.setZero();
  }

  const std::vector<int> lower = [&] {
    std::vector<int> v;
    for (int i = 0; i < L.nw; ++i)
      if (std::isfinite(L.lo[i])) v.push_back(i);
    return v;
  }();
  const std::vector<int> upper = [&] {
    std::vector<int> v;
    for (int i = 0; i < L.nw; ++i)
      if (std::isfinite(L.hi[i])) v.push_back(i);
    return v;
  }();
  const int n_bounds = std::max<int>(1, static_cast<int>(lower.size() + upper.size()));

  auto barrier = [&](const Eigen::VectorXd& w, double m) {
    double b = P.f(w);
    for (int i : lower) b -= m * std::log(w[i] - L.lo[i]);
    for (int i : upper) b -= m * std::log(L.hi[i] - w[i]);
    return b;
  };

  KktSolver kkt(L);
  double nu = 1.0;
  std::optional<Eigen::VectorXd> best_feasible;
  double best_obj = kInf;
  int forced_steps = 0;
  const double kappa_eps = 10.0, kappa_mu = 0.2, theta_mu = 1.5, eta = 1e-4;

  int iter = 0;
  for (;; ++iter) {
    const Eigen::VectorXd g = P.grad(it.w);
    const Eigen::VectorXd c = P.cons(it.w);
    const auto jt = P.jac(it.w);
    const SpMat A = to_matrix(jt, L.m, L.nw);
    const Eigen::VectorXd dual = g + A.transpose() * it.y - it.zl + it.zu;

    const double s_max = 100.0;
    const double s_d = std::max(s_max, (it.y.lpNorm<1>() + it.zl.lpNorm<1>() + it.zu.lpNorm<1>()) /
                                           (L.m + n_bounds)) / s_max;
    const double s_c = std::max(s_max, (it.zl.lpNorm<1>() + it.zu.lpNorm<1>()) / n_bounds) / s_max;
    auto compl_err = [&](double m) {
      double e = 0.0;
      for (int i : lower) e = std::max(e, std::abs((it.w[i] - L.lo[i]) * it.zl[i] - m));
      for (int i : upper) e = std::max(e, std::abs((L.hi[i] - it.w[i]) * it.zu[i] - m));
      return e;
    };
    const double dual_inf = dual.lpNorm<Eigen::Infinity>();
    const double primal_inf = c.size() ? c.lpNorm<Eigen::Infinity>() : 0.0;

    const Eigen::VectorXd x_now = it.w.head(L.n);
    const double viol_now = max_violation(nlp, x_now);
    if (viol_now <= opts.tol_feas) {
      const double fo = nlp.objective(x_now);
      if (fo < best_obj) {
        best_obj = fo;
        best_feasible = x_now;
      }
    }

    if (opts.verbose)
      std::fprintf(stderr, "it %3d f %.8e inf_pr %.2e inf_du %.2e compl %.2e viol %.2e mu %.1e dw %.1e\n",
                   iter, P.f(it.w), primal_inf, dual_inf / s_d, compl_err(0.0) / s_c, viol_now, mu,
                   kkt.delta_w());

    if (dual_inf / s_d <= opts.tol_opt && compl_err(0.0) / s_c <= opts.tol_opt &&
        primal_inf <= opts.tol_feas && viol_now <= opts.tol_feas) {
      out.status = SolveStatus::solved;
      break;
    }
    if (iter >= opts.max_iter || forced_steps > 10) {
      out.status = SolveStatus::max_iter;
      break;
    }

    while (mu > mu_min &&
           std::max({dual_inf / s_d, primal_inf, compl_err(mu) / s_c}) <= kappa_eps * mu) {
      mu = std::max(mu_min, std::min(kappa_mu * mu, std::pow(mu, theta_mu)));
    }
    const double tau = std::max(0.99, 1.0 - mu);

    // Newton system.
    Eigen::VectorXd sigma = Eigen::VectorXd::Zero(L.nw);
    Eigen::VectorXd grad_phi = g;
    for (int i : lower) {
      sigma[i] += it.zl[i] / (it.w[i] - L.lo[i]);
      grad_phi[i] -= mu / (it.w[i] - L.lo[i]);
    }
    for (int i : upper) {
      sigma[i] += it.zu[i] / (L.hi[i] - it.w[i]);
      grad_phi[i] += mu / (L.hi[i] - it.w[i]);
    }
    const auto hv = P.hess(it.w, it.y);
    if (!kkt.factor(hv, sigma, jt)) {
      out.status = SolveStatus::max_iter;
      out.diagnostic = "KKT factorization failed";
      break;
    }
    Eigen::VectorXd rhs(L.nw + L.m);
    rhs.head(L.nw) = -(grad_phi + A.transpose() * it.y);
    rhs.tail(L.m) = -c;
    const Eigen::VectorXd sol = kkt.solve(rhs);
    const Eigen::VectorXd dw = sol.head(L.nw);
    const Eigen::VectorXd dy = sol.tail(L.m);
    Eigen::VectorXd dzl = Eigen::VectorXd::Zero(L.nw), dzu = Eigen::VectorXd::Zero(L.nw);
    for (int i : lower) {
      const double sl = it.w[i] - L.lo[i];
      dzl[i] = mu / sl - it.zl[i] - it.zl[i] / sl * dw[i];
    }
    for (int i : upper) {
      const double su = L.hi[i] - it.w[i];
      dzu[i] = mu / su - it.zu[i] + it.zu[i] / su * dw[i];
    }

    // Fraction to the boundary.
    double a_max = 1.0, a_z = 1.0;
    for (int i : lower) {
      if (dw[i] < 0) a_max = std::min(a_max, -tau * (it.w[i] - L.lo[i]) / dw[i]);
      if (dzl[i] < 0) a_z = std::min(a_z, -tau * it.zl[i] / dzl[i]);
    }
    for (int i : upper) {
      if (dw[i] > 0) a_max = std::min(a_max, tau * (L.hi[i] - it.w[i]) / dw[i]);
      if (dzu[i] < 0) a_z = std::min(a_z, -tau * it.zu[i] / dzu[i]);
    }

    // l1 merit with penalty update.
    const double c1 = c.lpNorm<1>();
    const double gd = grad_phi.dot(dw);
    if (c1 > 1e-14) {
      const SpMat& K = kkt.matrix();
      const Eigen::VectorXd Hd = K.topLeftCorner(L.nw, L.nw).selfadjointView<Eigen::Lower>() * dw;
      const double curv = dw.dot(Hd);
      const double nu_trial = (gd + 0.5 * std::max(0.0, curv)) / (0.9 * c1);
      if (nu < nu_trial) nu = nu_trial + 1.0;
    }
    const double merit0 = barrier(it.w, mu) + nu * c1;
    const double slope = gd - nu * c1;

    double alpha = a_max;
    bool accepted = false;
    Eigen::VectorXd w_trial;
    for (int ls = 0; ls < 40; ++ls) {
      w_trial = it.w + alpha * dw;
      const double m_trial = barrier(w_trial, mu) + nu * P.cons(w_trial).lpNorm<1>();
      if (std::isfinite(m_trial) && m_trial <= merit0 + eta * alpha * std::min(slope, 0.0)) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
      if (alpha < 1e-14) break;
    }
    if (!accepted) {
      // Take a short step anyway and let the barrier update recover.
      ++forced_steps;
      alpha = std::max(alpha, 1e-6 * a_max);
      w_trial = it.w + alpha * dw;
    } else {
      forced_steps = 0;
    }

    it.w = w_trial;
    it.y += alpha * dy;
    it.zl += a_z * dzl;
    it.zu += a_z * dzu;
    const double k_sigma = 1e10;
    for (int i : lower) {
      const double sl = it.w[i] - L.lo[i];
      it.zl[i] = std::clamp(it.zl[i], mu / (k_sigma * sl), k_sigma * mu / sl);
    }
    for (int i : upper) {
      const double su = L.hi[i] - it.w[i];
      it.zu[i] = std::clamp(it.zu[i], mu / (k_sigma * su), k_sigma * mu / su);
    }
  }

  out.iterations = iter;
  out.x = it.w.head(L.n);
  out.lambda = it.y;

  if (out.status != SolveStatus::solved) {
    std::string family;
    const double v = max_violation(nlp, out.x, &family);
    if (best_feasible) {
      out.x = *best_feasible;
    } else if (start_feasible) {
      out.x = x0;
    } else {
      out.status = SolveStatus::infeasible;
      if (out.diagnostic.empty())
        out.diagnostic = "most violated: " + family + " (" + std::to_string(v) + ")";
    }
  }
  if (opts.keep_feasible_start && start_feasible &&
      nlp.objective(out.x) > start_obj + 1e-8) {
    out.x = x0;
    if (out.diagnostic.empty()) out.diagnostic = "kept initial point";
  }
  return finish(out);
}

}  // namespace emato::optimizer
