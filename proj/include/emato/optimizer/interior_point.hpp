#pragma once

#include <string>

#include <Eigen/Core>

#include "emato/optimizer/nlp.hpp"

namespace emato::optimizer {

enum class SolveStatus { solved, max_iter, infeasible };
const char* to_string(SolveStatus s);

struct SolverOptions {
  double tol_feas = 1e-6;
  double tol_opt = 1e-5;
  int max_iter = 200;
  double mu_init = 1e-2;
  double bound_push = 1e-2;
  double bound_relax = 1e-8;
  /// Return the initial point unchanged when it already satisfies the
  /// first-order conditions.
  bool kkt_precheck = true;
  /// Never return a point whose objective exceeds a feasible initial point.
  bool keep_feasible_start = true;
  bool verbose = false;
};

struct SolverResult {
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;
  SolveStatus status = SolveStatus::max_iter;
  int iterations = 0;
  double wall_time = 0.0;
  double objective = 0.0;
  double max_violation = 0.0;
  std::string diagnostic;
};

/// Primal-dual interior-point method: slack reformulation of inequality
/// rows, log barrier on all bounds, Newton steps on the KKT system with
/// inertia correction, l1-merit backtracking and monotone barrier updates.
SolverResult solve_nlp(const Nlp& nlp, const SolverOptions& opts = {});

}  // namespace emato::optimizer
