#pragma once

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "emato/dynamics/slope_profile.hpp"
#include "emato/dynamics/vehicle_params.hpp"
#include "emato/optimizer/interior_point.hpp"
#include "emato/optimizer/nlp.hpp"
#include "emato/polytraj/trajectory.hpp"
#include "emato/traffic.hpp"

namespace emato::optimizer {

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Interval exact(double x) { return {x, x}; }
  static Interval free() { return {}; }
  bool fixed() const { return lo == hi; }
  bool bounded() const { return lo > -std::numeric_limits<double>::infinity() ||
                                hi < std::numeric_limits<double>::infinity(); }
  Interval intersect(const Interval& o) const;
};

enum class ConstraintKind { bvp, acc_b, acc_r, acc_v, frenet_homotopy };
const char* to_string(ConstraintKind k);

/// Constraint set of one rollout. Gaps are measured as leader_l - l.
struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::bvp;
  Interval end_l;
  Interval end_v;
  Interval end_a;
  std::vector<double> leader_l;  // per knot; empty without a leader
  Interval gap;                  // knots 1..n-1
  Interval end_gap;              // last knot
  std::vector<double> path_l_lo;  // per knot; empty when unused
  std::vector<double> path_l_hi;
};

struct AccParams {
  double time_headway = 1.5;  // s
  double gap_min = 50.0;      // m, standstill spacing and lower gap bound
  double gap_max = 300.0;     // m
  double gap_relax = 10.0;    // m, end-gap half width for the relaxed variant

  /// Desired spacing for a leader speed.
  double spacing(double v_leader) const { return time_headway * v_leader + gap_min; }
};

enum class AccVariant { boundary, relaxed, tracking };

/// Gap constraints against the first agent of the prediction, which must
/// carry path positions and speeds. Throws InvalidSpec if gap_min >= gap_max.
ConstraintSpec acc_constraints(AccVariant variant, const TrafficPrediction& pred,
                               const AccParams& params = {});

/// Decision layout per knot k: [l, v, a_v, j, a_b] at 5k.
class EmatoProblem : public Nlp {
 public:
  static constexpr int kVarsPerKnot = 5;
  enum Var { L = 0, V = 1, A = 2, J = 3, B = 4 };

  /// Throws AlignmentError when the reference, slope, leader or speed
  /// reference lengths differ.
  EmatoProblem(polytraj::PathTrajectory reference, dynamics::SlopePrediction slope,
               ConstraintSpec cons, polytraj::Weights weights, dynamics::VehicleParams params,
               std::vector<double> v_ref = {});

  int num_knots() const { return n_; }
  double dt() const { return ref_.dt; }
  const polytraj::PathTrajectory& reference() const { return ref_; }
  const ConstraintSpec& spec() const { return cons_; }
  const polytraj::Weights& weights() const { return w_; }
  const dynamics::VehicleParams& params() const { return p_; }
  const std::vector<double>& theta() const { return theta_; }

  int num_vars() const override { return kVarsPerKnot * n_; }
  int num_cons() const override;
  void var_bounds(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const override;
  void con_bounds(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const override;
  Eigen::VectorXd initial_point() const override { return warm_; }

  double objective(const Eigen::VectorXd& x) const override;
  void gradient(const Eigen::VectorXd& x, Eigen::VectorXd& g) const override;
  void constraints(const Eigen::VectorXd& x, Eigen::VectorXd& c) const override;
  SparsityPattern jacobian_pattern() const override;
  void jacobian_values(const Eigen::VectorXd& x, std::vector<double>& values) const override;
  SparsityPattern hessian_pattern() const override;
  void hessian_values(const Eigen::VectorXd& x, double sigma, const Eigen::VectorXd& lambda,
                      std::vector<double>& values) const override;
  std::string var_family(int i) const override;
  std::string con_family(int r) const override;

  /// Trajectory with derived columns (grade, resistance, traction, fuel).
  polytraj::PathTrajectory unpack(const Eigen::VectorXd& x) const;
  Eigen::VectorXd pack(const polytraj::PathTrajectory& traj) const;

 private:
  int idx(int k, Var v) const { return kVarsPerKnot * k + v; }
  double resistance(int k, double v) const;

  polytraj::PathTrajectory ref_;
  std::vector<double> theta_;
  ConstraintSpec cons_;
  polytraj::Weights w_;
  dynamics::VehicleParams p_;
  std::vector<double> v_ref_;
  int n_ = 0;
  Eigen::VectorXd warm_;
};

/// Reference whose knots satisfy the constant-jerk update exactly: the jerk
/// of each interval is the acceleration change over dt, integrated from the
/// first knot. The stored grades are kept; the other derived columns are
/// recomputed.
polytraj::PathTrajectory discretize_reference(const polytraj::PathTrajectory& ref,
                                              const dynamics::VehicleParams& params);

/// Fills end constraints that follow from the kind: bvp fixes the final l
/// to the reference; frenet-homotopy fixes the final (l, v, a_v).
EmatoProblem build_problem(const polytraj::PathTrajectory& reference,
                           const dynamics::SlopePrediction& slope, ConstraintSpec cons,
                           const polytraj::Weights& w, const dynamics::VehicleParams& params,
                           std::vector<double> v_ref = {});

struct SolveStats {
  SolveStatus status = SolveStatus::max_iter;
  int iterations = 0;
  double wall_time = 0.0;
  double objective = 0.0;
  double max_violation = 0.0;
  std::string diagnostic;
};

struct Solution {
  polytraj::PathTrajectory traj;
  Eigen::VectorXd x;
  SolveStats stats;
};

Solution solve(const EmatoProblem& problem, const SolverOptions& opts = {});

struct GradientReport {
  double objective_rel_err = 0.0;
  double jacobian_rel_err = 0.0;
  double hessian_rel_err = 0.0;
  bool passed = false;
};

/// Central finite differences against the analytic first and second
/// derivatives at x.
GradientReport check_gradients(const Nlp& nlp, const Eigen::VectorXd& x, double tol = 1e-5);

/// Random point inside the variable bounds (finite boxes around the
/// reference for unbounded coordinates).
Eigen::VectorXd random_point(const EmatoProblem& problem, unsigned seed);

/// Seeded BVP over a quintic reference with random boundary speeds, a random
/// sinusoidal grade and strictly positive weights.
EmatoProblem random_bvp(const dynamics::VehicleParams& params, unsigned seed, int knots = 50,
                        double dt = 0.1);

nlohmann::json problem_to_json(const EmatoProblem& problem, const Solution* solution = nullptr);

}  // namespace emato::optimizer
