#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace emato::optimizer {

/// Coordinates of the structurally nonzero entries of a sparse matrix.
struct SparsityPattern {
  std::vector<int> rows;
  std::vector<int> cols;

  std::size_t nnz() const { return rows.size(); }
  void add(int r, int c) {
    rows.push_back(r);
    cols.push_back(c);
  }
};

/// min f(x) s.t. g_lo <= c(x) <= g_hi, x_lo <= x <= x_hi.
/// Rows with g_lo == g_hi are equalities. Infinite bounds are allowed.
class Nlp {
 public:
  virtual ~Nlp() = default;

  virtual int num_vars() const = 0;
  virtual int num_cons() const = 0;
  virtual void var_bounds(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const = 0;
  virtual void con_bounds(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const = 0;
  virtual Eigen::VectorXd initial_point() const = 0;

  virtual double objective(const Eigen::VectorXd& x) const = 0;
  virtual void gradient(const Eigen::VectorXd& x, Eigen::VectorXd& g) const = 0;
  virtual void constraints(const Eigen::VectorXd& x, Eigen::VectorXd& c) const = 0;

  virtual SparsityPattern jacobian_pattern() const = 0;
  virtual void jacobian_values(const Eigen::VectorXd& x, std::vector<double>& values) const = 0;

  /// Lower triangle of sigma * hess f + sum_r lambda_r * hess c_r.
  virtual SparsityPattern hessian_pattern() const = 0;
  virtual void hessian_values(const Eigen::VectorXd& x, double sigma, const Eigen::VectorXd& lambda,
                              std::vector<double>& values) const = 0;

  /// Names used in infeasibility diagnostics.
  virtual std::string var_family(int /*i*/) const { return "variable bounds"; }
  virtual std::string con_family(int /*r*/) const { return "constraints"; }
};

/// Largest bound or constraint violation at x; `family` receives the name of
/// the worst offender when non-null.
double max_violation(const Nlp& nlp, const Eigen::VectorXd& x, std::string* family = nullptr);

}  // namespace emato::optimizer
