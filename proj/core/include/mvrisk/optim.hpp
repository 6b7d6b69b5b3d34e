#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <string>

namespace mvrisk {

// A smooth maximization problem. The objective is a log-likelihood (or any
// concave-ish function); hessian is optional and falls back to central finite
// differences of the gradient. feasible() marks the open region where the
// objective is finite; the line search never evaluates outside it.
struct OptimProblem {
  int dimension = 0;
  std::function<double(const Eigen::VectorXd&)> objective;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
  std::function<bool(const Eigen::VectorXd&)> feasible;
  // Any |parameter| beyond this stops the fit with diverged=true (used by the
  // logistic fitters to flag separation; coefficients past 30 on the logit
  // scale are never legitimate there).
  double divergence_bound = std::numeric_limits<double>::infinity();
};

struct OptimResult {
  Eigen::VectorXd parameters;
  double objective_value = -std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
  bool ridge_damped = false;
  bool diverged = false;
  std::string diagnostic;
};

// Damped Newton ascent with backtracking line search. Each accepted step
// increases the objective (Armijo condition); near-singular Hessians are
// ridge-damped and reported through OptimResult::ridge_damped.
OptimResult newton_maximize(const OptimProblem& problem, const Eigen::VectorXd& init,
                            double tol = 1e-8, int max_iter = 200);

Eigen::MatrixXd fd_hessian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& gradient,
                           const Eigen::VectorXd& x);

}  // namespace mvrisk
