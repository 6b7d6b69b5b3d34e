#include "mvrisk/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace mvrisk {

namespace {

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

Eigen::MatrixXd fd_hessian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& gradient,
                           const Eigen::VectorXd& x) {
  const int d = static_cast<int>(x.size());
  Eigen::MatrixXd h(d, d);
  Eigen::VectorXd xp = x, xm = x;
  for (int j = 0; j < d; ++j) {
    const double step = 1e-6 * (1.0 + std::abs(x[j]));
    xp[j] = x[j] + step;
    xm[j] = x[j] - step;
    h.col(j) = (gradient(xp) - gradient(xm)) / (2.0 * step);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return 0.5 * (h + h.transpose());
}

OptimResult newton_maximize(const OptimProblem& problem, const Eigen::VectorXd& init,
                            double tol, int max_iter) {
  if (problem.dimension <= 0 || init.size() != problem.dimension) {
    throw std::invalid_argument("newton_maximize: init does not match problem dimension");
  }
  if (tol <= 0.0) throw std::invalid_argument("newton_maximize: tol must be positive");
  auto feasible = [&](const Eigen::VectorXd& v) {
    return !problem.feasible || problem.feasible(v);
  };
  if (!feasible(init)) throw std::invalid_argument("newton_maximize: infeasible initial point");

  OptimResult res;
  Eigen::VectorXd x = init;
  double f = problem.objective(x);
  if (!std::isfinite(f)) {
    throw std::invalid_argument("newton_maximize: objective not finite at initial point");
  }

  for (int it = 1; it <= max_iter; ++it) {
    res.iterations = it;
    if (x.cwiseAbs().maxCoeff() > problem.divergence_bound) {
      res.parameters = x;
      res.objective_value = f;
      res.diverged = true;
      res.diagnostic = "coefficients diverging beyond bound (separation suspected)";
      return res;
    }
    Eigen::VectorXd g = problem.gradient(x);
    if (g.cwiseAbs().maxCoeff() <= tol) {
      res.parameters = x;
      res.objective_value = f;
      res.converged = true;
      return res;
    }
    Eigen::MatrixXd h = problem.hessian ? problem.hessian(x) : fd_hessian(problem.gradient, x);

    // Solve (-H + mu I) d = g, escalating mu until the step is an ascent
    // direction; a non-finite Hessian degrades to plain gradient ascent.
    Eigen::VectorXd d;
    bool have_direction = false;
    if (h.allFinite()) {
      const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
      double mu = 0.0;
      for (int attempt = 0; attempt < 60; ++attempt) {
        Eigen::MatrixXd m = -h;
        m.diagonal().array() += mu;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
        if (ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 1e-12 * scale) {
          d = ldlt.solve(g);
          if (all_finite(d) && g.dot(d) > 0.0) {
            have_direction = true;
            break;
          }
        }
        mu = (mu == 0.0) ? 1e-8 * scale : mu * 10.0;
        res.ridge_damped = true;
      }
    }
    if (!have_direction) {
      d = g;  // steepest ascent fallback
      res.ridge_damped = true;
    }

    const double slope = g.dot(d);
    // Roundoff allowance: once the predicted gain drops below the noise of
    // evaluating f (a sum over n rows), a strict Armijo test would reject the
    // final full Newton steps and stall the gradient above tolerance.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(f));
    double t = 1.0;
    bool accepted = false;
    double fn = f;
    Eigen::VectorXd xn;
    while (t >= 1e-14) {
      xn = x + t * d;
      if (feasible(xn)) {
        fn = problem.objective(xn);
        if (std::isfinite(fn) && fn >= f + 1e-4 * t * slope - noise) {
          accepted = true;
          break;
        }
      }
      t /= 2.0;
    }
    if (!accepted) {
      res.parameters = x;
      res.objective_value = f;
      res.diagnostic = "line search failed to find an ascent step";
      return res;
    }
    x = xn;
    f = fn;
  }
  res.parameters = x;
  res.objective_value = f;
  res.diagnostic = "maximum iterations reached";
  return res;
}

}  // namespace mvrisk
