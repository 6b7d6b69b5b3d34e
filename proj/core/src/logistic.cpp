#include "mvrisk/logistic.hpp"

#include <cmath>
#include <stdexcept>

#include "mvrisk/special.hpp"

namespace mvrisk {

double log1p_exp(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

OptimProblem logistic_problem(const Eigen::MatrixXd& design, const Eigen::VectorXi& y,
                              const Eigen::VectorXd& offset) {
  const auto n = design.rows();
  if (y.size() != n) throw std::invalid_argument("logistic_problem: row mismatch");
  if (offset.size() != 0 && offset.size() != n) {
    throw std::invalid_argument("logistic_problem: offset length mismatch");
  }
  Eigen::VectorXd off = offset.size() ? offset : Eigen::VectorXd::Zero(n);
  Eigen::VectorXd yd = y.cast<double>();

  OptimProblem p;
  p.dimension = static_cast<int>(design.cols());
  p.divergence_bound = 30.0;
  p.objective = [design, yd, off](const Eigen::VectorXd& beta) {
    Eigen::VectorXd lp = design * beta + off;
    double ll = yd.dot(lp);
    for (Eigen::Index i = 0; i < lp.size(); ++i) ll -= log1p_exp(lp[i]);
    return ll;
  };
  p.gradient = [design, yd, off](const Eigen::VectorXd& beta) {
    Eigen::VectorXd lp = design * beta + off;
    Eigen::VectorXd prob(lp.size());
    for (Eigen::Index i = 0; i < lp.size(); ++i) prob[i] = expit(lp[i]);
    return (design.transpose() * (yd - prob)).eval();
  };
  p.hessian = [design, off](const Eigen::VectorXd& beta) {
    Eigen::VectorXd lp = design * beta + off;
    Eigen::VectorXd w(lp.size());
    for (Eigen::Index i = 0; i < lp.size(); ++i) {
      const double pi = expit(lp[i]);
      w[i] = pi * (1.0 - pi);
    }
    return (-(design.transpose() * w.asDiagonal() * design)).eval();
  };
  return p;
}

LogisticFit fit_logistic(const Eigen::MatrixXd& design, const Eigen::VectorXi& y,
                         const Eigen::VectorXd& offset, double tol) {
  const auto n = design.rows();
  const int ones = static_cast<int>((y.array() == 1).count());
  if (ones == 0 || ones == n) {
    throw std::invalid_argument("fit_logistic: outcome has a single class");
  }
  if (n <= design.cols()) {
    throw std::invalid_argument("fit_logistic: more parameters than observations");
  }
  OptimProblem p = logistic_problem(design, y, offset);
  Eigen::VectorXd init = Eigen::VectorXd::Zero(design.cols());
  OptimResult r = newton_maximize(p, init, tol);
  if (r.diverged) {
    throw std::runtime_error("fit_logistic: " + r.diagnostic);
  }
  if (!r.converged) {
    throw std::runtime_error("fit_logistic: did not converge (" + r.diagnostic + ")");
  }
  return LogisticFit{r.parameters, std::move(r)};
}

}  // namespace mvrisk
