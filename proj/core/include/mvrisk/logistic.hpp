#pragma once

#include <Eigen/Dense>

#include "mvrisk/optim.hpp"

namespace mvrisk {

// Binomial log-likelihood sum_i [y_i lp_i - log(1+exp(lp_i))] with
// lp = design*beta + offset. The design carries its own intercept column when
// one is wanted. divergence_bound is preset to 30 (logit scale).
OptimProblem logistic_problem(const Eigen::MatrixXd& design, const Eigen::VectorXi& y,
                              const Eigen::VectorXd& offset = Eigen::VectorXd());

struct LogisticFit {
  Eigen::VectorXd beta;
  OptimResult opt;
};

// Unpenalized MLE. Throws std::invalid_argument on a single-class outcome or
// n <= columns, std::runtime_error on separation or non-convergence.
LogisticFit fit_logistic(const Eigen::MatrixXd& design, const Eigen::VectorXi& y,
                         const Eigen::VectorXd& offset = Eigen::VectorXd(),
                         double tol = 1e-8);

double log1p_exp(double x);  // log(1 + exp(x)), stable on both sides

}  // namespace mvrisk
