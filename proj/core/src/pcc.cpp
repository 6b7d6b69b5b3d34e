#include "mvrisk/models/pcc.hpp"

#include <stdexcept>

#include "mvrisk/logistic.hpp"
#include "mvrisk/special.hpp"

namespace mvrisk {

namespace {

ChainConditional fit_conditional(const Eigen::MatrixXd& X, const Eigen::VectorXi& given,
                                 const Eigen::VectorXi& y, const char* label) {
  Eigen::MatrixXd d(X.rows(), X.cols() + 2);
  d.col(0).setOnes();
  d.middleCols(1, X.cols()) = X;
  d.col(X.cols() + 1) = given.cast<double>();
  try {
    const LogisticFit fit = fit_logistic(d, y);
    ChainConditional c;
    c.intercept = fit.beta[0];
    c.coefficients = fit.beta.segment(1, X.cols());
    c.outcome_coef = fit.beta[X.cols() + 1];
    return c;
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("fit_pcc: ") + label + ": " + e.what());
  }
}

}  // namespace

PccModel fit_pcc(const Eigen::MatrixXd& X, const Eigen::VectorXi& y1,
                 const Eigen::VectorXi& y2) {
  if (X.rows() <= X.cols() + 2) {
    throw std::invalid_argument("fit_pcc: too few rows for the conditional submodels");
  }
  PccModel m;
  try {
    m.perm1_marginal = fit_univariate(X, y1);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("fit_pcc: permutation-1 marginal (Y1|X): ") + e.what());
  }
  m.perm1_conditional = fit_conditional(X, y1, y2, "permutation-1 conditional (Y2|X,Y1)");
  try {
    m.perm2_marginal = fit_univariate(X, y2);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("fit_pcc: permutation-2 marginal (Y2|X): ") + e.what());
  }
  m.perm2_conditional = fit_conditional(X, y2, y1, "permutation-2 conditional (Y1|X,Y2)");
  return m;
}

JointRisk pcc_permutation_joint(const PccModel& m, int permutation, const Eigen::VectorXd& x) {
  JointRisk j;
  if (permutation == 1) {
    const double p1 = expit(m.perm1_marginal.linear_predictor(x));
    const double p2_given1 = expit(m.perm1_conditional.linear_predictor(x, 1));
    const double p2_given0 = expit(m.perm1_conditional.linear_predictor(x, 0));
    j.p11 = p2_given1 * p1;
    j.p10 = (1.0 - p2_given1) * p1;
    j.p01 = p2_given0 * (1.0 - p1);
    j.p00 = (1.0 - p2_given0) * (1.0 - p1);
  } else if (permutation == 2) {
    const double p2 = expit(m.perm2_marginal.linear_predictor(x));
    const double p1_given1 = expit(m.perm2_conditional.linear_predictor(x, 1));
    const double p1_given0 = expit(m.perm2_conditional.linear_predictor(x, 0));
    j.p11 = p1_given1 * p2;
    j.p01 = (1.0 - p1_given1) * p2;
    j.p10 = p1_given0 * (1.0 - p2);
    j.p00 = (1.0 - p1_given0) * (1.0 - p2);
  } else {
    throw std::invalid_argument("pcc_permutation_joint: permutation must be 1 or 2");
  }
  return j;
}

JointRisk predict_pcc(const PccModel& m, const Eigen::VectorXd& x) {
  if (x.size() != m.perm1_marginal.coefficients.size()) {
    throw std::invalid_argument("predict_pcc: covariate dimension mismatch");
  }
  const JointRisk a = pcc_permutation_joint(m, 1, x);
  const JointRisk b = pcc_permutation_joint(m, 2, x);
  JointRisk j;
  j.p11 = 0.5 * (a.p11 + b.p11);
  j.p10 = 0.5 * (a.p10 + b.p10);
  j.p01 = 0.5 * (a.p01 + b.p01);
  j.p00 = 0.5 * (a.p00 + b.p00);
  return j;
}

}  // namespace mvrisk
