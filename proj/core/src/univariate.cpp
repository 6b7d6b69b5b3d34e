#include "mvrisk/models/univariate.hpp"

#include <stdexcept>

#include "mvrisk/logistic.hpp"
#include "mvrisk/special.hpp"

namespace mvrisk {

namespace {

Eigen::MatrixXd design_with_intercept(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd d(X.rows(), X.cols() + 1);
  d.col(0).setOnes();
  d.rightCols(X.cols()) = X;
  return d;
}

}  // namespace

UnivariateLogisticModel fit_univariate(const Eigen::MatrixXd& X, const Eigen::VectorXi& y) {
  const LogisticFit fit = fit_logistic(design_with_intercept(X), y);
  UnivariateLogisticModel m;
  m.intercept = fit.beta[0];
  m.coefficients = fit.beta.tail(X.cols());
  return m;
}

UnivariatePairModel fit_univariate_pair(const Eigen::MatrixXd& X, const Eigen::VectorXi& y1,
                                        const Eigen::VectorXi& y2) {
  return UnivariatePairModel{fit_univariate(X, y1), fit_univariate(X, y2)};
}

JointRisk predict_univariate_joint(const UnivariateLogisticModel& m1,
                                   const UnivariateLogisticModel& m2,
                                   const Eigen::VectorXd& x) {
  if (x.size() != m1.coefficients.size() || x.size() != m2.coefficients.size()) {
    throw std::invalid_argument("predict_univariate_joint: covariate dimension mismatch");
  }
  const double p1 = expit(m1.linear_predictor(x));
  const double p2 = expit(m2.linear_predictor(x));
  JointRisk j;
  j.p11 = p1 * p2;
  j.p10 = p1 * (1.0 - p2);
  j.p01 = (1.0 - p1) * p2;
  j.p00 = (1.0 - p1) * (1.0 - p2);
  return j;
}

}  // namespace mvrisk
