#pragma once

#include <Eigen/Dense>

#include "mvrisk/joint_risk.hpp"

namespace mvrisk {

struct UnivariateLogisticModel {
  double intercept = 0.0;
  Eigen::VectorXd coefficients;

  double linear_predictor(const Eigen::VectorXd& x) const {
    return intercept + coefficients.dot(x);
  }
};

// The two-separate-CPMs baseline: one logistic model per outcome.
struct UnivariatePairModel {
  UnivariateLogisticModel outcome1;
  UnivariateLogisticModel outcome2;
};

// Unpenalized MLE of a single logistic CPM (gradient max-norm <= 1e-8).
// Throws on single-class outcomes and on separation.
UnivariateLogisticModel fit_univariate(const Eigen::MatrixXd& X, const Eigen::VectorXi& y);

UnivariatePairModel fit_univariate_pair(const Eigen::MatrixXd& X, const Eigen::VectorXi& y1,
                                        const Eigen::VectorXi& y2);

// Product-form joint risk: valid only under conditional independence, which
// is exactly what this baseline assumes.
JointRisk predict_univariate_joint(const UnivariateLogisticModel& m1,
                                   const UnivariateLogisticModel& m2,
                                   const Eigen::VectorXd& x);

}  // namespace mvrisk
