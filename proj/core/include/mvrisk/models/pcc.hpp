#pragma once

#include <Eigen/Dense>

#include "mvrisk/joint_risk.hpp"
#include "mvrisk/models/univariate.hpp"

namespace mvrisk {

// A conditional submodel: logistic in the covariates plus one coefficient on
// the preceding outcome in the chain.
struct ChainConditional {
  double intercept = 0.0;
  Eigen::VectorXd coefficients;
  double outcome_coef = 0.0;  // gamma on the conditioning outcome

  double linear_predictor(const Eigen::VectorXd& x, int preceding) const {
    return intercept + coefficients.dot(x) + outcome_coef * preceding;
  }
};

// Probabilistic classifier chain over both orderings of the two outcomes,
// joint risks averaged across the two permutations.
struct PccModel {
  UnivariateLogisticModel perm1_marginal;  // Y1 | X
  ChainConditional perm1_conditional;      // Y2 | X, Y1
  UnivariateLogisticModel perm2_marginal;  // Y2 | X
  ChainConditional perm2_conditional;      // Y1 | X, Y2
};

// Four separate unpenalized MLEs; separation in any submodel is reported with
// the submodel named.
PccModel fit_pcc(const Eigen::MatrixXd& X, const Eigen::VectorXi& y1,
                 const Eigen::VectorXi& y2);

// Joint probabilities of one permutation's chain, before ensembling.
JointRisk pcc_permutation_joint(const PccModel& m, int permutation, const Eigen::VectorXd& x);

JointRisk predict_pcc(const PccModel& m, const Eigen::VectorXd& x);

}  // namespace mvrisk
