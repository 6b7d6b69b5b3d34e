#pragma once

#include <Eigen/Dense>

#include "mvrisk/joint_risk.hpp"
#include "mvrisk/models/univariate.hpp"
#include "mvrisk/rng.hpp"

namespace mvrisk {

// Second-stage coefficients of one stacked model: intercept, weights on both
// stage-1 linear predictors, and per-covariate direct effects.
struct StackedStage2 {
  double intercept = 0.0;
  double weight_f1 = 0.0;
  double weight_f2 = 0.0;
  Eigen::VectorXd direct;  // length P (empty when direct effects are omitted)
};

struct StackedModel {
  UnivariateLogisticModel stage1_outcome1;
  UnivariateLogisticModel stage1_outcome2;
  StackedStage2 stage2_outcome1;
  StackedStage2 stage2_outcome2;
  double lambda1 = 0.0;
  double lambda2 = 0.0;

  double stage2_lp(int outcome, const Eigen::VectorXd& x) const;
};

struct StackedOptions {
  bool cv_lambda = true;        // false -> use fixed_lambda as-is
  double fixed_lambda = 0.0;
  int folds = 10;
  int grid_size = 50;
  double grid_ratio = 1e-4;
  bool include_direct_effects = true;
};

// Two-stage fit: unpenalized stage-1 CPMs, then per-outcome lasso on
// [f1(X), f2(X), X] with the intercept unpenalized and lambda picked by
// cross-validated deviance (independent folds per outcome).
StackedModel fit_stacked(const Eigen::MatrixXd& X, const Eigen::VectorXi& y1,
                         const Eigen::VectorXi& y2, RngStream rng,
                         const StackedOptions& opts = {});

// Marginals from the stage-2 models, joint by the product form (the stacking
// stage does not model residual dependence).
JointRisk predict_stacked_joint(const StackedModel& m, const Eigen::VectorXd& x);

}  // namespace mvrisk
