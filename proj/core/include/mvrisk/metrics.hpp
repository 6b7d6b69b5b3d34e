#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mvrisk/dataset.hpp"
#include "mvrisk/joint_risk.hpp"

namespace mvrisk {

// Intercept of logit P(y=1) = alpha + logit(pred) with the logit term fixed
// as an offset: the alpha solving sum(y) = sum(expit(alpha + logit(pred))).
// Predictions are clamped to [1e-10, 1-1e-10] first. Ideal value 0.
double marginal_citl(const Eigen::VectorXd& pred, const Eigen::VectorXi& y);

// Slope on logit(pred) in a logistic recalibration with free intercept.
// Ideal value 1. Throws when logit(pred) is constant.
double marginal_slope(const Eigen::VectorXd& pred, const Eigen::VectorXi& y);

struct JointCalibration {
  Eigen::Vector3d citl;   // targets P11, P10, P01
  Eigen::Vector3d slope;  // same order
};

// Constrained multinomial recalibration on the log-ratio predictors
// log(P11/P00), log(P10/P00), log(P01/P00): intercepts are estimated with
// the diagonal slopes fixed at one and all cross slopes at zero; slopes are
// estimated with cross slopes fixed at zero. Predictions are floored at
// 1e-10 componentwise and renormalized.
JointCalibration joint_calibration(const std::vector<JointRisk>& preds,
                                   const Eigen::VectorXi& y1, const Eigen::VectorXi& y2);

// Mann-Whitney AUC with ties counted half, computed from midranks (exact,
// O(n log n)). Throws when only one class is present.
double auc(const Eigen::VectorXd& scores, const Eigen::VectorXi& labels);

double mse(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth);

enum class Target : int { P11 = 0, P10 = 1, P01 = 2, PY1 = 3, PY2 = 4 };
const std::array<std::string, 5>& target_names();

struct TargetMetrics {
  double citl = 0.0;
  double slope = 0.0;
  double auc = 0.0;
  std::optional<double> mse;
};

struct MetricsReport {
  std::array<TargetMetrics, 5> by_target{};  // indexed by Target
  std::string method;
  std::string scenario;
  int iteration = -1;

  TargetMetrics& at(Target t) { return by_target[static_cast<int>(t)]; }
  const TargetMetrics& at(Target t) const { return by_target[static_cast<int>(t)]; }
};

// Full evaluation of one prediction set: joint targets scored by their own
// predicted probability (AUC on the combination indicator, CITL and slope
// from the multinomial recalibration), marginal targets through the
// offset/slope logistic models, MSE against the generating truth when it is
// available.
MetricsReport evaluate_model(const std::vector<JointRisk>& joint_preds,
                             const Eigen::VectorXi& y1, const Eigen::VectorXi& y2,
                             const SyntheticTruth* truth);

}  // namespace mvrisk
