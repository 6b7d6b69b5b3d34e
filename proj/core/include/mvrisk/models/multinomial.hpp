#pragma once

#include <Eigen/Dense>
#include <array>

#include "mvrisk/joint_risk.hpp"
#include "mvrisk/optim.hpp"

namespace mvrisk {

// Outcome-pair category codes. Reference is {00}; the three modelled
// log-ratios are 11, 10, 01 against it, in that order.
enum class PairCategory : int { p00 = 0, p11 = 1, p10 = 2, p01 = 3 };

inline int pair_category(int y1, int y2) {
  if (y1 == 1) return y2 == 1 ? 1 : 2;
  return y2 == 1 ? 3 : 0;
}

// Reference-category multinomial logistic model over the four outcome
// combinations; one intercept+coefficient block per non-reference category.
struct MultinomialModel {
  std::array<double, 3> intercepts{};           // categories 11, 10, 01
  std::array<Eigen::VectorXd, 3> coefficients;  // shared covariate dimension
};

// General constrained reference-category fit: each non-reference category k
// gets its own design block and a fixed offset added to its linear predictor.
// This is what lets calibration models pin slopes at one or zero as offsets.
struct MultinomialFitSpec {
  Eigen::VectorXi category;                // values 0..3, 0 = reference
  std::array<Eigen::MatrixXd, 3> design;   // n x d_k, d_k may differ
  std::array<Eigen::VectorXd, 3> offset;   // empty means zero
};

struct MultinomialFitResult {
  std::array<Eigen::VectorXd, 3> coef;  // per-category parameter blocks
  OptimResult opt;
};

OptimProblem multinomial_problem(const MultinomialFitSpec& spec);
MultinomialFitResult fit_multinomial_general(const MultinomialFitSpec& spec,
                                             double tol = 1e-8);

// MLE over [1, X] per category. Throws if any of the four combinations is
// absent (names the missing one) or on separation.
MultinomialModel fit_multinomial(const Eigen::MatrixXd& X, const Eigen::VectorXi& y1,
                                 const Eigen::VectorXi& y2);

// Softmax of the three linear predictors against the implicit reference 0;
// overflow-safe for linear predictors up to +-700.
JointRisk predict_multinomial(const MultinomialModel& m, const Eigen::VectorXd& x);

}  // namespace mvrisk
