#pragma once

#include <Eigen/Dense>

#include "mvrisk/joint_risk.hpp"
#include "mvrisk/optim.hpp"

namespace mvrisk {

struct GumbelJointResult {
  JointRisk risk;
  // false when rho pushes a cell outside [0,1]; callers needing rejection
  // semantics (the fitter) read this instead of catching exceptions.
  bool valid = true;
};

// The bivariate-logistic joint cells:
//   p11 = F1 F2 + rho q,  p10 = F1 S2 - rho q,
//   p01 = S1 F2 - rho q,  p00 = S1 S2 + rho q,   q = sqrt(F1 S1 F2 S2).
GumbelJointResult gumbel_joint(double f1, double f2, double rho);

// Multivariate logistic model: logistic marginals plus a residual
// correlation, feasible only while every training row keeps all four cells
// positive. rho is additionally box-bounded to [-0.99, 0.99].
struct GumbelMvlModel {
  Eigen::VectorXd beta1;  // [intercept, coefficients]
  Eigen::VectorXd beta2;
  double rho = 0.0;
  // Feasibility certificate at the fitted parameters.
  double rho_envelope_lo = -0.99;
  double rho_envelope_hi = 0.99;
  bool boundary_solution = false;  // rho within 1e-4 of its envelope

  double lp1(const Eigen::VectorXd& x) const {
    return beta1[0] + beta1.tail(beta1.size() - 1).dot(x);
  }
  double lp2(const Eigen::VectorXd& x) const {
    return beta2[0] + beta2.tail(beta2.size() - 1).dot(x);
  }
};

// Log-likelihood of (beta1, beta2, rho) stacked as one vector; -inf outside
// the per-row feasible region so line searches back off. Used by the fitter
// and by gradient-check tests. barrier_mu > 0 adds mu * sum log(cells) over
// all four cells per row (interior-point relaxation, feasibility then only
// requires positivity); fit_mvl itself runs the plain mu = 0 ascent.
OptimProblem mvl_problem(const Eigen::MatrixXd& X, const Eigen::VectorXi& y1,
                         const Eigen::VectorXi& y2, double barrier_mu = 0.0);

// Maximizes the joint log-likelihood from the univariate MLEs with rho = 0.
// Throws when a category is missing or the optimizer fails.
GumbelMvlModel fit_mvl(const Eigen::MatrixXd& X, const Eigen::VectorXi& y1,
                       const Eigen::VectorXi& y2);

// Out-of-sample covariates can leave the training feasible region. Since the
// cells are the Frechet parametrization through p11 at the model's own
// marginals, an invalid point is repaired by capping p11 inside its Frechet
// interval (marginals preserved, dependence saturated); the event is
// reported through *clamped when given.
JointRisk predict_mvl(const GumbelMvlModel& m, const Eigen::VectorXd& x,
                      bool* clamped = nullptr);

}  // namespace mvrisk
