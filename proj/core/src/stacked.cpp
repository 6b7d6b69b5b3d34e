#include "mvrisk/models/stacked.hpp"

#include <stdexcept>

#include "mvrisk/lasso.hpp"
#include "mvrisk/special.hpp"

namespace mvrisk {

double StackedModel::stage2_lp(int outcome, const Eigen::VectorXd& x) const {
  const StackedStage2& s = (outcome == 1) ? stage2_outcome1 : stage2_outcome2;
  const double f1 = stage1_outcome1.linear_predictor(x);
  const double f2 = stage1_outcome2.linear_predictor(x);
  double lp = s.intercept + s.weight_f1 * f1 + s.weight_f2 * f2;
  if (s.direct.size()) lp += s.direct.dot(x);
  return lp;
}

namespace {

StackedStage2 fit_stage2(const Eigen::MatrixXd& Z, const Eigen::VectorXi& y,
                         const StackedOptions& opts, RngStream rng, double* lambda_out,
                         Eigen::Index p_direct) {
  double lambda = opts.fixed_lambda;
  if (opts.cv_lambda) {
    const double lam_max = lasso_lambda_max(Z, y);
    const auto grid = lambda_grid(std::max(lam_max, 1e-12), opts.grid_size, opts.grid_ratio);
    lambda = cv_select_lambda(Z, y, opts.folds, grid, rng);
  }
  const LassoFit fit = lasso_logistic(Z, y, {}, lambda);
  if (!fit.converged) throw std::runtime_error("fit_stacked: stage-2 lasso did not converge");
  StackedStage2 s;
  s.intercept = fit.beta[0];
  s.weight_f1 = fit.beta[1];
  s.weight_f2 = fit.beta[2];
  if (p_direct > 0) s.direct = fit.beta.tail(p_direct);
  *lambda_out = lambda;
  return s;
}

}  // namespace

StackedModel fit_stacked(const Eigen::MatrixXd& X, const Eigen::VectorXi& y1,
                         const Eigen::VectorXi& y2, RngStream rng, const StackedOptions& opts) {
  StackedModel m;
  m.stage1_outcome1 = fit_univariate(X, y1);
  m.stage1_outcome2 = fit_univariate(X, y2);

  const Eigen::Index n = X.rows();
  const Eigen::Index p = opts.include_direct_effects ? X.cols() : 0;
  Eigen::MatrixXd Z(n, 2 + p);
  for (Eigen::Index i = 0; i < n; ++i) {
    Z(i, 0) = m.stage1_outcome1.linear_predictor(X.row(i));
    Z(i, 1) = m.stage1_outcome2.linear_predictor(X.row(i));
  }
  if (p > 0) Z.rightCols(p) = X;

  m.stage2_outcome1 = fit_stage2(Z, y1, opts, rng.child("cv1"), &m.lambda1, p);
  m.stage2_outcome2 = fit_stage2(Z, y2, opts, rng.child("cv2"), &m.lambda2, p);
  return m;
}

JointRisk predict_stacked_joint(const StackedModel& m, const Eigen::VectorXd& x) {
  if (x.size() != m.stage1_outcome1.coefficients.size()) {
    throw std::invalid_argument("predict_stacked_joint: covariate dimension mismatch");
  }
  const double p1 = expit(m.stage2_lp(1, x));
  const double p2 = expit(m.stage2_lp(2, x));
  JointRisk j;
  j.p11 = p1 * p2;
  j.p10 = p1 * (1.0 - p2);
  j.p01 = (1.0 - p1) * p2;
  j.p00 = (1.0 - p1) * (1.0 - p2);
  return j;
}

}  // namespace mvrisk
