#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mvrisk/rng.hpp"

namespace mvrisk {

struct LassoOptions {
  double tol = 1e-10;   // coefficient-change stopping rule
  int max_outer = 250;  // IRLS reweightings
  int max_inner = 500;  // coordinate sweeps per reweighting
};

struct LassoFit {
  Eigen::VectorXd beta;  // [intercept, coefficients for X columns]
  bool converged = false;
  int iterations = 0;
  double kkt_violation = 0.0;  // max subgradient slack on the 1/n scale
};

// L1-penalized logistic regression, minimizing
//   -(1/n) loglik(beta) + lambda * sum_{j penalized} |beta_j|
// by IRLS with coordinate descent on the weighted quadratic approximation.
// The intercept is prepended internally and never penalized; indices in
// unpenalized_cols (0-based into X) are likewise exempt. Throws on invalid
// input; non-convergence is reported through the converged flag.
LassoFit lasso_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                        const std::vector<int>& unpenalized_cols, double lambda,
                        const LassoOptions& opts = {});

// Smallest lambda shrinking every penalized coefficient to zero:
// max_j |X_j'(y - ybar)| / n over penalized columns.
double lasso_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                        const std::vector<int>& unpenalized_cols = {});

// Descending log-spaced grid from lambda_max down to lambda_max*ratio.
std::vector<double> lambda_grid(double lambda_max, int size = 50, double ratio = 1e-4);

struct CvDiagnostics {
  std::vector<double> mean_deviance;  // aligned with the grid
  int skipped_folds = 0;
  std::vector<std::string> warnings;
};

// Picks the grid value minimizing mean out-of-fold deviance. Folds are
// stratified by y and fully determined by the stream, so the same seed gives
// the same lambda. Grid must be non-empty and sorted descending.
double cv_select_lambda(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, int folds,
                        const std::vector<double>& grid, RngStream rng,
                        CvDiagnostics* diag = nullptr);

}  // namespace mvrisk
