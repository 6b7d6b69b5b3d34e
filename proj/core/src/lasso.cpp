#include "mvrisk/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mvrisk/special.hpp"

namespace mvrisk {

namespace {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

struct PenaltyMask {
  // flags aligned with the internal design [1, X]; intercept never penalized
  std::vector<double> pen;
};

PenaltyMask make_mask(int p, const std::vector<int>& unpenalized_cols) {
  PenaltyMask m;
  m.pen.assign(p + 1, 1.0);
  m.pen[0] = 0.0;
  for (int j : unpenalized_cols) {
    if (j < 0 || j >= p) throw std::invalid_argument("lasso: unpenalized column out of range");
    m.pen[j + 1] = 0.0;
  }
  return m;
}

LassoFit lasso_core(const Eigen::MatrixXd& design, const Eigen::VectorXd& yd,
                    const PenaltyMask& mask, double lambda, const LassoOptions& opts,
                    const Eigen::VectorXd* warm) {
  const Eigen::Index n = design.rows();
  const Eigen::Index d = design.cols();
  const double inv_n = 1.0 / static_cast<double>(n);

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
  if (warm && warm->size() == d) {
    beta = *warm;
  } else {
    const double ybar = yd.mean();
    beta[0] = std::log(std::max(ybar, 1e-12) / std::max(1.0 - ybar, 1e-12));
  }

  LassoFit fit;
  Eigen::VectorXd eta = design * beta;
  Eigen::VectorXd w(n), z(n);
  for (int outer = 0; outer < opts.max_outer; ++outer) {
    ++fit.iterations;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double pi = expit(eta[i]);
      const double wi = std::max(pi * (1.0 - pi), 1e-5);
      w[i] = wi;
      z[i] = eta[i] + (yd[i] - pi) / wi;
    }
    Eigen::VectorXd resid = z - eta;
    Eigen::VectorXd denom(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      denom[j] = inv_n * design.col(j).cwiseAbs2().dot(w);
    }

    const Eigen::VectorXd beta_outer = beta;
    for (int sweep = 0; sweep < opts.max_inner; ++sweep) {
      double max_delta = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) {
        const double old = beta[j];
        const double num =
            inv_n * design.col(j).dot(w.cwiseProduct(resid)) + denom[j] * old;
        double updated;
        if (mask.pen[j] > 0.0) {
          updated = soft_threshold(num, lambda * mask.pen[j]) / denom[j];
        } else {
          updated = num / denom[j];
        }
        if (updated != old) {
          resid -= design.col(j) * (updated - old);
          beta[j] = updated;
          max_delta = std::max(max_delta, std::abs(updated - old));
        }
      }
      if (max_delta < opts.tol) break;
    }
    eta = design * beta;
    if ((beta - beta_outer).cwiseAbs().maxCoeff() < opts.tol * (1.0 + beta.cwiseAbs().maxCoeff())) {
      fit.converged = true;
      break;
    }
  }

  // KKT slack under the exact (not quadratic) likelihood gradient.
  Eigen::VectorXd prob(n);
  for (Eigen::Index i = 0; i < n; ++i) prob[i] = expit(eta[i]);
  Eigen::VectorXd g = inv_n * (design.transpose() * (yd - prob));
  double viol = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (mask.pen[j] == 0.0) {
      viol = std::max(viol, std::abs(g[j]));
    } else if (beta[j] != 0.0) {
      viol = std::max(viol, std::abs(g[j] - lambda * mask.pen[j] * (beta[j] > 0 ? 1.0 : -1.0)));
    } else {
      viol = std::max(viol, std::max(0.0, std::abs(g[j]) - lambda * mask.pen[j]));
    }
  }
  fit.kkt_violation = viol;
  fit.beta = beta;
  return fit;
}

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd d(X.rows(), X.cols() + 1);
  d.col(0).setOnes();
  d.rightCols(X.cols()) = X;
  return d;
}

void check_binary(const Eigen::VectorXi& y) {
  const int ones = static_cast<int>((y.array() == 1).count());
  const int zeros = static_cast<int>((y.array() == 0).count());
  if (ones + zeros != y.size()) throw std::invalid_argument("lasso: outcome must be 0/1");
  if (ones == 0 || zeros == 0) throw std::invalid_argument("lasso: outcome has a single class");
}

}  // namespace

LassoFit lasso_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                        const std::vector<int>& unpenalized_cols, double lambda,
                        const LassoOptions& opts) {
  if (lambda < 0.0) throw std::invalid_argument("lasso_logistic: lambda must be >= 0");
  if (X.rows() != y.size()) throw std::invalid_argument("lasso_logistic: row mismatch");
  check_binary(y);
  const PenaltyMask mask = make_mask(static_cast<int>(X.cols()), unpenalized_cols);
  return lasso_core(with_intercept(X), y.cast<double>(), mask, lambda, opts, nullptr);
}

double lasso_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                        const std::vector<int>& unpenalized_cols) {
  check_binary(y);
  const PenaltyMask mask = make_mask(static_cast<int>(X.cols()), unpenalized_cols);
  const Eigen::VectorXd yd = y.cast<double>();
  const Eigen::VectorXd centered = yd.array() - yd.mean();
  double lam = 0.0;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    if (mask.pen[j + 1] > 0.0) {
      lam = std::max(lam, std::abs(X.col(j).dot(centered)) / static_cast<double>(X.rows()));
    }
  }
  return lam;
}

std::vector<double> lambda_grid(double lambda_max, int size, double ratio) {
  if (size < 1 || lambda_max <= 0.0 || ratio <= 0.0 || ratio >= 1.0) {
    throw std::invalid_argument("lambda_grid: bad arguments");
  }
  std::vector<double> grid(size);
  for (int k = 0; k < size; ++k) {
    grid[k] = (size == 1) ? lambda_max
                          : lambda_max * std::pow(ratio, static_cast<double>(k) / (size - 1));
  }
  return grid;
}

double cv_select_lambda(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, int folds,
                        const std::vector<double>& grid, RngStream rng, CvDiagnostics* diag) {
  if (folds < 2) throw std::invalid_argument("cv_select_lambda: folds must be >= 2");
  if (grid.empty()) throw std::invalid_argument("cv_select_lambda: empty grid");
  for (size_t k = 1; k < grid.size(); ++k) {
    if (grid[k] > grid[k - 1]) {
      throw std::invalid_argument("cv_select_lambda: grid must be sorted descending");
    }
  }
  check_binary(y);
  const Eigen::Index n = X.rows();

  // Stratified fold assignment: shuffle each class, deal round-robin.
  std::vector<int> fold_of(n, -1);
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (y[i] == cls) idx.push_back(i);
    }
    for (size_t i = idx.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(rng.next_u64() % i);
      std::swap(idx[i - 1], idx[j]);
    }
    for (size_t k = 0; k < idx.size(); ++k) fold_of[idx[k]] = static_cast<int>(k % folds);
  }

  const PenaltyMask mask = make_mask(static_cast<int>(X.cols()), {});
  std::vector<double> total_dev(grid.size(), 0.0);
  Eigen::Index used_rows = 0;
  int skipped = 0;
  std::vector<std::string> warnings;

  for (int f = 0; f < folds; ++f) {
    std::vector<Eigen::Index> train, held;
    for (Eigen::Index i = 0; i < n; ++i) {
      (fold_of[i] == f ? held : train).push_back(i);
    }
    Eigen::MatrixXd xt(train.size(), X.cols());
    Eigen::VectorXd yt(train.size());
    for (size_t i = 0; i < train.size(); ++i) {
      xt.row(i) = X.row(train[i]);
      yt[i] = y[train[i]];
    }
    const double mean_y = yt.mean();
    if (held.empty() || mean_y <= 0.0 || mean_y >= 1.0) {
      ++skipped;
      warnings.push_back("cv fold " + std::to_string(f) + " skipped (degenerate fold)");
      continue;
    }
    used_rows += static_cast<Eigen::Index>(held.size());

    const Eigen::MatrixXd dt = with_intercept(xt);
    Eigen::VectorXd warm;
    LassoOptions opts;
    opts.tol = 1e-8;  // path fits can be a little looser than the final refit
    for (size_t g = 0; g < grid.size(); ++g) {
      LassoFit fit = lasso_core(dt, yt, mask, grid[g], opts, warm.size() ? &warm : nullptr);
      warm = fit.beta;
      for (Eigen::Index i : held) {
        double lp = fit.beta[0];
        for (Eigen::Index j = 0; j < X.cols(); ++j) lp += fit.beta[j + 1] * X(i, j);
        const double p = std::clamp(expit(lp), 1e-10, 1.0 - 1e-10);
        total_dev[g] -= 2.0 * (y[i] * std::log(p) + (1 - y[i]) * std::log1p(-p));
      }
    }
  }
  if (used_rows == 0) throw std::runtime_error("cv_select_lambda: every fold degenerate");

  size_t best = 0;
  for (size_t g = 0; g < grid.size(); ++g) {
    total_dev[g] /= static_cast<double>(used_rows);
    if (total_dev[g] < total_dev[best]) best = g;
  }
  if (diag) {
    diag->mean_deviance = total_dev;
    diag->skipped_folds = skipped;
    diag->warnings = std::move(warnings);
  }
  return grid[best];
}

}  // namespace mvrisk
