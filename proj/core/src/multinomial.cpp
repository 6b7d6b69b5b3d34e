#include "mvrisk/models/multinomial.hpp"

#include <cmath>
#include <stdexcept>

namespace mvrisk {

namespace {

// probs[0..3] for one row given the three non-reference linear predictors,
// stabilized against overflow by subtracting the max.
void softmax4(const double lp[3], double out[4]) {
  double m = 0.0;
  for (int k = 0; k < 3; ++k) m = std::max(m, lp[k]);
  const double e0 = std::exp(-m);
  double denom = e0;
  double e[3];
  for (int k = 0; k < 3; ++k) {
    e[k] = std::exp(lp[k] - m);
    denom += e[k];
  }
  out[0] = e0 / denom;
  for (int k = 0; k < 3; ++k) out[k + 1] = e[k] / denom;
}

}  // namespace

OptimProblem multinomial_problem(const MultinomialFitSpec& spec) {
  const Eigen::Index n = spec.category.size();
  std::array<Eigen::Index, 3> dims{};
  Eigen::Index total = 0;
  for (int k = 0; k < 3; ++k) {
    if (spec.design[k].rows() != n) {
      throw std::invalid_argument("multinomial_problem: design row mismatch");
    }
    if (spec.offset[k].size() != 0 && spec.offset[k].size() != n) {
      throw std::invalid_argument("multinomial_problem: offset length mismatch");
    }
    dims[k] = spec.design[k].cols();
    total += dims[k];
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (spec.category[i] < 0 || spec.category[i] > 3) {
      throw std::invalid_argument("multinomial_problem: category codes must be 0..3");
    }
  }

  auto split = [dims](const Eigen::VectorXd& theta, int k) {
    Eigen::Index start = 0;
    for (int j = 0; j < k; ++j) start += dims[j];
    return theta.segment(start, dims[k]);
  };
  auto linear_predictors = [spec, split, n](const Eigen::VectorXd& theta) {
    Eigen::MatrixXd lp(n, 3);
    for (int k = 0; k < 3; ++k) {
      lp.col(k) = spec.design[k] * split(theta, k);
      if (spec.offset[k].size()) lp.col(k) += spec.offset[k];
    }
    return lp;
  };

  OptimProblem p;
  p.dimension = static_cast<int>(total);
  p.divergence_bound = 30.0;
  p.objective = [spec, linear_predictors, n](const Eigen::VectorXd& theta) {
    const Eigen::MatrixXd lp = linear_predictors(theta);
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double m = 0.0;
      for (int k = 0; k < 3; ++k) m = std::max(m, lp(i, k));
      double lse = std::exp(-m);
      for (int k = 0; k < 3; ++k) lse += std::exp(lp(i, k) - m);
      const int c = spec.category[i];
      ll += (c > 0 ? lp(i, c - 1) : 0.0) - (m + std::log(lse));
    }
    return ll;
  };
  p.gradient = [spec, split, linear_predictors, dims, total, n](const Eigen::VectorXd& theta) {
    const Eigen::MatrixXd lp = linear_predictors(theta);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(total);
    Eigen::MatrixXd resid(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
      double row[3] = {lp(i, 0), lp(i, 1), lp(i, 2)};
      double pr[4];
      softmax4(row, pr);
      const int c = spec.category[i];
      for (int k = 0; k < 3; ++k) {
        resid(i, k) = (c == k + 1 ? 1.0 : 0.0) - pr[k + 1];
      }
    }
    Eigen::Index start = 0;
    for (int k = 0; k < 3; ++k) {
      g.segment(start, dims[k]) = spec.design[k].transpose() * resid.col(k);
      start += dims[k];
    }
    return g;
  };
  p.hessian = [spec, linear_predictors, dims, total, n](const Eigen::VectorXd& theta) {
    const Eigen::MatrixXd lp = linear_predictors(theta);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(total, total);
    std::array<Eigen::Index, 3> start{};
    for (int k = 1; k < 3; ++k) start[k] = start[k - 1] + dims[k - 1];
    for (Eigen::Index i = 0; i < n; ++i) {
      double row[3] = {lp(i, 0), lp(i, 1), lp(i, 2)};
      double pr[4];
      softmax4(row, pr);
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          const double w = pr[k + 1] * ((k == l ? 1.0 : 0.0) - pr[l + 1]);
          h.block(start[k], start[l], dims[k], dims[l]).noalias() -=
              w * (spec.design[k].row(i).transpose() * spec.design[l].row(i));
        }
      }
    }
    return h;
  };
  return p;
}

MultinomialFitResult fit_multinomial_general(const MultinomialFitSpec& spec, double tol) {
  const OptimProblem p = multinomial_problem(spec);
  const OptimResult r = newton_maximize(p, Eigen::VectorXd::Zero(p.dimension), tol);
  if (r.diverged) {
    throw std::runtime_error("fit_multinomial: " + r.diagnostic);
  }
  if (!r.converged) {
    throw std::runtime_error("fit_multinomial: did not converge (" + r.diagnostic + ")");
  }
  MultinomialFitResult out;
  out.opt = r;
  Eigen::Index startk = 0;
  for (int k = 0; k < 3; ++k) {
    out.coef[k] = r.parameters.segment(startk, spec.design[k].cols());
    startk += spec.design[k].cols();
  }
  return out;
}

MultinomialModel fit_multinomial(const Eigen::MatrixXd& X, const Eigen::VectorXi& y1,
                                 const Eigen::VectorXi& y2) {
  const Eigen::Index n = X.rows();
  if (y1.size() != n || y2.size() != n) {
    throw std::invalid_argument("fit_multinomial: row mismatch");
  }
  Eigen::VectorXi cat(n);
  int counts[4] = {0, 0, 0, 0};
  for (Eigen::Index i = 0; i < n; ++i) {
    cat[i] = pair_category(y1[i], y2[i]);
    ++counts[cat[i]];
  }
  static const char* kNames[4] = {"(y1=0,y2=0)", "(y1=1,y2=1)", "(y1=1,y2=0)", "(y1=0,y2=1)"};
  for (int c = 0; c < 4; ++c) {
    if (counts[c] == 0) {
      throw std::invalid_argument(std::string("fit_multinomial: no rows with combination ") +
                                  kNames[c]);
    }
  }
  Eigen::MatrixXd d(n, X.cols() + 1);
  d.col(0).setOnes();
  d.rightCols(X.cols()) = X;
  MultinomialFitSpec spec;
  spec.category = cat;
  for (int k = 0; k < 3; ++k) spec.design[k] = d;

  const MultinomialFitResult fit = fit_multinomial_general(spec);
  MultinomialModel m;
  for (int k = 0; k < 3; ++k) {
    m.intercepts[k] = fit.coef[k][0];
    m.coefficients[k] = fit.coef[k].tail(X.cols());
  }
  return m;
}

JointRisk predict_multinomial(const MultinomialModel& m, const Eigen::VectorXd& x) {
  double lp[3];
  for (int k = 0; k < 3; ++k) {
    if (x.size() != m.coefficients[k].size()) {
      throw std::invalid_argument("predict_multinomial: covariate dimension mismatch");
    }
    lp[k] = m.intercepts[k] + m.coefficients[k].dot(x);
  }
  double pr[4];
  softmax4(lp, pr);
  JointRisk j;
  j.p00 = pr[0];
  j.p11 = pr[1];
  j.p10 = pr[2];
  j.p01 = pr[3];
  return j;
}

}  // namespace mvrisk
