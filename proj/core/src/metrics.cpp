#include "mvrisk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mvrisk/logistic.hpp"
#include "mvrisk/models/multinomial.hpp"
#include "mvrisk/special.hpp"

namespace mvrisk {

namespace {

constexpr double kClampLo = 1e-10;

Eigen::VectorXd clamped_logits(const Eigen::VectorXd& pred) {
  Eigen::VectorXd l(pred.size());
  for (Eigen::Index i = 0; i < pred.size(); ++i) {
    l[i] = logit(std::clamp(pred[i], kClampLo, 1.0 - kClampLo));
  }
  return l;
}

void require_both_classes(const Eigen::VectorXi& y, const char* who) {
  const int ones = static_cast<int>((y.array() == 1).count());
  if (ones == 0 || ones == y.size()) {
    throw std::invalid_argument(std::string(who) + ": outcome has a single class");
  }
}

}  // namespace

double marginal_citl(const Eigen::VectorXd& pred, const Eigen::VectorXi& y) {
  if (pred.size() != y.size()) throw std::invalid_argument("marginal_citl: length mismatch");
  require_both_classes(y, "marginal_citl");
  const Eigen::VectorXd l = clamped_logits(pred);
  const double target = y.cast<double>().sum();

  // Newton on the score equation sum expit(alpha + l) = sum y; the left side
  // is strictly increasing in alpha.
  double alpha = 0.0;
  for (int it = 0; it < 200; ++it) {
    double value = 0.0, deriv = 0.0;
    for (Eigen::Index i = 0; i < l.size(); ++i) {
      const double p = expit(alpha + l[i]);
      value += p;
      deriv += p * (1.0 - p);
    }
    const double diff = value - target;
    if (std::abs(diff) < 1e-10) break;
    double step = diff / std::max(deriv, 1e-300);
    step = std::clamp(step, -10.0, 10.0);
    alpha -= step;
    if (std::abs(step) < 1e-14) break;
  }
  return alpha;
}

double marginal_slope(const Eigen::VectorXd& pred, const Eigen::VectorXi& y) {
  if (pred.size() != y.size()) throw std::invalid_argument("marginal_slope: length mismatch");
  require_both_classes(y, "marginal_slope");
  const Eigen::VectorXd l = clamped_logits(pred);
  const double mean = l.mean();
  const double var = (l.array() - mean).square().sum() / l.size();
  if (var < 1e-20) {
    throw std::invalid_argument("marginal_slope: predictor is constant, slope undefined");
  }
  Eigen::MatrixXd design(l.size(), 2);
  design.col(0).setOnes();
  design.col(1) = l;
  return fit_logistic(design, y).beta[1];
}

JointCalibration joint_calibration(const std::vector<JointRisk>& preds,
                                   const Eigen::VectorXi& y1, const Eigen::VectorXi& y2) {
  const Eigen::Index n = static_cast<Eigen::Index>(preds.size());
  if (y1.size() != n || y2.size() != n) {
    throw std::invalid_argument("joint_calibration: length mismatch");
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
      throw std::invalid_argument(std::string("joint_calibration: no rows with combination ") +
                                  kNames[c]);
    }
  }

  // Floor and renormalize, then take the three log-ratios against p00.
  Eigen::MatrixXd logratio(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    double p[4] = {preds[i].p11, preds[i].p10, preds[i].p01, preds[i].p00};
    double total = 0.0;
    for (double& v : p) {
      v = std::max(v, kClampLo);
      total += v;
    }
    for (double& v : p) v /= total;
    logratio(i, 0) = std::log(p[0] / p[3]);
    logratio(i, 1) = std::log(p[1] / p[3]);
    logratio(i, 2) = std::log(p[2] / p[3]);
  }

  JointCalibration out;
  {
    // Intercept-only fit with each category's own log-ratio as a unit-slope
    // offset (cross slopes zero).
    MultinomialFitSpec spec;
    spec.category = cat;
    for (int k = 0; k < 3; ++k) {
      spec.design[k] = Eigen::MatrixXd::Ones(n, 1);
      spec.offset[k] = logratio.col(k);
    }
    const MultinomialFitResult fit = fit_multinomial_general(spec);
    for (int k = 0; k < 3; ++k) out.citl[k] = fit.coef[k][0];
  }
  {
    // Free intercepts and diagonal slopes, cross slopes still zero.
    MultinomialFitSpec spec;
    spec.category = cat;
    for (int k = 0; k < 3; ++k) {
      Eigen::MatrixXd d(n, 2);
      d.col(0).setOnes();
      d.col(1) = logratio.col(k);
      spec.design[k] = d;
    }
    const MultinomialFitResult fit = fit_multinomial_general(spec);
    for (int k = 0; k < 3; ++k) out.slope[k] = fit.coef[k][1];
  }
  return out;
}

double auc(const Eigen::VectorXd& scores, const Eigen::VectorXi& labels) {
  const Eigen::Index n = scores.size();
  if (labels.size() != n) throw std::invalid_argument("auc: length mismatch");
  require_both_classes(labels, "auc");

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return scores[a] < scores[b]; });

  // Midranks over tie groups; rank sum of the cases gives the U statistic.
  double case_rank_sum = 0.0;
  Eigen::Index i = 0;
  long n_cases = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (Eigen::Index k = i; k <= j; ++k) {
      if (labels[order[k]] == 1) {
        case_rank_sum += midrank;
        ++n_cases;
      }
    }
    i = j + 1;
  }
  const double m = static_cast<double>(n_cases);
  const double u = case_rank_sum - m * (m + 1.0) / 2.0;
  return u / (m * (static_cast<double>(n) - m));
}

double mse(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth) {
  if (pred.size() != truth.size()) throw std::invalid_argument("mse: length mismatch");
  return (pred - truth).squaredNorm() / static_cast<double>(pred.size());
}

const std::array<std::string, 5>& target_names() {
  static const std::array<std::string, 5> names = {"P11", "P10", "P01", "PY1", "PY2"};
  return names;
}

MetricsReport evaluate_model(const std::vector<JointRisk>& joint_preds,
                             const Eigen::VectorXi& y1, const Eigen::VectorXi& y2,
                             const SyntheticTruth* truth) {
  const Eigen::Index n = static_cast<Eigen::Index>(joint_preds.size());
  if (y1.size() != n || y2.size() != n) {
    throw std::invalid_argument("evaluate_model: length mismatch");
  }

  Eigen::MatrixXd score(n, 5);
  Eigen::MatrixXi label(n, 5);
  for (Eigen::Index i = 0; i < n; ++i) {
    const JointRisk& j = joint_preds[static_cast<size_t>(i)];
    score(i, 0) = j.p11;
    score(i, 1) = j.p10;
    score(i, 2) = j.p01;
    score(i, 3) = j.marginal1();
    score(i, 4) = j.marginal2();
    label(i, 0) = (y1[i] == 1 && y2[i] == 1) ? 1 : 0;
    label(i, 1) = (y1[i] == 1 && y2[i] == 0) ? 1 : 0;
    label(i, 2) = (y1[i] == 0 && y2[i] == 1) ? 1 : 0;
    label(i, 3) = y1[i];
    label(i, 4) = y2[i];
  }

  MetricsReport report;
  const JointCalibration jc = joint_calibration(joint_preds, y1, y2);
  for (int t = 0; t < 3; ++t) {
    report.by_target[t].citl = jc.citl[t];
    report.by_target[t].slope = jc.slope[t];
  }
  for (int t = 3; t < 5; ++t) {
    report.by_target[t].citl = marginal_citl(score.col(t), label.col(t));
    report.by_target[t].slope = marginal_slope(score.col(t), label.col(t));
  }
  for (int t = 0; t < 5; ++t) {
    report.by_target[t].auc = auc(score.col(t), label.col(t));
  }
  if (truth) {
    Eigen::MatrixXd truth_cols(n, 5);
    for (Eigen::Index i = 0; i < n; ++i) {
      const JointRisk& j = truth->joint[static_cast<size_t>(i)];
      truth_cols(i, 0) = j.p11;
      truth_cols(i, 1) = j.p10;
      truth_cols(i, 2) = j.p01;
      truth_cols(i, 3) = truth->marginal1[i];
      truth_cols(i, 4) = truth->marginal2[i];
    }
    for (int t = 0; t < 5; ++t) {
      report.by_target[t].mse = mse(score.col(t), truth_cols.col(t));
    }
  }
  return report;
}

}  // namespace mvrisk
