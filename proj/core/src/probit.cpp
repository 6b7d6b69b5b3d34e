#include "mvrisk/models/probit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mvrisk/rng.hpp"
#include "mvrisk/special.hpp"
#include "mvrisk/truncnorm.hpp"

namespace mvrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPriorVariance = 10.0;

// log density kernel of the residuals as a function of rho (uniform prior).
double rho_log_target(double rho, double s11, double s22, double s12, double n) {
  const double om = 1.0 - rho * rho;
  return -0.5 * n * std::log(om) - (s11 - 2.0 * rho * s12 + s22) / (2.0 * om);
}

double reflect_into_unit(double r) {
  // Reflecting at +-1 keeps the random walk symmetric on (-1,1).
  while (r > 1.0 || r < -1.0) {
    if (r > 1.0) r = 2.0 - r;
    if (r < -1.0) r = -2.0 - r;
  }
  return r;
}

}  // namespace

ProbitPosterior fit_probit(const Eigen::MatrixXd& X, const Eigen::VectorXi& y1,
                           const Eigen::VectorXi& y2, const GibbsConfig& cfg) {
  const Eigen::Index n = X.rows();
  if (y1.size() != n || y2.size() != n) throw std::invalid_argument("fit_probit: row mismatch");
  for (const auto* y : {&y1, &y2}) {
    const int ones = static_cast<int>((y->array() == 1).count());
    if (ones == 0 || ones == n) {
      throw std::invalid_argument("fit_probit: an outcome has a single class");
    }
  }
  if (cfg.burn_in < 0 || cfg.burn_in >= cfg.total_samples) {
    throw std::invalid_argument("fit_probit: burn_in must be < total_samples");
  }
  if (!(cfg.rho_proposal_scale > 0.0)) {
    throw std::invalid_argument("fit_probit: rho proposal scale must be positive");
  }

  const Eigen::Index d = X.cols() + 1;
  Eigen::MatrixXd design(n, d);
  design.col(0).setOnes();
  design.rightCols(X.cols()) = X;
  const Eigen::MatrixXd xtx = design.transpose() * design;

  RngStream rng = RngStream(cfg.seed).child("gibbs-chain");

  Eigen::VectorXd beta1 = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd beta2 = Eigen::VectorXd::Zero(d);
  double rho = cfg.positive_rho_prior ? 0.5 : 0.0;
  Eigen::VectorXd z1(n), z2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    z1[i] = y1[i] ? 0.5 : -0.5;
    z2[i] = y2[i] ? 0.5 : -0.5;
  }

  const int kept_total = cfg.total_samples - cfg.burn_in;
  ProbitPosterior post;
  post.config = cfg;
  post.burn_in = cfg.burn_in;
  post.draws.resize(kept_total, 2 * d + 1);

  Eigen::VectorXd lp1 = design * beta1;
  Eigen::VectorXd lp2 = design * beta2;
  long accepted = 0;
  int consecutive_rejects = 0;

  for (int sweep = 0; sweep < cfg.total_samples; ++sweep) {
    const double om = 1.0 - rho * rho;
    const double cond_sd = std::sqrt(om);

    // (a) latents, row-wise Z1 then Z2, from truncated conditionals.
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m1 = lp1[i] + rho * (z2[i] - lp2[i]);
      z1[i] = y1[i] ? sample_truncated_normal(m1, cond_sd, 0.0, kInf, rng)
                    : sample_truncated_normal(m1, cond_sd, -kInf, 0.0, rng);
      const double m2 = lp2[i] + rho * (z1[i] - lp1[i]);
      z2[i] = y2[i] ? sample_truncated_normal(m2, cond_sd, 0.0, kInf, rng)
                    : sample_truncated_normal(m2, cond_sd, -kInf, 0.0, rng);
    }

    // (b) coefficient blocks from their Gaussian conditionals.
    Eigen::MatrixXd prec = xtx / om;
    prec.diagonal().array() += 1.0 / kPriorVariance;
    Eigen::LLT<Eigen::MatrixXd> llt(prec);
    {
      const Eigen::VectorXd resp = z1 - rho * (z2 - lp2);
      const Eigen::VectorXd mean = llt.solve(design.transpose() * resp / om);
      Eigen::VectorXd eta(d);
      for (Eigen::Index j = 0; j < d; ++j) eta[j] = rng.normal();
      beta1 = mean + llt.matrixU().solve(eta);
      lp1 = design * beta1;
    }
    {
      const Eigen::VectorXd resp = z2 - rho * (z1 - lp1);
      const Eigen::VectorXd mean = llt.solve(design.transpose() * resp / om);
      Eigen::VectorXd eta(d);
      for (Eigen::Index j = 0; j < d; ++j) eta[j] = rng.normal();
      beta2 = mean + llt.matrixU().solve(eta);
      lp2 = design * beta2;
    }

    // (c) rho by reflected random-walk Metropolis.
    {
      const Eigen::VectorXd e1 = z1 - lp1;
      const Eigen::VectorXd e2 = z2 - lp2;
      const double s11 = e1.squaredNorm();
      const double s22 = e2.squaredNorm();
      const double s12 = e1.dot(e2);
      double proposal = reflect_into_unit(rho + cfg.rho_proposal_scale * rng.normal());
      const double lo = cfg.positive_rho_prior ? 0.0 : -1.0;
      bool in_support = proposal > lo && proposal < 1.0;
      const double log_alpha =
          in_support ? rho_log_target(proposal, s11, s22, s12, static_cast<double>(n)) -
                           rho_log_target(rho, s11, s22, s12, static_cast<double>(n))
                     : -kInf;
      if (std::log(rng.uniform()) < log_alpha) {
        rho = proposal;
        ++accepted;
        consecutive_rejects = 0;
      } else {
        ++consecutive_rejects;
        if (consecutive_rejects >= 500) {
          throw std::runtime_error(
              "fit_probit: rho chain stuck (500 consecutive rejections); "
              "reduce rho_proposal_scale");
        }
      }
    }

    if (sweep >= cfg.burn_in) {
      const int k = sweep - cfg.burn_in;
      post.draws.row(k).head(d) = beta1;
      post.draws.row(k).segment(d, d) = beta2;
      post.draws(k, 2 * d) = rho;
    }
  }

  post.retained = kept_total;
  post.rho_acceptance_rate = static_cast<double>(accepted) / cfg.total_samples;
  const Eigen::VectorXd mean = post.draws.colwise().mean();
  Eigen::VectorXd sd(2 * d + 1);
  for (Eigen::Index j = 0; j < 2 * d + 1; ++j) {
    const double mu = mean[j];
    sd[j] = std::sqrt((post.draws.col(j).array() - mu).square().sum() /
                      std::max(1, kept_total - 1));
  }
  post.mean_beta1 = mean.head(d);
  post.mean_beta2 = mean.segment(d, d);
  post.mean_rho = mean[2 * d];
  post.sd_beta1 = sd.head(d);
  post.sd_beta2 = sd.segment(d, d);
  post.sd_rho = sd[2 * d];
  return post;
}

JointRisk probit_joint(double lp1, double lp2, double rho) {
  JointRisk j;
  j.p11 = bivariate_normal_cdf(lp1, lp2, rho);
  j.p10 = bivariate_normal_cdf(lp1, -lp2, -rho);
  j.p01 = bivariate_normal_cdf(-lp1, lp2, -rho);
  j.p00 = std::max(0.0, 1.0 - j.p11 - j.p10 - j.p01);
  return j;
}

JointRisk predict_probit(const ProbitPosterior& post, const Eigen::VectorXd& x) {
  if (x.size() + 1 != post.mean_beta1.size()) {
    throw std::invalid_argument("predict_probit: covariate dimension mismatch");
  }
  return probit_joint(post.lp1(x), post.lp2(x), post.mean_rho);
}

JointRisk predict_probit_draw_averaged(const ProbitPosterior& post, const Eigen::VectorXd& x) {
  if (x.size() + 1 != post.mean_beta1.size()) {
    throw std::invalid_argument("predict_probit: covariate dimension mismatch");
  }
  if (post.draws.rows() == 0) {
    throw std::runtime_error(
        "predict_probit_draw_averaged: posterior draws not available "
        "(summaries only, e.g. a model reloaded from file)");
  }
  const Eigen::Index d = post.mean_beta1.size();
  JointRisk acc{0.0, 0.0, 0.0, 0.0};
  const int m = static_cast<int>(post.draws.rows());
  for (int k = 0; k < m; ++k) {
    const double lp1 = post.draws(k, 0) + post.draws.row(k).segment(1, d - 1).dot(x);
    const double lp2 = post.draws(k, d) + post.draws.row(k).segment(d + 1, d - 1).dot(x);
    const JointRisk j = probit_joint(lp1, lp2, post.draws(k, 2 * d));
    acc.p11 += j.p11;
    acc.p10 += j.p10;
    acc.p01 += j.p01;
    acc.p00 += j.p00;
  }
  acc.p11 /= m;
  acc.p10 /= m;
  acc.p01 /= m;
  acc.p00 /= m;
  return acc;
}

}  // namespace mvrisk
