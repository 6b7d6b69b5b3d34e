#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "mvrisk/joint_risk.hpp"

namespace mvrisk {

struct GibbsConfig {
  int total_samples = 10000;
  int burn_in = 5000;
  double rho_proposal_scale = 0.05;  // random-walk sd, reflected at +-1
  std::uint64_t seed = 0;
  // The stated prior is Unif(-1,1); a positive-only Unif(0,1) variant is
  // exposed for settings where the correlation is known to be positive.
  bool positive_rho_prior = false;
};

struct ProbitPosterior {
  // Retained draws, one row per kept sweep: [beta1 (P+1), beta2 (P+1), rho].
  Eigen::MatrixXd draws;
  Eigen::VectorXd mean_beta1;
  Eigen::VectorXd mean_beta2;
  double mean_rho = 0.0;
  Eigen::VectorXd sd_beta1;
  Eigen::VectorXd sd_beta2;
  double sd_rho = 0.0;
  // Chain diagnostics.
  double rho_acceptance_rate = 0.0;
  int retained = 0;
  int burn_in = 0;
  GibbsConfig config;

  double lp1(const Eigen::VectorXd& x) const {
    return mean_beta1[0] + mean_beta1.tail(mean_beta1.size() - 1).dot(x);
  }
  double lp2(const Eigen::VectorXd& x) const {
    return mean_beta2[0] + mean_beta2.tail(mean_beta2.size() - 1).dot(x);
  }
};

// Data-augmented Gibbs sampler for the latent-variable model
//   Y_ij = I(Z_ij > 0),  Z_ij = x_i' beta_j + eps_ij,
//   (eps_1, eps_2) ~ N(0, [[1, rho], [rho, 1]]),
// with independent N(0, 10) priors per coefficient and a uniform prior on
// rho. Sweep order: latents row-wise (Z1 then Z2), beta1, beta2, then a
// random-walk Metropolis step for rho. Deterministic given cfg.seed.
// Throws on degenerate configs and on a stuck rho chain (500 consecutive
// rejections).
ProbitPosterior fit_probit(const Eigen::MatrixXd& X, const Eigen::VectorXi& y1,
                           const Eigen::VectorXi& y2, const GibbsConfig& cfg);

// Plug-in prediction at the posterior means:
//   p11 = Phi2(lp1, lp2, rho), p10 = Phi2(lp1, -lp2, -rho),
//   p01 = Phi2(-lp1, lp2, -rho), p00 = the remainder.
JointRisk predict_probit(const ProbitPosterior& post, const Eigen::VectorXd& x);

// Posterior-predictive alternative: the same orthant expressions averaged
// over the retained draws.
JointRisk predict_probit_draw_averaged(const ProbitPosterior& post, const Eigen::VectorXd& x);

JointRisk probit_joint(double lp1, double lp2, double rho);

}  // namespace mvrisk
