#include "mvrisk/datagen.hpp"

#include <cmath>
#include <stdexcept>

#include "mvrisk/special.hpp"

namespace mvrisk {

namespace {

// Latent threshold for Y = I(logit(Phi(Z)) <= lp), i.e. Z <= Phi^-1(expit(lp)).
double latent_threshold(double lp) {
  const double p = std::clamp(expit(lp), 1e-300, 1.0 - 1e-16);
  return std_normal_quantile(p);
}

}  // namespace

JointRisk true_joint_risk(double lp1, double lp2, double rho) {
  const double m1 = expit(lp1);
  const double m2 = expit(lp2);
  JointRisk j;
  j.p11 = bivariate_normal_cdf(latent_threshold(lp1), latent_threshold(lp2), rho);
  // Frechet bounds absorb quadrature rounding at extreme rho.
  j.p11 = std::min(j.p11, std::min(m1, m2));
  j.p11 = std::max(j.p11, std::max(0.0, m1 + m2 - 1.0));
  j.p10 = m1 - j.p11;
  j.p01 = m2 - j.p11;
  j.p00 = 1.0 - j.p11 - j.p10 - j.p01;
  return j;
}

Dataset generate_dataset(const GenConfig& config, RngStream rng) {
  if (config.n <= 0) throw std::invalid_argument("generate_dataset: n must be positive");
  if (std::abs(config.rho) > 1.0) {
    throw std::invalid_argument("generate_dataset: rho must lie in [-1,1]");
  }
  const int n = config.n;
  const double rho = config.rho;
  const double rho_c = std::sqrt(std::max(0.0, 1.0 - rho * rho));

  Dataset d;
  d.covariate_names = {"x1", "x2"};
  d.X.resize(n, 2);
  d.y1.resize(n);
  d.y2.resize(n);
  SyntheticTruth truth;
  truth.marginal1.resize(n);
  truth.marginal2.resize(n);
  truth.joint.resize(n);

  for (int i = 0; i < n; ++i) {
    const double x1 = rng.normal();
    const double x2 = rng.normal();
    const double z1 = rng.normal();
    const double z2 = rho * z1 + rho_c * rng.normal();
    const double lp1 = config.beta1[0] + config.beta1[1] * x1 + config.beta1[2] * x2;
    const double lp2 = config.beta2[0] + config.beta2[1] * x1 + config.beta2[2] * x2;
    d.X(i, 0) = x1;
    d.X(i, 1) = x2;
    d.y1[i] = z1 <= latent_threshold(lp1) ? 1 : 0;
    d.y2[i] = z2 <= latent_threshold(lp2) ? 1 : 0;
    const JointRisk jr = true_joint_risk(lp1, lp2, rho);
    truth.joint[i] = jr;
    truth.marginal1[i] = jr.marginal1();
    truth.marginal2[i] = jr.marginal2();
  }
  d.truth = std::move(truth);
  return d;
}

std::vector<Scenario> scenario_grid() {
  const std::vector<double> rhos = {0.0, 0.25, 0.50, 0.75, 0.95};
  std::vector<Scenario> grid;
  for (int sens = 0; sens <= 1; ++sens) {
    for (double rho : rhos) {
      Scenario s;
      s.rho = rho;
      s.sensitivity = sens == 1;
      char tag[48];
      std::snprintf(tag, sizeof(tag), "%s-rho%.2f", sens ? "sens" : "base", rho);
      s.tag = tag;
      GenConfig cfg;
      cfg.rho = rho;
      if (sens) {
        cfg.beta1[0] = -3.0;
        cfg.beta2[0] = -3.5;
      }
      cfg.n = 5000;
      s.development = cfg;
      cfg.n = 10000;
      s.validation = cfg;
      grid.push_back(std::move(s));
    }
  }
  return grid;
}

}  // namespace mvrisk
