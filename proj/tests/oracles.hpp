#pragma once

// Independent test oracles: brute-force searches, Monte Carlo estimates and
// finite differences used to pin expected values. Nothing here may call the
// implementation path under test.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "mvrisk/optim.hpp"
#include "mvrisk/rng.hpp"
#include "mvrisk/special.hpp"

namespace oracles {

// Central finite difference of a scalar function.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x, xm = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = 1e-6 * (1.0 + std::abs(x[j]));
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    g[j] = (f(xp) - f(xm)) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return g;
}

// Max relative deviation between the problem's analytic gradient and central
// finite differences of its objective at x.
inline double gradient_fd_error(const mvrisk::OptimProblem& p, const Eigen::VectorXd& x) {
  const Eigen::VectorXd g = p.gradient(x);
  const Eigen::VectorXd fd = fd_gradient(p.objective, x);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    worst = std::max(worst, std::abs(g[j] - fd[j]) / std::max(1.0, std::abs(g[j])));
  }
  return worst;
}

// Monte Carlo estimate of P(Z1 <= a, Z2 <= b) under correlation rho, using
// conditioning on Z1 plus antithetic pairs. Touches only the univariate
// normal routines, never the quadrature under test.
inline double mc_bivariate_cdf(double a, double b, double rho, long pairs, mvrisk::RngStream& rng) {
  const double denom = std::sqrt(1.0 - rho * rho);
  double acc = 0.0;
  for (long k = 0; k < pairs; ++k) {
    const double z = rng.normal();
    double g = 0.0;
    if (z <= a) g += mvrisk::std_normal_cdf((b - rho * z) / denom);
    if (-z <= a) g += mvrisk::std_normal_cdf((b + rho * z) / denom);
    acc += 0.5 * g;
  }
  return acc / static_cast<double>(pairs);
}

// Exhaustive grid maximizer of a 2-parameter logistic log-likelihood
// (intercept, slope) over [lo, hi] with the given step.
inline Eigen::Vector2d grid_logistic_mle(const std::vector<double>& x, const std::vector<int>& y,
                                         double lo, double hi, double step) {
  double best = -1e300;
  Eigen::Vector2d arg(0.0, 0.0);
  const long steps = std::lround((hi - lo) / step);
  for (long i = 0; i <= steps; ++i) {
    const double b0 = lo + i * step;
    for (long j = 0; j <= steps; ++j) {
      const double b1 = lo + j * step;
      double ll = 0.0;
      for (size_t r = 0; r < x.size(); ++r) {
        const double lp = b0 + b1 * x[r];
        ll += y[r] * lp - (lp > 0 ? lp + std::log1p(std::exp(-lp)) : std::log1p(std::exp(lp)));
      }
      if (ll > best) {
        best = ll;
        arg = {b0, b1};
      }
    }
  }
  return arg;
}

// Exhaustive grid maximizer of an intercept-only multinomial likelihood with
// reference category 0; counts = per-category totals (c0, c1, c2, c3).
inline Eigen::Vector3d grid_multinomial_mle(const std::array<long, 4>& counts, double lo,
                                            double hi, double step) {
  double best = -1e300;
  Eigen::Vector3d arg(0.0, 0.0, 0.0);
  const long steps = std::lround((hi - lo) / step);
  for (long i = 0; i <= steps; ++i) {
    const double a1 = lo + i * step;
    const double e1 = std::exp(a1);
    for (long j = 0; j <= steps; ++j) {
      const double a2 = lo + j * step;
      const double e2 = std::exp(a2);
      for (long k = 0; k <= steps; ++k) {
        const double a3 = lo + k * step;
        const double n = static_cast<double>(counts[0] + counts[1] + counts[2] + counts[3]);
        const double ll = counts[1] * a1 + counts[2] * a2 + counts[3] * a3 -
                          n * std::log(1.0 + e1 + e2 + std::exp(a3));
        if (ll > best) {
          best = ll;
          arg = {a1, a2, a3};
        }
      }
    }
  }
  return arg;
}

}  // namespace oracles
