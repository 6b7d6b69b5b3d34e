#pragma once

namespace mvrisk {

// Inverse logistic link, 1/(1+exp(-x)). Saturates monotonically; stays
// strictly inside (0,1) for |x| up to ~745.
double expit(double x);

// log(p/(1-p)). Throws std::domain_error unless p is strictly inside (0,1).
double logit(double p);

double std_normal_pdf(double x);

// Phi(x). Absolute error below 1e-15 (erfc based).
double std_normal_cdf(double x);

// 1 - Phi(x), accurate in the upper tail where 1 - cdf cancels.
double std_normal_ccdf(double x);

// Phi^{-1}(p), Wichura's AS241 rational approximations (~1e-15 relative).
// Throws std::domain_error unless p is strictly inside (0,1).
double std_normal_quantile(double p);

// P(Z1 <= a, Z2 <= b) for standard bivariate normal with correlation rho.
// Gauss-Legendre quadrature of the Drezner/Genz single-integral reduction;
// absolute error well below 1e-7. a, b may be +-infinity; throws
// std::domain_error when |rho| > 1.
double bivariate_normal_cdf(double a, double b, double rho);

}  // namespace mvrisk
