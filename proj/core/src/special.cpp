#include "mvrisk/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mvrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Gauss-Legendre nodes/weights on [-1,1], computed once by Newton iteration
// on the Legendre recurrence (machine-precision, no transcribed tables).
template <int N>
struct GaussLegendre {
  std::array<double, N> x{};
  std::array<double, N> w{};
  GaussLegendre() {
    for (int k = 0; k < N; ++k) {
      double t = std::cos(M_PI * (k + 0.75) / (N + 0.5));
      double p0 = 0.0, p1 = 0.0;
      for (int it = 0; it < 100; ++it) {
        p0 = 1.0;
        p1 = 0.0;
        for (int j = 0; j < N; ++j) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
        }
        double dp = N * (t * p0 - p1) / (t * t - 1.0);
        double dt = p0 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-16) break;
      }
      p0 = 1.0;
      p1 = 0.0;
      for (int j = 0; j < N; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      double dp = N * (t * p0 - p1) / (t * t - 1.0);
      x[k] = t;
      w[k] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

const GaussLegendre<6> kGL6;
const GaussLegendre<12> kGL12;
const GaussLegendre<20> kGL20;

// Genz's BVND: P(X > h, Y > k) for standard bivariate normal, correlation r.
// Drezner-Wesolowsky single integral for |r| <= 0.925, the Genz tail
// reformulation (series + 20-point quadrature) beyond that.
double bvnd(double h, double k, double r) {
  double hk = h * k;
  double bvn = 0.0;
  if (std::abs(r) < 0.925) {
    if (r != 0.0) {
      const double hs = (h * h + k * k) / 2.0;
      const double asr = std::asin(r);
      auto accumulate = [&](const double* xs, const double* ws, int n) {
        for (int i = 0; i < n; ++i) {
          double sn = std::sin(asr * (1.0 + xs[i]) / 2.0);
          bvn += ws[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
        }
      };
      if (std::abs(r) < 0.3) {
        accumulate(kGL6.x.data(), kGL6.w.data(), 6);
      } else if (std::abs(r) < 0.75) {
        accumulate(kGL12.x.data(), kGL12.w.data(), 12);
      } else {
        accumulate(kGL20.x.data(), kGL20.w.data(), 20);
      }
      bvn = bvn * asr / (2.0 * kTwoPi);
    }
    bvn += std_normal_cdf(-h) * std_normal_cdf(-k);
  } else {
    if (r < 0.0) {
      k = -k;
      hk = -hk;
    }
    if (std::abs(r) < 1.0) {
      const double as = (1.0 - r) * (1.0 + r);
      double a = std::sqrt(as);
      const double bs = (h - k) * (h - k);
      const double c = (4.0 - hk) / 8.0;
      const double d = (12.0 - hk) / 16.0;
      double asr = -(bs / as + hk) / 2.0;
      if (asr > -100.0) {
        bvn = a * std::exp(asr) *
              (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
      }
      if (-hk < 100.0) {
        const double b = std::sqrt(bs);
        bvn -= std::exp(-hk / 2.0) * std::sqrt(kTwoPi) * std_normal_cdf(-b / a) * b *
               (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
      }
      a /= 2.0;
      for (int i = 0; i < 20; ++i) {
        const double xs = std::pow(a * (kGL20.x[i] + 1.0), 2);
        const double rs = std::sqrt(1.0 - xs);
        asr = -(bs / xs + hk) / 2.0;
        if (asr > -100.0) {
          bvn += a * kGL20.w[i] * std::exp(asr) *
                 (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs -
                  (1.0 + c * xs * (1.0 + d * xs)));
        }
      }
      bvn = -bvn / kTwoPi;
    }
    if (r > 0.0) {
      bvn += std_normal_cdf(-std::max(h, k));
    } else {
      bvn = -bvn;
      if (k > h) bvn += std_normal_cdf(k) - std_normal_cdf(h);
    }
  }
  return bvn;
}

}  // namespace

double expit(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double logit(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("logit: argument must be strictly inside (0,1)");
  }
  return std::log(p / (1.0 - p));
}

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(kTwoPi);
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double std_normal_ccdf(double x) { return 0.5 * std::erfc(x * M_SQRT1_2); }

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("std_normal_quantile: argument must be strictly inside (0,1)");
  }
  // AS241 PPND16 (Wichura 1988).
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    x = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
            3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
          4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
          2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
          5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
  }
  return (q < 0.0) ? -x : x;
}

double bivariate_normal_cdf(double a, double b, double rho) {
  if (std::isnan(rho) || std::abs(rho) > 1.0) {
    throw std::domain_error("bivariate_normal_cdf: correlation must lie in [-1,1]");
  }
  if (a == -kInf || b == -kInf) return 0.0;
  if (a == kInf && b == kInf) return 1.0;
  if (a == kInf) return std_normal_cdf(b);
  if (b == kInf) return std_normal_cdf(a);
  if (rho == 1.0) return std_normal_cdf(std::min(a, b));
  if (rho == -1.0) return std::max(0.0, std_normal_cdf(a) + std_normal_cdf(b) - 1.0);
  const double p = bvnd(-a, -b, rho);
  return std::min(1.0, std::max(0.0, p));
}

}  // namespace mvrisk
