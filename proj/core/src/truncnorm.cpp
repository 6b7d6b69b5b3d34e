#include "mvrisk/truncnorm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mvrisk/special.hpp"

namespace mvrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailStart = 4.0;

// Standard normal truncated to [a, b] with a >= kTailStart.
double tail_draw(double a, double b, RngStream& rng) {
  const double lam = (a + std::sqrt(a * a + 4.0)) / 2.0;
  if (b < kInf && lam * (b - a) < 1.0) {
    // Narrow slice: uniform proposal, density ratio against the left edge.
    for (;;) {
      const double x = a + rng.uniform() * (b - a);
      if (std::log(rng.uniform()) <= -(x * x - a * a) / 2.0) return x;
    }
  }
  // Translated exponential proposal with the optimal rate.
  for (;;) {
    const double x = a - std::log(rng.uniform()) / lam;
    if (x >= b) continue;
    const double diff = x - lam;
    if (std::log(rng.uniform()) <= -diff * diff / 2.0) return x;
  }
}

double clamp_unit(double u) {
  return std::clamp(u, std::numeric_limits<double>::min(), 1.0 - 1e-16);
}

double std_truncated(double a, double b, RngStream& rng) {
  if (a == -kInf && b == kInf) return rng.normal();
  if (a >= kTailStart) return tail_draw(a, b, rng);
  if (b <= -kTailStart) return -tail_draw(-b, -a, rng);

  // Central region: invert the CDF between the bounds. A region entirely in
  // the upper half works in ccdf space, where the tail keeps full precision.
  if (a >= 0.0) {
    const double qa = std_normal_ccdf(a);
    const double qb = (b == kInf) ? 0.0 : std_normal_ccdf(b);
    const double q = clamp_unit(qb + rng.uniform() * (qa - qb));
    return -std_normal_quantile(q);
  }
  if (b <= 0.0) {
    const double fa = (a == -kInf) ? 0.0 : std_normal_cdf(a);
    const double u = clamp_unit(fa + rng.uniform() * (std_normal_cdf(b) - fa));
    return std_normal_quantile(u);
  }
  const double fa = (a == -kInf) ? 0.0 : std_normal_cdf(a);
  const double fb = (b == kInf) ? 1.0 : std_normal_cdf(b);
  const double u = clamp_unit(fa + rng.uniform() * (fb - fa));
  return std_normal_quantile(u);
}

}  // namespace

double sample_truncated_normal(double mean, double sd, double lower, double upper,
                               RngStream& rng) {
  if (!(lower < upper)) {
    throw std::invalid_argument("sample_truncated_normal: requires lower < upper");
  }
  if (!(sd > 0.0)) throw std::invalid_argument("sample_truncated_normal: sd must be positive");
  const double a = (lower == -kInf) ? -kInf : (lower - mean) / sd;
  const double b = (upper == kInf) ? kInf : (upper - mean) / sd;
  double z = std_truncated(a, b, rng);
  double x = mean + sd * z;
  // Clamp away rounding spill so the draw stays strictly inside.
  if (x <= lower) x = std::nextafter(lower, kInf);
  if (x >= upper) x = std::nextafter(upper, -kInf);
  return x;
}

}  // namespace mvrisk
