#pragma once

#include <cmath>
#include <utility>

namespace mvrisk {

// The four joint probabilities of two binary outcomes (a = Y1, b = Y2 in the
// subscript p_ab). Components live on the probability simplex.
struct JointRisk {
  double p11 = 0.0;
  double p10 = 0.0;
  double p01 = 0.0;
  double p00 = 0.0;

  double marginal1() const { return p11 + p10; }
  double marginal2() const { return p11 + p01; }
  double sum() const { return p11 + p10 + p01 + p00; }

  bool valid(double tol = 1e-9) const {
    auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
    return in_unit(p11) && in_unit(p10) && in_unit(p01) && in_unit(p00) &&
           std::abs(sum() - 1.0) <= tol;
  }
};

inline std::pair<double, double> joint_to_marginals(const JointRisk& j) {
  return {j.marginal1(), j.marginal2()};
}

}  // namespace mvrisk
