#include "mvrisk/models/gumbel.hpp"
#include <functional>

#include <cmath>
#include <stdexcept>

#include "mvrisk/models/multinomial.hpp"
#include "mvrisk/models/univariate.hpp"
#include "mvrisk/special.hpp"

namespace mvrisk {

namespace {

constexpr double kProbFloor = 1e-12;
constexpr double kRhoBox = 0.99;

struct Cells {
  double p[4];  // order: p11, p10, p01, p00
  double q;
};

Cells cells_at(double f1, double f2, double rho) {
  const double s1 = 1.0 - f1;
  const double s2 = 1.0 - f2;
  Cells c;
  c.q = std::sqrt(f1 * s1 * f2 * s2);
  c.p[0] = f1 * f2 + rho * c.q;
  c.p[1] = f1 * s2 - rho * c.q;
  c.p[2] = s1 * f2 - rho * c.q;
  c.p[3] = s1 * s2 + rho * c.q;
  return c;
}

// Index into Cells::p for the observed pair.
int cell_index(int y1, int y2) {
  if (y1 == 1) return y2 == 1 ? 0 : 1;
  return y2 == 1 ? 2 : 3;
}

}  // namespace

GumbelJointResult gumbel_joint(double f1, double f2, double rho) {
  if (!(f1 > 0.0 && f1 < 1.0 && f2 > 0.0 && f2 < 1.0)) {
    throw std::domain_error("gumbel_joint: marginals must be strictly inside (0,1)");
  }
  const Cells c = cells_at(f1, f2, rho);
  GumbelJointResult r;
  r.risk = {c.p[0], c.p[1], c.p[2], c.p[3]};
  for (double p : c.p) {
    if (p < 0.0 || p > 1.0) r.valid = false;
  }
  return r;
}

namespace {

// Shared builder for the plain likelihood (mu = 0, cell floor applies) and
// its log-barrier relaxations (mu > 0, cells only need positivity). The
// barrier weight folds into the same per-cell derivative accumulation:
// d/dtheta [ l + mu * sum log p_k ] sums (1[cell]+mu)/p_k * dp_k/dtheta.
OptimProblem mvl_problem_impl(const Eigen::MatrixXd& X, const Eigen::VectorXi& y1,
                              const Eigen::VectorXi& y2, double mu) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols() + 1;  // per-outcome block size
  if (y1.size() != n || y2.size() != n) throw std::invalid_argument("mvl_problem: row mismatch");
  const double floor = mu > 0.0 ? 0.0 : kProbFloor;

  Eigen::MatrixXd design(n, d);
  design.col(0).setOnes();
  design.rightCols(X.cols()) = X;
  std::vector<int> cell(n);
  for (Eigen::Index i = 0; i < n; ++i) cell[i] = cell_index(y1[i], y2[i]);

  auto unpack = [d](const Eigen::VectorXd& theta) {
    return std::tuple<Eigen::VectorXd, Eigen::VectorXd, double>(
        theta.head(d), theta.segment(d, d), theta[2 * d]);
  };

  OptimProblem p;
  p.dimension = static_cast<int>(2 * d + 1);
  p.feasible = [design, unpack, floor](const Eigen::VectorXd& theta) {
    auto [b1, b2, rho] = unpack(theta);
    if (std::abs(rho) > kRhoBox) return false;
    const Eigen::VectorXd lp1 = design * b1;
    const Eigen::VectorXd lp2 = design * b2;
    for (Eigen::Index i = 0; i < design.rows(); ++i) {
      const Cells c = cells_at(expit(lp1[i]), expit(lp2[i]), rho);
      for (double pi : c.p) {
        if (pi <= floor) return false;
      }
    }
    return true;
  };
  p.objective = [design, cell, unpack, mu, floor](const Eigen::VectorXd& theta) {
    auto [b1, b2, rho] = unpack(theta);
    if (std::abs(rho) > kRhoBox) return -std::numeric_limits<double>::infinity();
    const Eigen::VectorXd lp1 = design * b1;
    const Eigen::VectorXd lp2 = design * b2;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < design.rows(); ++i) {
      const Cells c = cells_at(expit(lp1[i]), expit(lp2[i]), rho);
      for (double pi : c.p) {
        if (pi <= floor) return -std::numeric_limits<double>::infinity();
      }
      ll += std::log(c.p[cell[static_cast<size_t>(i)]]);
      if (mu > 0.0) {
        for (double pi : c.p) ll += mu * std::log(pi);
      }
    }
    return ll;
  };
  p.gradient = [design, cell, unpack, d, mu](const Eigen::VectorXd& theta) {
    auto [b1, b2, rho] = unpack(theta);
    const Eigen::VectorXd lp1 = design * b1;
    const Eigen::VectorXd lp2 = design * b2;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * d + 1);
    for (Eigen::Index i = 0; i < design.rows(); ++i) {
      const double f1 = expit(lp1[i]);
      const double f2 = expit(lp2[i]);
      const Cells c = cells_at(f1, f2, rho);
      const int obs = cell[static_cast<size_t>(i)];
      const double df1 = f1 * (1.0 - f1);
      const double df2 = f2 * (1.0 - f2);
      const double dq1 = 0.5 * c.q * (1.0 - 2.0 * f1);  // dq/dlp1
      const double dq2 = 0.5 * c.q * (1.0 - 2.0 * f2);
      double w1 = 0.0, w2 = 0.0, wr = 0.0;
      for (int k = 0; k < 4; ++k) {
        const double w = ((k == obs ? 1.0 : 0.0) + mu) / c.p[k];
        if (w == 0.0) continue;
        // dp_k/dlp1, dp_k/dlp2, dp_k/drho per cell
        double d1, d2, dr;
        switch (k) {
          case 0:  // p11
            d1 = df1 * f2 + rho * dq1;
            d2 = df2 * f1 + rho * dq2;
            dr = c.q;
            break;
          case 1:  // p10
            d1 = df1 * (1.0 - f2) - rho * dq1;
            d2 = -df2 * f1 - rho * dq2;
            dr = -c.q;
            break;
          case 2:  // p01
            d1 = -df1 * f2 - rho * dq1;
            d2 = df2 * (1.0 - f1) - rho * dq2;
            dr = -c.q;
            break;
          default:  // p00
            d1 = -df1 * (1.0 - f2) + rho * dq1;
            d2 = -df2 * (1.0 - f1) + rho * dq2;
            dr = c.q;
            break;
        }
        w1 += w * d1;
        w2 += w * d2;
        wr += w * dr;
      }
      g.head(d) += w1 * design.row(i).transpose();
      g.segment(d, d) += w2 * design.row(i).transpose();
      g[2 * d] += wr;
    }
    return g;
  };
  return p;
}

}  // namespace

OptimProblem mvl_problem(const Eigen::MatrixXd& X, const Eigen::VectorXi& y1,
                         const Eigen::VectorXi& y2, double barrier_mu) {
  return mvl_problem_impl(X, y1, y2, barrier_mu);
}

namespace {

// Feasible rho interval at fixed coefficients: every row must keep all four
// cells above the floor. margin > 0 shrinks the interval so the endpoints
// themselves stay strictly feasible.
std::pair<double, double> rho_envelope(const Eigen::MatrixXd& design, const Eigen::VectorXd& b1,
                                       const Eigen::VectorXd& b2, double margin) {
  const Eigen::VectorXd lp1 = design * b1;
  const Eigen::VectorXd lp2 = design * b2;
  double lo = -kRhoBox, hi = kRhoBox;
  for (Eigen::Index i = 0; i < design.rows(); ++i) {
    const double f1 = expit(lp1[i]);
    const double f2 = expit(lp2[i]);
    const double q = std::sqrt(f1 * (1.0 - f1) * f2 * (1.0 - f2));
    if (q <= 0.0) continue;
    hi = std::min(hi, (std::min(f1 * (1.0 - f2), (1.0 - f1) * f2) - margin) / q);
    lo = std::max(lo, (margin - std::min(f1 * f2, (1.0 - f1) * (1.0 - f2))) / q);
  }
  return {lo, hi};
}

// Golden-section maximizer; the profile likelihood is concave in rho.
double golden_max(const std::function<double(double)>& f, double a, double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && (b - a) > 1e-11; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc > fd ? c : d;
}

}  // namespace

GumbelMvlModel fit_mvl(const Eigen::MatrixXd& X, const Eigen::VectorXi& y1,
                       const Eigen::VectorXi& y2) {
  const Eigen::Index n = X.rows();
  int counts[4] = {0, 0, 0, 0};
  for (Eigen::Index i = 0; i < n; ++i) ++counts[pair_category(y1[i], y2[i])];
  static const char* kNames[4] = {"(y1=0,y2=0)", "(y1=1,y2=1)", "(y1=1,y2=0)", "(y1=0,y2=1)"};
  for (int c = 0; c < 4; ++c) {
    if (counts[c] == 0) {
      throw std::invalid_argument(std::string("fit_mvl: no rows with combination ") + kNames[c]);
    }
  }

  const UnivariateLogisticModel m1 = fit_univariate(X, y1);
  const UnivariateLogisticModel m2 = fit_univariate(X, y2);
  const Eigen::Index d = X.cols() + 1;
  Eigen::VectorXd theta(2 * d + 1);
  theta[0] = m1.intercept;
  theta.segment(1, X.cols()) = m1.coefficients;
  theta[d] = m2.intercept;
  theta.segment(d + 1, X.cols()) = m2.coefficients;
  theta[2 * d] = 0.0;

  Eigen::MatrixXd design(n, d);
  design.col(0).setOnes();
  design.rightCols(X.cols()) = X;

  // Local ascent from the univariate initialization. The likelihood surface
  // has a second, higher optimum on the feasibility boundary where large rho
  // is bought by twisting the marginal coefficients (reachable with a
  // log-barrier homotopy over mvl_problem(..., mu)), but that solution
  // distorts the marginal risks; the ascent from the natural start keeps
  // them, which is the behaviour the rest of the pipeline is calibrated
  // against.
  const OptimProblem p = mvl_problem(X, y1, y2);
  OptimResult r = newton_maximize(p, theta);
  theta = r.parameters;
  bool converged = r.converged;

  if (!converged) {
    // Polish at the constrained optimum: the MLE often sits on the
    // feasibility envelope, where the plain Newton line search has nowhere
    // to go. Alternate a 1-D profile search for rho inside the envelope with
    // Newton updates of the coefficients at fixed rho, until the objective
    // stalls.
    double best = p.objective(theta);
    for (int round = 0; round < 30; ++round) {
      const auto [lo, hi] =
          rho_envelope(design, theta.head(d), theta.segment(d, d), 1e-11);
      if (!(lo < hi)) break;
      Eigen::VectorXd probe = theta;
      const double rho_star = golden_max(
          [&](double t) {
            probe[2 * d] = t;
            return p.objective(probe);
          },
          lo, hi);
      theta[2 * d] = rho_star;

      OptimProblem sub;
      sub.dimension = static_cast<int>(2 * d);
      sub.objective = [&p, rho_star, d](const Eigen::VectorXd& b) {
        Eigen::VectorXd full(2 * d + 1);
        full << b, rho_star;
        return p.objective(full);
      };
      sub.gradient = [&p, rho_star, d](const Eigen::VectorXd& b) {
        Eigen::VectorXd full(2 * d + 1);
        full << b, rho_star;
        return p.gradient(full).head(2 * d).eval();
      };
      sub.feasible = [&p, rho_star, d](const Eigen::VectorXd& b) {
        Eigen::VectorXd full(2 * d + 1);
        full << b, rho_star;
        return !p.feasible || p.feasible(full);
      };
      const OptimResult rb = newton_maximize(sub, theta.head(2 * d), 1e-8, 50);
      theta.head(2 * d) = rb.parameters;
      const double now = p.objective(theta);
      if (now <= best + 1e-9 * (1.0 + std::abs(best))) {
        converged = true;  // refinement stalled at the constrained optimum
        break;
      }
      best = now;
    }
  }

  GumbelMvlModel m;
  m.beta1 = theta.head(d);
  m.beta2 = theta.segment(d, d);
  m.rho = theta[2 * d];

  const auto [lo, hi] = rho_envelope(design, m.beta1, m.beta2, 0.0);
  m.rho_envelope_lo = lo;
  m.rho_envelope_hi = hi;
  m.boundary_solution = (m.rho >= hi - 1e-4) || (m.rho <= lo + 1e-4);
  if (!converged && !m.boundary_solution) {
    throw std::runtime_error("fit_mvl: did not converge (" + r.diagnostic + ")");
  }
  return m;
}

JointRisk predict_mvl(const GumbelMvlModel& m, const Eigen::VectorXd& x, bool* clamped) {
  if (x.size() + 1 != m.beta1.size()) {
    throw std::invalid_argument("predict_mvl: covariate dimension mismatch");
  }
  const double f1 = expit(m.lp1(x));
  const double f2 = expit(m.lp2(x));
  const Cells c = cells_at(f1, f2, m.rho);
  bool needs_clamp = false;
  for (double pk : c.p) {
    if (pk < 0.0 || pk > 1.0) needs_clamp = true;
  }
  if (clamped) *clamped = needs_clamp;
  if (!needs_clamp) return JointRisk{c.p[0], c.p[1], c.p[2], c.p[3]};

  // The cells are the Frechet parametrization through p11 at fixed marginals
  // (p10 = F1 - p11 and so on), so an out-of-range covariate point is
  // repaired by capping p11 inside its Frechet interval. That keeps the
  // model's own marginal risks intact and only saturates the dependence.
  double lo = std::max(0.0, f1 + f2 - 1.0);
  double hi = std::min(f1, f2);
  if (hi - lo > 2.0 * kProbFloor) {
    lo += kProbFloor;
    hi -= kProbFloor;
  }
  const double p11 = std::clamp(c.p[0], lo, hi);
  return JointRisk{p11, f1 - p11, f2 - p11, 1.0 - f1 - f2 + p11};
}

}  // namespace mvrisk
