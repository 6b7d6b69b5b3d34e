// Acceptance suite: one pass/fail line per criterion. Heavier than the unit
// tests; run directly or via `ctest -R acceptance`. Exit code is the number
// of failed criteria.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mvrisk/datagen.hpp"
#include "mvrisk/logistic.hpp"
#include "mvrisk/metrics.hpp"
#include "mvrisk/simulation.hpp"
#include "mvrisk/special.hpp"

using namespace mvrisk;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
  int id;
  std::string title;
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
  void note(const std::string& what) { notes.push_back(what); }
};

int finish(Criterion& c) {
  std::printf("criterion %d [%s] %s\n", c.id, c.pass ? "PASS" : "FAIL", c.title.c_str());
  for (const std::string& n : c.notes) std::printf("    - %s\n", n.c_str());
  std::fflush(stdout);
  return c.pass ? 0 : 1;
}

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// aggregation helpers over the simulation results

struct Agg {
  // (scenario rho, method, target, metric) -> iteration values
  std::map<std::tuple<double, std::string, std::string, std::string>, std::vector<double>> g;

  void add(const ResultsTable& t) {
    for (const ResultRow& r : t.rows) {
      if (r.status != "ok") continue;
      g[{r.rho, r.method, r.target, r.metric}].push_back(r.value);
    }
  }
  const std::vector<double>& values(double rho, const std::string& m, const std::string& t,
                                    const std::string& metric) const {
    static const std::vector<double> empty;
    auto it = g.find({rho, m, t, metric});
    return it == g.end() ? empty : it->second;
  }
  double mean(double rho, const std::string& m, const std::string& t,
              const std::string& metric) const {
    const auto& v = values(rho, m, t, metric);
    if (v.empty()) return std::nan("");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  }
  double se(double rho, const std::string& m, const std::string& t,
            const std::string& metric) const {
    const auto& v = values(rho, m, t, metric);
    if (v.size() < 2) return std::nan("");
    const double mu = mean(rho, m, t, metric);
    double ss = 0.0;
    for (double x : v) ss += (x - mu) * (x - mu);
    return std::sqrt(ss / (static_cast<double>(v.size()) - 1.0) /
                     static_cast<double>(v.size()));
  }
};

// Monte Carlo bivariate CDF oracle: conditioning on Z1 plus antithetic pairs;
// touches only the univariate normal routines.
double mc_bvn(double a, double b, double rho, long pairs, RngStream& rng) {
  const double denom = std::sqrt(1.0 - rho * rho);
  double acc = 0.0;
  for (long k = 0; k < pairs; ++k) {
    const double z = rng.normal();
    double g = 0.0;
    if (z <= a) g += std_normal_cdf((b - rho * z) / denom);
    if (-z <= a) g += std_normal_cdf((b + rho * z) / denom);
    acc += 0.5 * g;
  }
  return acc / static_cast<double>(pairs);
}

double fd_gradient_error(const OptimProblem& p, const Eigen::VectorXd& x) {
  const Eigen::VectorXd g = p.gradient(x);
  Eigen::VectorXd xp = x, xm = x;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = 1e-6 * (1.0 + std::abs(x[j]));
    xp[j] += h;
    xm[j] -= h;
    const double fd = (p.objective(xp) - p.objective(xm)) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
    worst = std::max(worst, std::abs(g[j] - fd) / std::max(1.0, std::abs(g[j])));
  }
  return worst;
}

}  // namespace

// ---------------------------------------------------------------- criteria

static int criterion1(std::vector<Table1Row>* table_out) {
  Criterion c{1, "table of pooled outcome correlation and joint rates (100 x 5000 per rho)"};
  const auto t0 = Clock::now();
  const auto rows = compute_table1(7, 100, 5000);
  const double elapsed = seconds_since(t0);
  // reference cells the mechanism is expected to reproduce
  const double ref[5][4] = {{0.000, 0.065, 0.222, 0.162},
                            {0.110, 0.087, 0.201, 0.142},
                            {0.233, 0.110, 0.178, 0.118},
                            {0.371, 0.136, 0.152, 0.092},
                            {0.503, 0.161, 0.126, 0.067}};
  double worst_corr = 0.0, worst_cell = 0.0;
  for (int i = 0; i < 5; ++i) {
    worst_corr = std::max(worst_corr, std::abs(rows[i].corr - ref[i][0]));
    worst_cell = std::max(worst_cell, std::abs(rows[i].p11 - ref[i][1]));
    worst_cell = std::max(worst_cell, std::abs(rows[i].p10 - ref[i][2]));
    worst_cell = std::max(worst_cell, std::abs(rows[i].p01 - ref[i][3]));
  }
  c.require(worst_corr <= 0.01, fmt("corr deviation %.4f exceeds 0.01", worst_corr));
  c.require(worst_cell <= 0.005, fmt("cell deviation %.4f exceeds 0.005", worst_cell));
  c.require(elapsed < 120.0, fmt("runtime %.1fs exceeds 120s", elapsed));
  c.note(fmt("max |corr| err %.4f, max cell err %.4f, %.1fs", worst_corr, worst_cell, elapsed));
  *table_out = rows;
  return finish(c);
}

static int criterion2() {
  Criterion c{2, "pooled marginal prevalences (base 0.29/0.23, sensitivity 0.06/0.05)"};
  for (int sens = 0; sens <= 1; ++sens) {
    double n1 = 0.0, n2 = 0.0, total = 0.0;
    const RngStream root = RngStream(13).child(sens ? "prev-sens" : "prev-base");
    for (const Scenario& s : scenario_grid()) {
      if (s.sensitivity != (sens == 1)) continue;
      const RngStream sc = root.child(s.tag);
      for (int it = 0; it < 100; ++it) {
        const Dataset d =
            generate_dataset(s.development, sc.child(static_cast<std::uint64_t>(it)));
        n1 += d.y1.cast<double>().sum();
        n2 += d.y2.cast<double>().sum();
        total += static_cast<double>(d.n());
      }
    }
    const double r1 = n1 / total, r2 = n2 / total;
    if (sens == 0) {
      c.require(std::abs(r1 - 0.29) <= 0.01, fmt("base rate1 %.4f vs 0.29", r1));
      c.require(std::abs(r2 - 0.23) <= 0.01, fmt("base rate2 %.4f vs 0.23", r2));
      c.note(fmt("base rates %.4f / %.4f", r1, r2));
    } else {
      c.require(std::abs(r1 - 0.06) <= 0.005, fmt("sensitivity rate1 %.4f vs 0.06", r1));
      c.require(std::abs(r2 - 0.05) <= 0.005, fmt("sensitivity rate2 %.4f vs 0.05", r2));
      c.note(fmt("sensitivity rates %.4f / %.4f", r1, r2));
    }
  }
  return finish(c);
}

static int criterion7() {
  Criterion c{7, "oracle suites: quadrature vs Monte Carlo, gradients, self-recovery"};

  {  // bivariate normal CDF vs Monte Carlo at 50 random points
    RngStream point_rng(1701);
    RngStream mc_rng(1702);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const double a = 4.0 * (point_rng.uniform() - 0.5);
      const double b = 4.0 * (point_rng.uniform() - 0.5);
      const double rho = 1.9 * (point_rng.uniform() - 0.5);
      const double mc = mc_bvn(a, b, rho, 10'000'000, mc_rng);
      worst = std::max(worst, std::abs(bivariate_normal_cdf(a, b, rho) - mc));
    }
    c.require(worst <= 1e-3, fmt("BVN vs MC worst deviation %.2e exceeds 1e-3", worst));
    c.note(fmt("BVN vs 1e7-draw MC at 50 points: worst %.2e", worst));
  }
  {  // closed-form orthant identities
    double worst = 0.0;
    for (double rho = -0.99; rho <= 0.99; rho += 0.01) {
      const double expected = 0.25 + std::asin(rho) / (2.0 * M_PI);
      worst = std::max(worst, std::abs(bivariate_normal_cdf(0.0, 0.0, rho) - expected));
    }
    RngStream r(1703);
    for (int k = 0; k < 500; ++k) {
      const double a = 6.0 * (r.uniform() - 0.5);
      const double b = 6.0 * (r.uniform() - 0.5);
      worst = std::max(worst, std::abs(bivariate_normal_cdf(a, b, 0.0) -
                                       std_normal_cdf(a) * std_normal_cdf(b)));
      worst = std::max(
          worst, std::abs(bivariate_normal_cdf(a, std::numeric_limits<double>::infinity(),
                                               0.7) -
                          std_normal_cdf(a)));
    }
    c.require(worst <= 1e-9, fmt("orthant identity deviation %.2e exceeds 1e-9", worst));
    c.note(fmt("closed-form identities: worst %.2e", worst));
  }
  {  // gradient checks at 20 random feasible points per likelihood
    RngStream r(1704);
    GenConfig cfg;
    cfg.n = 120;
    cfg.rho = 0.4;
    const Dataset d = generate_dataset(cfg, RngStream(1705).child("grad"));
    Eigen::MatrixXd design(d.n(), 3);
    design.col(0).setOnes();
    design.rightCols(2) = d.X;
    const OptimProblem logistic = logistic_problem(design, d.y1);
    MultinomialFitSpec spec;
    spec.category.resize(d.n());
    for (Eigen::Index i = 0; i < d.n(); ++i) {
      spec.category[i] = pair_category(d.y1[i], d.y2[i]);
    }
    for (int k = 0; k < 3; ++k) spec.design[k] = design;
    const OptimProblem multinomial = multinomial_problem(spec);
    const OptimProblem mvl = mvl_problem(d.X, d.y1, d.y2);

    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      Eigen::VectorXd x3(3), x9(9), x7(7);
      for (int j = 0; j < 3; ++j) x3[j] = 1.2 * (r.uniform() - 0.5);
      for (int j = 0; j < 9; ++j) x9[j] = 1.2 * (r.uniform() - 0.5);
      for (int j = 0; j < 6; ++j) x7[j] = 0.8 * (r.uniform() - 0.5);
      x7[6] = 0.3 * (r.uniform() - 0.5);
      if (!mvl.feasible(x7)) {
        --k;
        continue;
      }
      worst = std::max(worst, fd_gradient_error(logistic, x3));
      worst = std::max(worst, fd_gradient_error(multinomial, x9));
      worst = std::max(worst, fd_gradient_error(mvl, x7));
    }
    c.require(worst <= 1e-5, fmt("gradient vs FD relative error %.2e exceeds 1e-5", worst));
    c.note(fmt("likelihood gradients vs central differences: worst %.2e", worst));
  }
  {  // PCC self-recovery at n = 50000
    RngStream r(1706);
    const int n = 50000;
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXi y1(n), y2(n);
    const double gamma = 0.7;
    for (int i = 0; i < n; ++i) {
      X(i, 0) = r.normal();
      X(i, 1) = r.normal();
      const double p1 = expit(-1.0 + std::log(2.0) * X(i, 0));
      y1[i] = r.uniform() < p1 ? 1 : 0;
      const double p2 = expit(-1.5 + std::log(3.0) * X(i, 1) + gamma * y1[i]);
      y2[i] = r.uniform() < p2 ? 1 : 0;
    }
    const PccModel m = fit_pcc(X, y1, y2);
    double worst = std::abs(m.perm1_marginal.intercept - (-1.0));
    worst = std::max(worst, std::abs(m.perm1_marginal.coefficients[0] - std::log(2.0)));
    worst = std::max(worst, std::abs(m.perm1_marginal.coefficients[1]));
    worst = std::max(worst, std::abs(m.perm1_conditional.intercept - (-1.5)));
    worst = std::max(worst, std::abs(m.perm1_conditional.coefficients[0]));
    worst = std::max(worst, std::abs(m.perm1_conditional.coefficients[1] - std::log(3.0)));
    worst = std::max(worst, std::abs(m.perm1_conditional.outcome_coef - gamma));
    c.require(worst <= 0.05, fmt("pcc recovery worst coefficient error %.4f", worst));
    c.note(fmt("pcc recovery: worst coefficient error %.4f", worst));
  }
  {  // multinomial self-recovery at n = 50000
    RngStream r(1707);
    const int n = 50000;
    const double b[3][3] = {{-1.2, 0.5, -0.3}, {-0.8, -0.4, 0.2}, {-1.0, 0.3, 0.6}};
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXi y1(n), y2(n);
    for (int i = 0; i < n; ++i) {
      X(i, 0) = r.normal();
      X(i, 1) = r.normal();
      double e[3], denom = 1.0;
      for (int k = 0; k < 3; ++k) {
        e[k] = std::exp(b[k][0] + b[k][1] * X(i, 0) + b[k][2] * X(i, 1));
        denom += e[k];
      }
      const double u = r.uniform() * denom;
      const int cat = u < 1.0 ? 0 : u < 1.0 + e[0] ? 1 : u < 1.0 + e[0] + e[1] ? 2 : 3;
      y1[i] = (cat == 1 || cat == 2) ? 1 : 0;
      y2[i] = (cat == 1 || cat == 3) ? 1 : 0;
    }
    const MultinomialModel m = fit_multinomial(X, y1, y2);
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      worst = std::max(worst, std::abs(m.intercepts[k] - b[k][0]));
      worst = std::max(worst, std::abs(m.coefficients[k][0] - b[k][1]));
      worst = std::max(worst, std::abs(m.coefficients[k][1] - b[k][2]));
    }
    c.require(worst <= 0.05, fmt("multinomial recovery worst error %.4f", worst));
    c.note(fmt("multinomial recovery: worst coefficient error %.4f", worst));
  }
  {  // Gumbel self-recovery at n = 50000 (covariates bounded to keep rho=0.1
     // valid at every row)
    RngStream r(1708);
    const int n = 50000;
    const double rho_true = 0.1;
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXi y1(n), y2(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < 2; ++j) {
        double v = r.normal();
        while (std::abs(v) > 2.0) v = r.normal();
        X(i, j) = v;
      }
      const double f1 = expit(-1.0 + std::log(2.0) * X(i, 0));
      const double f2 = expit(-1.5 + std::log(3.0) * X(i, 1));
      const JointRisk cells = gumbel_joint(f1, f2, rho_true).risk;
      const double u = r.uniform();
      y1[i] = (u < cells.p11 + cells.p10) ? 1 : 0;
      y2[i] = (u < cells.p11 || (u >= cells.p11 + cells.p10 &&
                                 u < cells.p11 + cells.p10 + cells.p01))
                  ? 1
                  : 0;
    }
    const GumbelMvlModel m = fit_mvl(X, y1, y2);
    double worst = std::abs(m.beta1[0] - (-1.0));
    worst = std::max(worst, std::abs(m.beta1[1] - std::log(2.0)));
    worst = std::max(worst, std::abs(m.beta1[2]));
    worst = std::max(worst, std::abs(m.beta2[0] - (-1.5)));
    worst = std::max(worst, std::abs(m.beta2[1]));
    worst = std::max(worst, std::abs(m.beta2[2] - std::log(3.0)));
    c.require(worst <= 0.05, fmt("mvl recovery worst beta error %.4f", worst));
    c.require(std::abs(m.rho - rho_true) <= 0.02,
              fmt("mvl rho %.4f deviates from %.2f by more than 0.02", m.rho, rho_true));
    c.note(fmt("mvl recovery: worst beta error %.4f, rho %.4f (true %.2f)", worst, m.rho,
               rho_true));
  }
  {  // probit self-recovery: full default chain on its own mechanism
    RngStream r(1709);
    const int n = 5000;
    const Eigen::Vector3d b1(-1.0, 0.7, 0.0), b2(-1.5, 0.0, 1.1);
    const double rho_true = 0.5;
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXi y1(n), y2(n);
    for (int i = 0; i < n; ++i) {
      X(i, 0) = r.normal();
      X(i, 1) = r.normal();
      const double e1 = r.normal();
      const double e2 = rho_true * e1 + std::sqrt(1 - rho_true * rho_true) * r.normal();
      y1[i] = (b1[0] + b1[1] * X(i, 0) + b1[2] * X(i, 1) + e1) > 0 ? 1 : 0;
      y2[i] = (b2[0] + b2[1] * X(i, 0) + b2[2] * X(i, 1) + e2) > 0 ? 1 : 0;
    }
    GibbsConfig cfg;  // full budget: 10000 total, 5000 burn-in
    cfg.seed = 1710;
    const ProbitPosterior p = fit_probit(X, y1, y2, cfg);
    c.require(std::abs(p.mean_rho - rho_true) <= 0.07,
              fmt("probit posterior mean rho %.4f deviates from 0.5 by more than 0.07",
                  p.mean_rho));
    for (int j = 0; j < 3; ++j) {
      c.require(std::abs(p.mean_beta1[j] - b1[j]) <= 3.0 * p.sd_beta1[j],
                fmt("beta1[%d] outside 3 posterior sd", j));
      c.require(std::abs(p.mean_beta2[j] - b2[j]) <= 3.0 * p.sd_beta2[j],
                fmt("beta2[%d] outside 3 posterior sd", j));
    }
    c.note(fmt("probit recovery: mean rho %.4f (true 0.5), acceptance %.2f", p.mean_rho,
               p.rho_acceptance_rate));

    // null chain: independent fair coins, no covariates
    Eigen::MatrixXd empty(n, 0);
    Eigen::VectorXi c1(n), c2(n);
    RngStream coin(1711);
    for (int i = 0; i < n; ++i) {
      c1[i] = coin.uniform() < 0.5 ? 1 : 0;
      c2[i] = coin.uniform() < 0.5 ? 1 : 0;
    }
    GibbsConfig null_cfg;
    null_cfg.seed = 1712;
    const ProbitPosterior p0 = fit_probit(empty, c1, c2, null_cfg);
    c.require(std::abs(p0.mean_rho) <= 0.05,
              fmt("null-chain posterior mean rho %.4f exceeds 0.05", p0.mean_rho));
    c.note(fmt("probit null chain: mean rho %+.4f", p0.mean_rho));
  }
  return finish(c);
}

static Agg run_main_simulation(int iterations, const fs::path& out_dir) {
  SimulationPlan plan;
  for (const Scenario& s : scenario_grid()) {
    if (!s.sensitivity) plan.scenarios.push_back(s);
  }
  plan.iterations = iterations;
  plan.base_seed = 42;
  plan.gibbs.total_samples = 2000;  // --fast-mpm budget
  plan.gibbs.burn_in = 1000;
  plan.out_dir = out_dir;
  const ResultsTable table = run_simulation(plan);
  Agg agg;
  agg.add(table);
  return agg;
}

static int criterion3(const Agg& agg) {
  Criterion c{3, "joint CITL: clean at rho=0; product-form methods biased up at rho=0.95"};
  const std::vector<std::string> all = {"univariate", "sr", "pcc", "mlr", "mlm", "mpm"};
  for (const std::string& m : all) {
    const double v = agg.mean(0.0, m, "P11", "citl");
    c.require(std::abs(v) <= 0.05, fmt("%s mean P11 citl at rho=0 is %+.3f", m.c_str(), v));
  }
  c.note(fmt("rho=0 P11 citl: uni %+.3f sr %+.3f pcc %+.3f mlr %+.3f mlm %+.3f mpm %+.3f",
             agg.mean(0, "univariate", "P11", "citl"), agg.mean(0, "sr", "P11", "citl"),
             agg.mean(0, "pcc", "P11", "citl"), agg.mean(0, "mlr", "P11", "citl"),
             agg.mean(0, "mlm", "P11", "citl"), agg.mean(0, "mpm", "P11", "citl")));
  for (const std::string& a : {"univariate", "sr"}) {
    const double mean_a = agg.mean(0.95, a, "P11", "citl");
    const double se_a = agg.se(0.95, a, "P11", "citl");
    c.require(mean_a > 0.0, fmt("%s mean P11 citl at rho=0.95 is %+.3f, not positive",
                                a.c_str(), mean_a));
    for (const std::string& b : {"pcc", "mlr", "mpm"}) {
      const double mean_b = agg.mean(0.95, b, "P11", "citl");
      const double se_b = agg.se(0.95, b, "P11", "citl");
      const double gap = (mean_a - mean_b) / std::sqrt(se_a * se_a + se_b * se_b);
      c.require(gap >= 3.0, fmt("%s vs %s separation %.1f MC standard errors (< 3)",
                                a.c_str(), b.c_str(), gap));
    }
  }
  for (const std::string& b : {"pcc", "mlr", "mpm"}) {
    const double v = agg.mean(0.95, b, "P11", "citl");
    c.require(std::abs(v) < 0.1, fmt("%s mean P11 citl at rho=0.95 is %+.3f", b.c_str(), v));
  }
  c.note(fmt("rho=0.95 P11 citl: uni %+.3f sr %+.3f pcc %+.3f mlr %+.3f mpm %+.3f",
             agg.mean(0.95, "univariate", "P11", "citl"), agg.mean(0.95, "sr", "P11", "citl"),
             agg.mean(0.95, "pcc", "P11", "citl"), agg.mean(0.95, "mlr", "P11", "citl"),
             agg.mean(0.95, "mpm", "P11", "citl")));
  return finish(c);
}

static int criterion4(const Agg& agg) {
  Criterion c{4, "joint calibration slopes: PCC/MLR/MPM near 1; MLM P01 miscalibrated"};
  const double rhos[5] = {0.0, 0.25, 0.50, 0.75, 0.95};
  for (const std::string& m : {"pcc", "mlr", "mpm"}) {
    for (double rho : rhos) {
      for (const std::string& t : {"P11", "P10", "P01"}) {
        const double v = agg.mean(rho, m, t, "slope");
        c.require(v >= 0.9 && v <= 1.1,
                  fmt("%s %s slope at rho=%.2f is %.3f", m.c_str(), t.c_str(), rho, v));
      }
    }
  }
  for (double rho : {0.75, 0.95}) {
    const double v = agg.mean(rho, "mlm", "P01", "slope");
    c.require(v < 0.9 || v > 1.1,
              fmt("mlm P01 slope at rho=%.2f is %.3f, inside [0.9,1.1]", rho, v));
    c.note(fmt("mlm P01 slope at rho=%.2f: %.3f", rho, v));
  }
  return finish(c);
}

static int criterion5(const Agg& agg) {
  Criterion c{5, "joint-target MSE: dependence-aware methods beat product-form for rho >= 0.5"};
  for (double rho : {0.50, 0.75, 0.95}) {
    for (const std::string& t : {"P11", "P10", "P01"}) {
      for (const std::string& good : {"pcc", "mlr", "mpm"}) {
        const double mg = agg.mean(rho, good, t, "mse");
        for (const std::string& bad : {"univariate", "sr"}) {
          const double mb = agg.mean(rho, bad, t, "mse");
          c.require(mg < mb, fmt("%s mse (%.2e) not below %s (%.2e) for %s at rho=%.2f",
                                 good.c_str(), mg, bad.c_str(), mb, t.c_str(), rho));
        }
      }
    }
  }
  c.note(fmt("rho=0.95 P11 mse: uni %.2e sr %.2e pcc %.2e mlr %.2e mpm %.2e",
             agg.mean(0.95, "univariate", "P11", "mse"), agg.mean(0.95, "sr", "P11", "mse"),
             agg.mean(0.95, "pcc", "P11", "mse"), agg.mean(0.95, "mlr", "P11", "mse"),
             agg.mean(0.95, "mpm", "P11", "mse")));
  return finish(c);
}

static int criterion6(const Agg& agg) {
  Criterion c{6, "marginal calibration clean and discrimination consistent for all methods"};
  const double rhos[5] = {0.0, 0.25, 0.50, 0.75, 0.95};
  const std::vector<std::string> all = {"univariate", "sr", "pcc", "mlr", "mlm", "mpm"};
  double worst_citl = 0.0, worst_slope_dev = 0.0, worst_spread = 0.0;
  for (double rho : rhos) {
    for (const std::string& t : {"PY1", "PY2"}) {
      double lo_auc = 1.0, hi_auc = 0.0;
      for (const std::string& m : all) {
        const double citl = agg.mean(rho, m, t, "citl");
        const double slope = agg.mean(rho, m, t, "slope");
        const double auc_m = agg.mean(rho, m, t, "auc");
        worst_citl = std::max(worst_citl, std::abs(citl));
        worst_slope_dev = std::max(worst_slope_dev, std::abs(slope - 1.0));
        c.require(std::abs(citl) <= 0.05,
                  fmt("%s %s citl at rho=%.2f is %+.3f", m.c_str(), t.c_str(), rho, citl));
        c.require(slope >= 0.9 && slope <= 1.1,
                  fmt("%s %s slope at rho=%.2f is %.3f", m.c_str(), t.c_str(), rho, slope));
        lo_auc = std::min(lo_auc, auc_m);
        hi_auc = std::max(hi_auc, auc_m);
      }
      worst_spread = std::max(worst_spread, hi_auc - lo_auc);
      c.require(hi_auc - lo_auc < 0.01, fmt("%s auc spread at rho=%.2f is %.4f", t.c_str(),
                                            rho, hi_auc - lo_auc));
    }
  }
  c.note(fmt("worst |citl| %.3f, worst |slope-1| %.3f, worst auc spread %.4f", worst_citl,
             worst_slope_dev, worst_spread));
  return finish(c);
}

static int criterion8(const fs::path& dir) {
  Criterion c{8, "structural invariants: randomized predictions and byte-level determinism"};
  {  // 10000 randomized predict calls per method
    RngStream r(88001);
    const int calls = 10000;
    int clamped_events = 0;
    auto rand_logistic = [&r](int p) {
      UnivariateLogisticModel m;
      m.intercept = 2.0 * r.normal();
      m.coefficients = Eigen::VectorXd(p);
      for (int j = 0; j < p; ++j) m.coefficients[j] = 1.5 * r.normal();
      return m;
    };
    double worst_gap = 0.0;
    for (int k = 0; k < calls; ++k) {
      Eigen::VectorXd x(2);
      x << 2.0 * r.normal(), 2.0 * r.normal();

      const UnivariateLogisticModel u1 = rand_logistic(2), u2 = rand_logistic(2);
      const JointRisk ju = predict_univariate_joint(u1, u2, x);
      if (!ju.valid(1e-9)) c.require(false, "univariate simplex violated");
      worst_gap = std::max(worst_gap,
                           std::abs(ju.marginal1() - expit(u1.linear_predictor(x))));

      StackedModel sm;
      sm.stage1_outcome1 = rand_logistic(2);
      sm.stage1_outcome2 = rand_logistic(2);
      sm.stage2_outcome1 = {0.4 * r.normal(), 0.5 + 0.3 * r.normal(), 0.3 * r.normal(),
                            Eigen::VectorXd::Zero(2)};
      sm.stage2_outcome2 = {0.4 * r.normal(), 0.3 * r.normal(), 0.5 + 0.3 * r.normal(),
                            Eigen::VectorXd::Zero(2)};
      const JointRisk js = predict_stacked_joint(sm, x);
      if (!js.valid(1e-9)) c.require(false, "stacked simplex violated");

      PccModel pm;
      pm.perm1_marginal = rand_logistic(2);
      pm.perm2_marginal = rand_logistic(2);
      pm.perm1_conditional = {r.normal(), Eigen::VectorXd(2), r.normal()};
      pm.perm1_conditional.coefficients << r.normal(), r.normal();
      pm.perm2_conditional = {r.normal(), Eigen::VectorXd(2), r.normal()};
      pm.perm2_conditional.coefficients << r.normal(), r.normal();
      const JointRisk jp = predict_pcc(pm, x);
      if (!jp.valid(1e-9)) c.require(false, "pcc simplex violated");

      MultinomialModel mm;
      for (int q = 0; q < 3; ++q) {
        mm.intercepts[q] = 2.0 * r.normal();
        mm.coefficients[q] = Eigen::VectorXd(2);
        mm.coefficients[q] << 1.5 * r.normal(), 1.5 * r.normal();
      }
      const JointRisk jm = predict_multinomial(mm, x);
      if (!jm.valid(1e-9)) c.require(false, "multinomial simplex violated");

      GumbelMvlModel gm;
      gm.beta1 = Eigen::VectorXd(3);
      gm.beta1 << r.normal(), r.normal(), r.normal();
      gm.beta2 = Eigen::VectorXd(3);
      gm.beta2 << r.normal(), r.normal(), r.normal();
      gm.rho = 1.6 * (r.uniform() - 0.5);
      bool clamped = false;
      const JointRisk jg = predict_mvl(gm, x, &clamped);
      clamped_events += clamped ? 1 : 0;
      if (!jg.valid(1e-9)) c.require(false, "mvl simplex violated (after renormalization)");

      ProbitPosterior pp;
      pp.mean_beta1 = Eigen::VectorXd(3);
      pp.mean_beta1 << r.normal(), r.normal(), r.normal();
      pp.mean_beta2 = Eigen::VectorXd(3);
      pp.mean_beta2 << r.normal(), r.normal(), r.normal();
      pp.mean_rho = 1.9 * (r.uniform() - 0.5);
      const JointRisk jb = predict_probit(pp, x);
      if (!jb.valid(1e-9)) c.require(false, "probit simplex violated");
      worst_gap = std::max(worst_gap,
                           std::abs(jb.marginal1() - std_normal_cdf(pp.lp1(x))));
    }
    c.require(worst_gap <= 1e-7, fmt("marginal identity gap %.2e exceeds 1e-7", worst_gap));
    c.note(fmt("%d randomized calls per method; worst marginal-identity gap %.2e; "
               "%d mvl clamp events",
               calls, worst_gap, clamped_events));
  }
  {  // end-to-end determinism
    SimulationPlan plan;
    const auto grid = scenario_grid();
    plan.scenarios = {grid[1], grid[4]};
    plan.iterations = 2;
    plan.base_seed = 4242;
    plan.gibbs.total_samples = 400;
    plan.gibbs.burn_in = 200;
    plan.out_dir = dir / "det_a";
    run_simulation(plan);
    plan.out_dir = dir / "det_b";
    plan.threads = 1;
    run_simulation(plan);
    auto slurp = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    const bool same_results =
        slurp(dir / "det_a" / "results.csv") == slurp(dir / "det_b" / "results.csv");
    const bool same_summary =
        slurp(dir / "det_a" / "summary.csv") == slurp(dir / "det_b" / "summary.csv");
    c.require(same_results, "results.csv differs between identical runs");
    c.require(same_summary, "summary.csv differs between identical runs");
    c.note("two identical simulate runs: byte-identical results.csv and summary.csv");
  }
  return finish(c);
}

int main(int argc, char** argv) {
  int iterations = 50;
  if (argc > 1) iterations = std::atoi(argv[1]);
  const auto t0 = Clock::now();
  const fs::path dir = fs::temp_directory_path() / "mvrisk_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  int failures = 0;
  std::vector<Table1Row> table1;
  failures += criterion1(&table1);
  failures += criterion2();
  failures += criterion7();  // oracles before the simulation

  std::printf("running the simulation study (%d iterations x 5 scenarios x 6 methods, "
              "fast Gibbs)...\n",
              iterations);
  std::fflush(stdout);
  const Agg agg = run_main_simulation(iterations, dir / "study");
  failures += criterion3(agg);
  failures += criterion4(agg);
  failures += criterion5(agg);
  failures += criterion6(agg);
  failures += criterion8(dir);

  std::printf("%d/8 criteria passed in %.1f s\n", 8 - failures, seconds_since(t0));
  return failures;
}
