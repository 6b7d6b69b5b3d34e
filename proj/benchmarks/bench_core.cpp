#include <benchmark/benchmark.h>

#include "mvrisk/datagen.hpp"
#include "mvrisk/lasso.hpp"
#include "mvrisk/metrics.hpp"
#include "mvrisk/models/probit.hpp"
#include "mvrisk/models/univariate.hpp"
#include "mvrisk/special.hpp"
#include "mvrisk/truncnorm.hpp"

using namespace mvrisk;

namespace {

Dataset bench_data(int n, double rho) {
  GenConfig cfg;
  cfg.n = n;
  cfg.rho = rho;
  return generate_dataset(cfg, RngStream(1).child("bench"));
}

}  // namespace

static void BM_StdNormalQuantile(benchmark::State& state) {
  double p = 1e-9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(std_normal_quantile(p));
    p += 1e-6;
    if (p >= 1.0) p = 1e-9;
  }
}
BENCHMARK(BM_StdNormalQuantile);

static void BM_BivariateNormalCdf(benchmark::State& state) {
  const double rho = state.range(0) / 100.0;
  double a = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bivariate_normal_cdf(a, 0.4, rho));
    a += 0.001;
    if (a > 3.0) a = -3.0;
  }
}
BENCHMARK(BM_BivariateNormalCdf)->Arg(30)->Arg(80)->Arg(95);

static void BM_TruncatedNormal(benchmark::State& state) {
  RngStream r(9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sample_truncated_normal(0.4, 1.0, 0.0, std::numeric_limits<double>::infinity(), r));
  }
}
BENCHMARK(BM_TruncatedNormal);

static void BM_GenerateDataset(benchmark::State& state) {
  GenConfig cfg;
  cfg.n = static_cast<int>(state.range(0));
  cfg.rho = 0.5;
  const RngStream root(77);
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_dataset(cfg, root.child(++i)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateDataset)->Arg(5000);

static void BM_FitUnivariate(benchmark::State& state) {
  const Dataset d = bench_data(static_cast<int>(state.range(0)), 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_univariate(d.X, d.y1));
  }
}
BENCHMARK(BM_FitUnivariate)->Arg(5000);

static void BM_LassoPath(benchmark::State& state) {
  const Dataset d = bench_data(5000, 0.25);
  Eigen::MatrixXd Z(d.n(), 4);
  Z.leftCols(2) = d.X;
  Z.col(2) = d.X.col(0).cwiseProduct(d.X.col(1));
  Z.col(3) = d.X.col(0).cwiseAbs();
  const auto grid = lambda_grid(lasso_lambda_max(Z, d.y1), 50, 1e-4);
  for (auto _ : state) {
    for (double lambda : grid) {
      benchmark::DoNotOptimize(lasso_logistic(Z, d.y1, {}, lambda));
    }
  }
}
BENCHMARK(BM_LassoPath);

static void BM_GibbsSweeps(benchmark::State& state) {
  const Dataset d = bench_data(5000, 0.5);
  GibbsConfig cfg;
  cfg.total_samples = static_cast<int>(state.range(0));
  cfg.burn_in = cfg.total_samples / 2;
  cfg.seed = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_probit(d.X, d.y1, d.y2, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GibbsSweeps)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_Auc(benchmark::State& state) {
  RngStream r(4);
  const int n = static_cast<int>(state.range(0));
  Eigen::VectorXd scores(n);
  Eigen::VectorXi labels(n);
  for (int i = 0; i < n; ++i) {
    scores[i] = expit(r.normal());
    labels[i] = r.uniform() < scores[i] ? 1 : 0;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(auc(scores, labels));
  }
}
BENCHMARK(BM_Auc)->Arg(10000);

BENCHMARK_MAIN();
