#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mvrisk/datagen.hpp"
#include "mvrisk/model_io.hpp"

namespace mvrisk {

struct SimulationPlan {
  std::vector<Scenario> scenarios;
  int iterations = 100;
  std::vector<Method> methods = all_methods();
  std::uint64_t base_seed = 20200101;
  GibbsConfig gibbs;  // per-fit seed is derived from the task substream
  std::filesystem::path out_dir;  // empty: keep results in memory only
  int threads = 0;                // 0 = hardware concurrency
};

struct ResultRow {
  std::string scenario;
  double rho = 0.0;
  int iteration = 0;
  std::string method;
  std::string target;
  std::string metric;
  double value = 0.0;
  std::string status;  // "ok" or an error note
};

struct ResultsTable {
  std::vector<ResultRow> rows;
};

// Fits one method on a development dataset. The stream feeds the method's
// stochastic parts only (cv folds, Gibbs chain); deterministic fits ignore
// it, so changing the method set never shifts the data streams.
FittedModel fit_method(Method method, const Dataset& dev, const GibbsConfig& gibbs,
                       RngStream rng);

std::vector<JointRisk> predict_dataset(const FittedModel& model, const Dataset& data);

// The full simulation: per (scenario, iteration), generate development and
// validation data from derived substreams, fit every requested method,
// evaluate on the validation set against the generating truth. A failed fit
// becomes a status row; the run continues. Writes results.csv and
// summary.csv when out_dir is set. Output is byte-stable for a fixed plan
// regardless of thread count.
ResultsTable run_simulation(const SimulationPlan& plan);

void write_results_csv(const std::filesystem::path& path, const ResultsTable& table);
ResultsTable read_results_csv(const std::filesystem::path& path);

// mean / 2.5% / 97.5% quantiles over iterations per
// (scenario, method, target, metric), computed from ok rows.
void write_summary_csv(const std::filesystem::path& path, const ResultsTable& table);

// Plot-ready aggregations: one CSV per metric for the joint targets
// (figure1..figure4) and one per metric for the marginals
// (supp_figure1..supp_figure4), with rows (rho, method, target, mean,
// q2.5, q97.5). Sensitivity scenarios, when present, go to *_sensitivity
// twins. Values are exact group-bys of the rows passed in.
void write_figure_data(const ResultsTable& table, const std::filesystem::path& out_dir);

// Deterministic random split: `fraction` of the rows (rounded) are held out.
// Both index lists come back sorted.
struct HoldoutSplit {
  std::vector<Eigen::Index> train;
  std::vector<Eigen::Index> held;
};
HoldoutSplit holdout_split(Eigen::Index n, double fraction, RngStream rng);

struct Table1Row {
  double rho = 0.0;
  double corr = 0.0;  // phi coefficient between the outcomes, pooled
  double p11 = 0.0;
  double p10 = 0.0;
  double p01 = 0.0;
};

// Pooled empirical correlation and joint event rates over
// iterations x n generated rows per rho.
std::vector<Table1Row> compute_table1(std::uint64_t seed, int iterations, int n = 5000,
                                      bool sensitivity = false);
void write_table1_csv(const std::filesystem::path& path, const std::vector<Table1Row>& rows);

}  // namespace mvrisk
