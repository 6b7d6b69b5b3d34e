#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mvrisk/simulation.hpp"

using namespace mvrisk;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& leaf) {
  const fs::path p = fs::temp_directory_path() / "mvrisk_harness" / leaf;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dataset small_data(int n, double rho, std::uint64_t seed) {
  GenConfig cfg;
  cfg.n = n;
  cfg.rho = rho;
  return generate_dataset(cfg, RngStream(seed).child("harness"));
}

GibbsConfig tiny_gibbs() {
  GibbsConfig g;
  g.total_samples = 160;
  g.burn_in = 60;
  return g;
}

}  // namespace

TEST_CASE("model json: every method round-trips its predictions") {
  const Dataset d = small_data(1500, 0.5, 42);
  const auto dir = temp_dir("model_io");
  for (Method method : all_methods()) {
    CAPTURE(method_name(method));
    const FittedModel model =
        fit_method(method, d, tiny_gibbs(), RngStream(7).child("fit"));
    const fs::path file = dir / (method_name(method) + ".json");
    save_model_json(file, model, d.covariate_names);
    const LoadedModel loaded = load_model_json(file);
    CHECK(model_method(loaded.model) == method);
    CHECK(loaded.covariate_names == d.covariate_names);
    for (int k = 0; k < 50; ++k) {
      const Eigen::VectorXd x = d.X.row(k).transpose();
      const JointRisk a = predict_joint(model, x);
      const JointRisk b = predict_joint(loaded.model, x);
      CHECK(a.p11 == doctest::Approx(b.p11).epsilon(1e-12));
      CHECK(a.p10 == doctest::Approx(b.p10).epsilon(1e-12));
      CHECK(a.p01 == doctest::Approx(b.p01).epsilon(1e-12));
      CHECK(a.p00 == doctest::Approx(b.p00).epsilon(1e-12));
    }
  }
  CHECK_THROWS_WITH_AS(parse_method("boost"), doctest::Contains("univariate, sr, pcc"),
                       std::invalid_argument);
}

TEST_CASE("predict_dataset: covariate dimension is enforced") {
  const Dataset d = small_data(400, 0.0, 43);
  const FittedModel m = fit_method(Method::univariate, d, tiny_gibbs(), RngStream(1));
  Dataset wider = d;
  wider.X.conservativeResize(Eigen::NoChange, 3);
  wider.X.col(2).setZero();
  CHECK_THROWS_AS(predict_dataset(m, wider), std::invalid_argument);
}

TEST_CASE("run_simulation: schema, determinism across runs and thread counts") {
  SimulationPlan plan;
  const auto grid = scenario_grid();
  plan.scenarios = {grid[0], grid[4]};  // base rho 0 and 0.95
  plan.iterations = 2;
  plan.methods = {Method::univariate, Method::mlr, Method::mpm};
  plan.base_seed = 777;
  plan.gibbs = tiny_gibbs();
  plan.threads = 2;
  plan.out_dir = temp_dir("sim_a");
  const ResultsTable a = run_simulation(plan);

  SUBCASE("row set is complete, keyed uniquely, all ok") {
    // 2 scenarios x 2 iterations x 3 methods x 5 targets x 4 metrics
    CHECK(a.rows.size() == 2 * 2 * 3 * 5 * 4);
    std::set<std::string> keys;
    for (const ResultRow& r : a.rows) {
      CHECK(r.status == "ok");
      CHECK(std::isfinite(r.value));
      keys.insert(r.scenario + "|" + std::to_string(r.iteration) + "|" + r.method + "|" +
                  r.target + "|" + r.metric);
    }
    CHECK(keys.size() == a.rows.size());
  }

  SUBCASE("byte-identical outputs for the same plan, any thread count") {
    SimulationPlan again = plan;
    again.out_dir = temp_dir("sim_b");
    again.threads = 1;
    run_simulation(again);
    CHECK(slurp(plan.out_dir / "results.csv") == slurp(again.out_dir / "results.csv"));
    CHECK(slurp(plan.out_dir / "summary.csv") == slurp(again.out_dir / "summary.csv"));
  }

  SUBCASE("results csv round-trips") {
    const ResultsTable parsed = read_results_csv(plan.out_dir / "results.csv");
    REQUIRE(parsed.rows.size() == a.rows.size());
    for (size_t i = 0; i < parsed.rows.size(); ++i) {
      CHECK(parsed.rows[i].scenario == a.rows[i].scenario);
      CHECK(parsed.rows[i].metric == a.rows[i].metric);
      CHECK(parsed.rows[i].iteration == a.rows[i].iteration);
    }
  }

  SUBCASE("summary is an exact aggregation of the written rows") {
    const ResultsTable parsed = read_results_csv(plan.out_dir / "results.csv");
    std::map<std::string, std::vector<double>> groups;
    std::map<std::string, double> rhos;
    for (const ResultRow& r : parsed.rows) {
      if (r.status != "ok") continue;
      groups[r.scenario + "," + r.method + "," + r.target + "," + r.metric].push_back(r.value);
    }
    std::ifstream in(plan.out_dir / "summary.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "scenario,rho,method,target,metric,mean,q2.5,q97.5,n");
    int checked = 0;
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string scenario, rho, method, target, metric, mean, q025, q975, count;
      std::getline(ss, scenario, ',');
      std::getline(ss, rho, ',');
      std::getline(ss, method, ',');
      std::getline(ss, target, ',');
      std::getline(ss, metric, ',');
      std::getline(ss, mean, ',');
      std::getline(ss, q025, ',');
      std::getline(ss, q975, ',');
      std::getline(ss, count, ',');
      const auto& values = groups.at(scenario + "," + method + "," + target + "," + metric);
      double total = 0.0;
      for (double v : values) total += v;
      CHECK(std::stod(mean) == doctest::Approx(total / values.size()).epsilon(1e-9));
      CHECK(std::stoul(count) == values.size());
      ++checked;
    }
    CHECK(checked == 2 * 3 * 5 * 4);
  }
}

TEST_CASE("run_simulation: a failing method never suppresses the others") {
  // a zero proposal scale makes every mpm fit fail by contract while the
  // other methods stay healthy
  SimulationPlan plan;
  plan.scenarios = {scenario_grid()[1]};
  plan.iterations = 2;
  plan.methods = {Method::univariate, Method::mpm};
  plan.base_seed = 20;
  plan.gibbs.rho_proposal_scale = 0.0;
  const ResultsTable t = run_simulation(plan);

  int uni_ok = 0, mpm_error = 0;
  for (const ResultRow& r : t.rows) {
    if (r.method == "univariate") {
      CHECK(r.status == "ok");
      ++uni_ok;
    }
    if (r.method == "mpm" && r.status != "ok") {
      ++mpm_error;
      CHECK(r.metric == "error");
      CHECK(std::isnan(r.value));
      CHECK(r.status.find("proposal scale") != std::string::npos);
    }
  }
  CHECK(uni_ok == 2 * 5 * 4);
  CHECK(mpm_error == 2);
}

TEST_CASE("figure data: exact group-by of the results file") {
  SimulationPlan plan;
  const auto grid = scenario_grid();
  plan.scenarios = {grid[0], grid[2], grid[4]};
  plan.iterations = 3;
  plan.methods = {Method::univariate, Method::pcc};
  plan.base_seed = 99;
  plan.out_dir = temp_dir("figs");
  run_simulation(plan);
  const ResultsTable parsed = read_results_csv(plan.out_dir / "results.csv");
  write_figure_data(parsed, plan.out_dir / "figures");

  for (const char* name :
       {"figure1_citl_joint.csv", "figure2_slope_joint.csv", "figure3_auc_joint.csv",
        "figure4_mse_joint.csv", "supp_figure1_citl_marginal.csv",
        "supp_figure2_slope_marginal.csv", "supp_figure3_auc_marginal.csv",
        "supp_figure4_mse_marginal.csv"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(plan.out_dir / "figures" / name));
  }

  // independent group-by for one file
  const std::string metric = "citl";
  std::map<std::string, std::vector<double>> groups;
  for (const ResultRow& r : parsed.rows) {
    if (r.status != "ok" || r.metric != metric) continue;
    if (r.target != "P11" && r.target != "P10" && r.target != "P01") continue;
    char key[64];
    std::snprintf(key, sizeof(key), "%.10g,%s,%s", r.rho, r.method.c_str(), r.target.c_str());
    groups[key].push_back(r.value);
  }
  std::ifstream in(plan.out_dir / "figures" / "figure1_citl_joint.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "rho,method,target,mean,q2.5,q97.5");
  int rows = 0;
  while (std::getline(in, line)) {
    const size_t third_comma =
        line.find(',', line.find(',', line.find(',') + 1) + 1);
    const std::string key = line.substr(0, third_comma);
    std::stringstream rest(line.substr(third_comma + 1));
    std::string mean_s;
    std::getline(rest, mean_s, ',');
    const auto& values = groups.at(key);
    double total = 0.0;
    for (double v : values) total += v;
    // identical accumulation order (file order), so equality is exact
    CHECK(std::stod(mean_s) == doctest::Approx(total / values.size()).epsilon(1e-12));
    ++rows;
  }
  CHECK(rows == 3 * 2 * 3);  // rho x method x target
}

TEST_CASE("table1: shape and trend at desk scale") {
  const auto rows = compute_table1(2024, 2, 2000);
  REQUIRE(rows.size() == 5);
  double prev = -1.0;
  for (const Table1Row& r : rows) {
    CHECK(r.p11 > prev);
    prev = r.p11;
    CHECK(r.p11 + r.p10 + r.p01 < 1.0);
    if (r.rho > 0) CHECK(r.corr < r.rho);
  }
  CHECK(rows[0].rho == 0.0);
  CHECK(rows[4].rho == 0.95);

  const auto dir = temp_dir("table1");
  write_table1_csv(dir / "table1.csv", rows);
  const std::string text = slurp(dir / "table1.csv");
  CHECK(text.starts_with("rho,corr,p11,p10,p01\n"));
}

TEST_CASE("holdout_split: deterministic, disjoint, right size") {
  const HoldoutSplit a = holdout_split(1000, 0.3, RngStream(5).child("holdout"));
  const HoldoutSplit b = holdout_split(1000, 0.3, RngStream(5).child("holdout"));
  CHECK(a.held == b.held);
  CHECK(a.train == b.train);
  CHECK(a.held.size() == 300);
  CHECK(a.train.size() == 700);
  std::set<Eigen::Index> all(a.held.begin(), a.held.end());
  all.insert(a.train.begin(), a.train.end());
  CHECK(all.size() == 1000);
  CHECK_THROWS_AS(holdout_split(10, 0.0, RngStream(1)), std::invalid_argument);
}
