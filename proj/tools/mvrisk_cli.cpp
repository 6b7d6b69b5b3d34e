// Command-line front end: simulation study over the scenario grid, pooled
// correlation table, and fit / predict / evaluate / figures on CSV files.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "mvrisk/metrics.hpp"
#include "mvrisk/simulation.hpp"
#include "mvrisk/special.hpp"

using namespace mvrisk;
namespace fs = std::filesystem;

namespace {

std::vector<Scenario> select_scenarios(const std::vector<double>& rho_list, bool sensitivity) {
  std::vector<Scenario> picked;
  for (const Scenario& s : scenario_grid()) {
    if (s.sensitivity != sensitivity) continue;
    if (!rho_list.empty() &&
        std::none_of(rho_list.begin(), rho_list.end(),
                     [&](double r) { return std::abs(r - s.rho) < 1e-12; })) {
      continue;
    }
    picked.push_back(s);
  }
  if (picked.empty()) {
    throw std::invalid_argument("no scenarios match --rho-list (grid: 0,0.25,0.5,0.75,0.95)");
  }
  return picked;
}

std::vector<Method> parse_methods(const std::string& csv) {
  std::vector<Method> methods;
  std::stringstream ss(csv);
  std::string tag;
  while (std::getline(ss, tag, ',')) {
    if (!tag.empty()) methods.push_back(parse_method(tag));
  }
  if (methods.empty()) throw std::invalid_argument("--methods must name at least one method");
  return methods;
}

void check_covariate_schema(const std::vector<std::string>& model_cols,
                            const std::vector<std::string>& data_cols) {
  for (size_t j = 0; j < std::max(model_cols.size(), data_cols.size()); ++j) {
    const std::string in_model = j < model_cols.size() ? model_cols[j] : "(absent)";
    const std::string in_data = j < data_cols.size() ? data_cols[j] : "(absent)";
    if (in_model != in_data) {
      throw std::runtime_error("covariate schema mismatch at column '" + in_model +
                               "': data file has '" + in_data + "'");
    }
  }
}

Dataset subset_rows(const Dataset& d, const std::vector<Eigen::Index>& idx) {
  Dataset out;
  out.covariate_names = d.covariate_names;
  out.X.resize(static_cast<Eigen::Index>(idx.size()), d.p());
  out.y1.resize(static_cast<Eigen::Index>(idx.size()));
  out.y2.resize(static_cast<Eigen::Index>(idx.size()));
  if (d.truth) {
    SyntheticTruth t;
    t.marginal1.resize(static_cast<Eigen::Index>(idx.size()));
    t.marginal2.resize(static_cast<Eigen::Index>(idx.size()));
    t.joint.resize(idx.size());
    out.truth = std::move(t);
  }
  for (size_t k = 0; k < idx.size(); ++k) {
    const Eigen::Index i = idx[k];
    const Eigen::Index row = static_cast<Eigen::Index>(k);
    out.X.row(row) = d.X.row(i);
    out.y1[row] = d.y1[i];
    out.y2[row] = d.y2[i];
    if (d.truth) {
      out.truth->marginal1[row] = d.truth->marginal1[i];
      out.truth->marginal2[row] = d.truth->marginal2[i];
      out.truth->joint[k] = d.truth->joint[static_cast<size_t>(i)];
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint risk prediction for two correlated binary outcomes"};
  app.require_subcommand(1);

  // ---------------------------------------------------------------- simulate
  auto* sim = app.add_subcommand("simulate", "Run the simulation study over the scenario grid");
  std::string sim_out, sim_methods = "univariate,sr,pcc,mlr,mlm,mpm";
  std::vector<double> rho_list;
  std::uint64_t sim_seed = 20200101;
  int sim_iterations = 100;
  int sim_threads = 0;
  bool sim_sensitivity = false, fast_mpm = false;
  int gibbs_total = 10000, gibbs_burnin = 5000;
  sim->add_option("--out", sim_out, "Output directory")->required();
  sim->add_option("--seed", sim_seed, "Base seed");
  sim->add_option("--iterations", sim_iterations, "Iterations per scenario");
  sim->add_option("--rho-list", rho_list, "Subset of the rho grid")->delimiter(',');
  sim->add_option("--methods", sim_methods, "Comma-separated method tags");
  sim->add_flag("--sensitivity", sim_sensitivity, "Use the low-prevalence scenarios");
  sim->add_flag("--fast-mpm", fast_mpm, "Short Gibbs chains (2000 total / 1000 burn-in)");
  sim->add_option("--gibbs-total", gibbs_total, "Gibbs samples per probit fit");
  sim->add_option("--gibbs-burnin", gibbs_burnin, "Gibbs burn-in");
  sim->add_option("--threads", sim_threads, "Worker threads (0 = hardware)");

  // ------------------------------------------------------------------ table1
  auto* tab = app.add_subcommand("table1", "Pooled outcome correlation and joint rates per rho");
  std::string tab_out;
  std::uint64_t tab_seed = 20200101;
  int tab_iterations = 100, tab_n = 5000;
  bool tab_sensitivity = false;
  tab->add_option("--out", tab_out, "Output CSV file")->required();
  tab->add_option("--seed", tab_seed, "Seed");
  tab->add_option("--iterations", tab_iterations, "Datasets pooled per rho");
  tab->add_option("--n", tab_n, "Rows per dataset");
  tab->add_flag("--sensitivity", tab_sensitivity, "Low-prevalence intercepts");

  // ---------------------------------------------------------------- generate
  auto* gen = app.add_subcommand("generate", "Write one synthetic dataset as CSV");
  std::string gen_out;
  std::uint64_t gen_seed = 1;
  int gen_n = 5000;
  double gen_rho = 0.0;
  bool gen_sensitivity = false, gen_truth = false;
  gen->add_option("--out", gen_out, "Output CSV file")->required();
  gen->add_option("--n", gen_n, "Rows");
  gen->add_option("--rho", gen_rho, "Latent correlation in [-1,1]");
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_flag("--sensitivity", gen_sensitivity, "Low-prevalence intercepts");
  gen->add_flag("--truth", gen_truth, "Include true_p11..true_p00 columns");

  // --------------------------------------------------------------------- fit
  auto* fit = app.add_subcommand("fit", "Fit one method on a dataset CSV");
  std::string fit_data, fit_method_tag, fit_out;
  std::uint64_t fit_seed = 1;
  int fit_gibbs_total = 10000, fit_gibbs_burnin = 5000;
  fit->add_option("--data", fit_data, "Dataset CSV (x1..xP,y1,y2)")->required();
  fit->add_option("--method", fit_method_tag, "univariate|sr|pcc|mlr|mlm|mpm")->required();
  fit->add_option("--out", fit_out, "Output model JSON")->required();
  fit->add_option("--seed", fit_seed, "Seed for cv folds / Gibbs");
  fit->add_option("--gibbs-total", fit_gibbs_total, "Gibbs samples (mpm)");
  fit->add_option("--gibbs-burnin", fit_gibbs_burnin, "Gibbs burn-in (mpm)");

  // ----------------------------------------------------------------- predict
  auto* pred = app.add_subcommand("predict", "Predict joint risks for a dataset CSV");
  std::string pred_model, pred_data, pred_out;
  pred->add_option("--model", pred_model, "Model JSON from fit")->required();
  pred->add_option("--data", pred_data, "Dataset CSV")->required();
  pred->add_option("--out", pred_out, "Output predictions CSV")->required();

  // ---------------------------------------------------------------- evaluate
  auto* eval = app.add_subcommand("evaluate", "Calibration / discrimination / MSE report");
  std::string eval_pred, eval_data, eval_out, eval_method_tag;
  double eval_holdout = 0.0;
  std::uint64_t eval_seed = 1;
  bool eval_truth = false;
  int eval_gibbs_total = 10000, eval_gibbs_burnin = 5000;
  eval->add_option("--data", eval_data, "Dataset CSV with outcomes")->required();
  eval->add_option("--pred", eval_pred, "Predictions CSV (row-aligned with --data)");
  eval->add_option("--out", eval_out, "Output metrics JSON")->required();
  eval->add_flag("--truth", eval_truth, "Score MSE against true_* columns");
  eval->add_option("--holdout", eval_holdout,
                   "Hold-out fraction: fit --method on the rest, evaluate on the sample");
  eval->add_option("--method", eval_method_tag, "Method for the --holdout path");
  eval->add_option("--seed", eval_seed, "Seed for the hold-out split");
  eval->add_option("--gibbs-total", eval_gibbs_total, "Gibbs samples (mpm)");
  eval->add_option("--gibbs-burnin", eval_gibbs_burnin, "Gibbs burn-in (mpm)");

  // ----------------------------------------------------------------- figures
  auto* figs = app.add_subcommand("figures", "Plot-ready aggregations of results.csv");
  std::string figs_results, figs_out;
  figs->add_option("--results", figs_results, "results.csv from simulate")->required();
  figs->add_option("--out", figs_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      SimulationPlan plan;
      plan.scenarios = select_scenarios(rho_list, sim_sensitivity);
      plan.iterations = sim_iterations;
      plan.methods = parse_methods(sim_methods);
      plan.base_seed = sim_seed;
      plan.threads = sim_threads;
      plan.out_dir = sim_out;
      plan.gibbs.total_samples = fast_mpm ? 2000 : gibbs_total;
      plan.gibbs.burn_in = fast_mpm ? 1000 : gibbs_burnin;
      const ResultsTable table = run_simulation(plan);
      size_t failures = 0;
      for (const ResultRow& r : table.rows) {
        if (r.status != "ok") ++failures;
      }
      std::cout << "wrote " << (fs::path(sim_out) / "results.csv").string() << " ("
                << table.rows.size() << " rows, " << failures << " failure rows)\n";
    } else if (*tab) {
      const auto rows = compute_table1(tab_seed, tab_iterations, tab_n, tab_sensitivity);
      write_table1_csv(tab_out, rows);
      std::cout << "wrote " << tab_out << "\n";
    } else if (*gen) {
      GenConfig cfg;
      cfg.n = gen_n;
      cfg.rho = gen_rho;
      cfg.seed = gen_seed;
      if (gen_sensitivity) {
        cfg.beta1[0] = -3.0;
        cfg.beta2[0] = -3.5;
      }
      const Dataset d = generate_dataset(cfg, RngStream(gen_seed).child("generate"));
      write_dataset_csv(gen_out, d, gen_truth);
      std::cout << "wrote " << gen_out << " (" << d.n() << " rows)\n";
    } else if (*fit) {
      const Dataset d = read_dataset_csv(fit_data);
      GibbsConfig gibbs;
      gibbs.total_samples = fit_gibbs_total;
      gibbs.burn_in = fit_gibbs_burnin;
      const Method method = parse_method(fit_method_tag);
      const FittedModel model =
          fit_method(method, d, gibbs, RngStream(fit_seed).child("fit"));
      save_model_json(fit_out, model, d.covariate_names);
      std::cout << "wrote " << fit_out << "\n";
    } else if (*pred) {
      const LoadedModel loaded = load_model_json(pred_model);
      const Dataset d = read_dataset_csv(pred_data);
      check_covariate_schema(loaded.covariate_names, d.covariate_names);
      const std::vector<JointRisk> preds = predict_dataset(loaded.model, d);
      write_predictions_csv(pred_out, preds);
      std::cout << "wrote " << pred_out << " (" << preds.size() << " rows)\n";
    } else if (*eval) {
      const Dataset d = read_dataset_csv(eval_data);
      MetricsReport report;
      if (eval_holdout > 0.0) {
        if (eval_method_tag.empty()) {
          throw std::invalid_argument("--holdout needs --method to fit on the training part");
        }
        const HoldoutSplit split =
            holdout_split(d.n(), eval_holdout, RngStream(eval_seed).child("holdout"));
        const Dataset train = subset_rows(d, split.train);
        const Dataset held = subset_rows(d, split.held);
        GibbsConfig gibbs;
        gibbs.total_samples = eval_gibbs_total;
        gibbs.burn_in = eval_gibbs_burnin;
        const FittedModel model = fit_method(parse_method(eval_method_tag), train, gibbs,
                                             RngStream(eval_seed).child("fit"));
        const std::vector<JointRisk> preds = predict_dataset(model, held);
        if (eval_truth && !held.truth) {
          throw std::runtime_error("--truth given but the dataset has no true_* columns");
        }
        report = evaluate_model(preds, held.y1, held.y2,
                                eval_truth ? &*held.truth : nullptr);
        report.method = eval_method_tag;
      } else {
        if (eval_pred.empty()) {
          throw std::invalid_argument("evaluate needs --pred (or --holdout with --method)");
        }
        const std::vector<JointRisk> preds = read_predictions_csv(eval_pred);
        if (static_cast<Eigen::Index>(preds.size()) != d.n()) {
          throw std::runtime_error("prediction file has " + std::to_string(preds.size()) +
                                   " rows but the dataset has " + std::to_string(d.n()));
        }
        if (eval_truth && !d.truth) {
          throw std::runtime_error("--truth given but the dataset has no true_* columns");
        }
        report = evaluate_model(preds, d.y1, d.y2, eval_truth ? &*d.truth : nullptr);
      }
      write_metrics_json(eval_out, report);
      std::cout << "wrote " << eval_out << "\n";
    } else if (*figs) {
      const ResultsTable table = read_results_csv(figs_results);
      write_figure_data(table, figs_out);
      std::cout << "wrote figure data under " << figs_out << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
