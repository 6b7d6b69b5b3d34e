#include "mvrisk/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mvrisk/metrics.hpp"

namespace mvrisk {

namespace {

const std::array<std::string, 4> kMetricNames = {"citl", "slope", "auc", "mse"};

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  // shortest representation that parses back to the same double, so
  // aggregate files are exact group-bys of what results.csv says
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string sanitize_status(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s.empty() ? "error" : s;
}

// Type-7 (linear interpolation) quantile of an already sorted vector.
double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return std::nan("");
  if (sorted.size() == 1) return sorted[0];
  const double h = p * (static_cast<double>(sorted.size()) - 1.0);
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

struct GroupStats {
  double mean = 0.0;
  double q025 = 0.0;
  double q975 = 0.0;
  size_t n = 0;
};

GroupStats summarize(std::vector<double> values) {
  GroupStats s;
  s.n = values.size();
  if (values.empty()) {
    s.mean = s.q025 = s.q975 = std::nan("");
    return s;
  }
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  s.q025 = quantile_sorted(values, 0.025);
  s.q975 = quantile_sorted(values, 0.975);
  return s;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

FittedModel fit_method(Method method, const Dataset& dev, const GibbsConfig& gibbs,
                       RngStream rng) {
  switch (method) {
    case Method::univariate:
      return fit_univariate_pair(dev.X, dev.y1, dev.y2);
    case Method::sr:
      return fit_stacked(dev.X, dev.y1, dev.y2, rng.child("cv-folds"));
    case Method::pcc:
      return fit_pcc(dev.X, dev.y1, dev.y2);
    case Method::mlr:
      return fit_multinomial(dev.X, dev.y1, dev.y2);
    case Method::mlm:
      return fit_mvl(dev.X, dev.y1, dev.y2);
    case Method::mpm: {
      GibbsConfig cfg = gibbs;
      cfg.seed = rng.child("gibbs").seed();
      return fit_probit(dev.X, dev.y1, dev.y2, cfg);
    }
  }
  throw std::invalid_argument("fit_method: unknown method");
}

std::vector<JointRisk> predict_dataset(const FittedModel& model, const Dataset& data) {
  if (model_covariate_count(model) != data.p()) {
    throw std::invalid_argument("predict_dataset: covariate dimension mismatch");
  }
  std::vector<JointRisk> preds(static_cast<size_t>(data.n()));
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    preds[static_cast<size_t>(i)] = predict_joint(model, data.X.row(i).transpose());
  }
  return preds;
}

ResultsTable run_simulation(const SimulationPlan& plan) {
  if (plan.iterations < 1) throw std::invalid_argument("run_simulation: iterations must be >= 1");
  if (plan.methods.empty()) throw std::invalid_argument("run_simulation: empty method set");
  if (plan.scenarios.empty()) throw std::invalid_argument("run_simulation: empty scenario list");

  struct Task {
    size_t scenario_index;
    int iteration;
  };
  std::vector<Task> tasks;
  tasks.reserve(plan.scenarios.size() * static_cast<size_t>(plan.iterations));
  for (size_t s = 0; s < plan.scenarios.size(); ++s) {
    for (int it = 0; it < plan.iterations; ++it) tasks.push_back({s, it});
  }
  std::vector<std::vector<ResultRow>> buckets(tasks.size());

  const RngStream root(plan.base_seed);
  auto run_task = [&](size_t t) {
    const Task& task = tasks[t];
    const Scenario& sc = plan.scenarios[task.scenario_index];
    const RngStream task_stream = root.child(sc.tag).child(static_cast<std::uint64_t>(task.iteration));
    std::vector<ResultRow>& rows = buckets[t];

    Dataset dev, val;
    try {
      dev = generate_dataset(sc.development, task_stream.child("dev-data"));
      val = generate_dataset(sc.validation, task_stream.child("val-data"));
    } catch (const std::exception& e) {
      for (Method m : plan.methods) {
        rows.push_back({sc.tag, sc.rho, task.iteration, method_name(m), "-", "error",
                        std::nan(""), sanitize_status(e.what())});
      }
      return;
    }

    for (Method m : plan.methods) {
      const std::string name = method_name(m);
      try {
        const FittedModel model = fit_method(m, dev, plan.gibbs, task_stream);
        const std::vector<JointRisk> preds = predict_dataset(model, val);
        const MetricsReport report = evaluate_model(preds, val.y1, val.y2, &*val.truth);
        for (int t5 = 0; t5 < 5; ++t5) {
          const TargetMetrics& tm = report.by_target[t5];
          const std::string& target = target_names()[t5];
          rows.push_back({sc.tag, sc.rho, task.iteration, name, target, "citl", tm.citl, "ok"});
          rows.push_back({sc.tag, sc.rho, task.iteration, name, target, "slope", tm.slope, "ok"});
          rows.push_back({sc.tag, sc.rho, task.iteration, name, target, "auc", tm.auc, "ok"});
          if (tm.mse) {
            rows.push_back({sc.tag, sc.rho, task.iteration, name, target, "mse", *tm.mse, "ok"});
          }
        }
      } catch (const std::exception& e) {
        rows.push_back({sc.tag, sc.rho, task.iteration, name, "-", "error", std::nan(""),
                        sanitize_status(e.what())});
      }
    }
  };

  unsigned n_threads = plan.threads > 0 ? static_cast<unsigned>(plan.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(tasks.size()));
  if (n_threads <= 1) {
    for (size_t t = 0; t < tasks.size(); ++t) run_task(t);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w) {
      workers.emplace_back([&]() {
        for (;;) {
          const size_t t = next.fetch_add(1);
          if (t >= tasks.size()) return;
          run_task(t);
        }
      });
    }
    for (auto& th : workers) th.join();
  }

  // Buckets are concatenated in task order, so output never depends on
  // scheduling.
  ResultsTable table;
  for (auto& bucket : buckets) {
    table.rows.insert(table.rows.end(), bucket.begin(), bucket.end());
  }

  if (!plan.out_dir.empty()) {
    std::filesystem::create_directories(plan.out_dir);
    const auto results_path = plan.out_dir / "results.csv";
    write_results_csv(results_path, table);
    // Summaries aggregate the file contents, not the in-memory doubles, so
    // re-running the group-by on results.csv reproduces them exactly.
    const ResultsTable parsed = read_results_csv(results_path);
    write_summary_csv(plan.out_dir / "summary.csv", parsed);
  }
  return table;
}

void write_results_csv(const std::filesystem::path& path, const ResultsTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  std::string buf = "scenario,rho,iteration,method,target,metric,value,status\n";
  for (const ResultRow& r : table.rows) {
    buf += r.scenario;
    buf += ',';
    buf += format_value(r.rho);
    buf += ',';
    buf += std::to_string(r.iteration);
    buf += ',';
    buf += r.method;
    buf += ',';
    buf += r.target;
    buf += ',';
    buf += r.metric;
    buf += ',';
    buf += format_value(r.value);
    buf += ',';
    buf += r.status;
    buf += '\n';
  }
  out << buf;
}

ResultsTable read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("results csv: empty file");
  if (split_line(line) != std::vector<std::string>{"scenario", "rho", "iteration", "method",
                                                   "target", "metric", "value", "status"}) {
    throw std::runtime_error("results csv: unexpected header in " + path.string());
  }
  ResultsTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != 8) throw std::runtime_error("results csv: malformed row");
    ResultRow r;
    r.scenario = cells[0];
    r.rho = std::stod(cells[1]);
    r.iteration = std::stoi(cells[2]);
    r.method = cells[3];
    r.target = cells[4];
    r.metric = cells[5];
    r.value = std::stod(cells[6]);
    r.status = cells[7];
    table.rows.push_back(std::move(r));
  }
  return table;
}

namespace {

// Key preserving first-seen order so aggregate files stay deterministic.
template <typename K>
class OrderedGroups {
 public:
  std::vector<double>& operator[](const K& key) {
    auto it = index_.find(key);
    if (it == index_.end()) {
      index_.emplace(key, keys_.size());
      keys_.push_back(key);
      values_.emplace_back();
      return values_.back();
    }
    return values_[it->second];
  }
  const std::vector<K>& keys() const { return keys_; }
  const std::vector<double>& values_at(size_t i) const { return values_[i]; }

 private:
  std::map<K, size_t> index_;
  std::vector<K> keys_;
  std::vector<std::vector<double>> values_;
};

}  // namespace

void write_summary_csv(const std::filesystem::path& path, const ResultsTable& table) {
  using Key = std::tuple<std::string, double, std::string, std::string, std::string>;
  OrderedGroups<Key> groups;
  for (const ResultRow& r : table.rows) {
    if (r.status != "ok") continue;
    groups[Key{r.scenario, r.rho, r.method, r.target, r.metric}].push_back(r.value);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  std::string buf = "scenario,rho,method,target,metric,mean,q2.5,q97.5,n\n";
  for (size_t i = 0; i < groups.keys().size(); ++i) {
    const auto& [scenario, rho, method, target, metric] = groups.keys()[i];
    const GroupStats s = summarize(groups.values_at(i));
    buf += scenario;
    buf += ',';
    buf += format_value(rho);
    buf += ',';
    buf += method;
    buf += ',';
    buf += target;
    buf += ',';
    buf += metric;
    buf += ',';
    buf += format_value(s.mean);
    buf += ',';
    buf += format_value(s.q025);
    buf += ',';
    buf += format_value(s.q975);
    buf += ',';
    buf += std::to_string(s.n);
    buf += '\n';
  }
  out << buf;
}

void write_figure_data(const ResultsTable& table, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::array<std::string, 4> figure_of_metric = {"figure1", "figure2", "figure3",
                                                       "figure4"};
  for (int family = 0; family < 2; ++family) {
    const bool sensitivity = family == 1;
    bool family_present = false;
    for (const ResultRow& r : table.rows) {
      if (r.scenario.starts_with(sensitivity ? "sens" : "base")) {
        family_present = true;
        break;
      }
    }
    if (!family_present) continue;

    for (int joint = 1; joint >= 0; --joint) {
      const std::vector<std::string> targets =
          joint ? std::vector<std::string>{"P11", "P10", "P01"}
                : std::vector<std::string>{"PY1", "PY2"};
      for (size_t mi = 0; mi < kMetricNames.size(); ++mi) {
        using Key = std::tuple<double, std::string, std::string>;  // rho, method, target
        OrderedGroups<Key> groups;
        for (const ResultRow& r : table.rows) {
          if (r.status != "ok" || r.metric != kMetricNames[mi]) continue;
          if (!r.scenario.starts_with(sensitivity ? "sens" : "base")) continue;
          if (std::find(targets.begin(), targets.end(), r.target) == targets.end()) continue;
          groups[Key{r.rho, r.method, r.target}].push_back(r.value);
        }
        std::string name = (joint ? "" : "supp_") + figure_of_metric[mi] + "_" +
                           kMetricNames[mi] + (joint ? "_joint" : "_marginal") +
                           (sensitivity ? "_sensitivity" : "") + ".csv";
        std::ofstream out(out_dir / name);
        if (!out) throw std::runtime_error("cannot write figure data " + name);
        std::string buf = "rho,method,target,mean,q2.5,q97.5\n";
        std::vector<std::pair<Key, size_t>> keyed;
        for (size_t i = 0; i < groups.keys().size(); ++i) keyed.emplace_back(groups.keys()[i], i);
        std::sort(keyed.begin(), keyed.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [key, i] : keyed) {
          const GroupStats s = summarize(groups.values_at(i));
          const auto& [rho, method, target] = key;
          buf += format_value(rho);
          buf += ',';
          buf += method;
          buf += ',';
          buf += target;
          buf += ',';
          buf += format_value(s.mean);
          buf += ',';
          buf += format_value(s.q025);
          buf += ',';
          buf += format_value(s.q975);
          buf += '\n';
        }
        out << buf;
      }
    }
  }
}

HoldoutSplit holdout_split(Eigen::Index n, double fraction, RngStream rng) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("holdout_split: fraction must be inside (0,1)");
  }
  std::vector<Eigen::Index> idx(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
  for (size_t i = idx.size(); i > 1; --i) {
    std::swap(idx[i - 1], idx[static_cast<size_t>(rng.next_u64() % i)]);
  }
  const auto held_n = static_cast<size_t>(std::lround(fraction * static_cast<double>(n)));
  HoldoutSplit split;
  split.held.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(held_n));
  split.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(held_n), idx.end());
  std::sort(split.held.begin(), split.held.end());
  std::sort(split.train.begin(), split.train.end());
  return split;
}

std::vector<Table1Row> compute_table1(std::uint64_t seed, int iterations, int n,
                                      bool sensitivity) {
  if (iterations < 1) throw std::invalid_argument("compute_table1: iterations must be >= 1");
  std::vector<Table1Row> rows;
  const RngStream root = RngStream(seed).child("table1");
  for (const Scenario& sc : scenario_grid()) {
    if (sc.sensitivity != sensitivity) continue;
    GenConfig cfg = sc.development;
    cfg.n = n;
    double n11 = 0.0, n10 = 0.0, n01 = 0.0, n1 = 0.0, n2 = 0.0, total = 0.0;
    const RngStream sc_stream = root.child(sc.tag);
    for (int it = 0; it < iterations; ++it) {
      const Dataset d = generate_dataset(cfg, sc_stream.child(static_cast<std::uint64_t>(it)));
      for (Eigen::Index i = 0; i < d.n(); ++i) {
        const int a = d.y1[i], b = d.y2[i];
        n11 += a * b;
        n10 += a * (1 - b);
        n01 += (1 - a) * b;
        n1 += a;
        n2 += b;
      }
      total += static_cast<double>(d.n());
    }
    Table1Row row;
    row.rho = sc.rho;
    row.p11 = n11 / total;
    row.p10 = n10 / total;
    row.p01 = n01 / total;
    const double m1 = n1 / total;
    const double m2 = n2 / total;
    row.corr = (row.p11 - m1 * m2) /
               std::sqrt(m1 * (1.0 - m1) * m2 * (1.0 - m2));
    rows.push_back(row);
  }
  return rows;
}

void write_table1_csv(const std::filesystem::path& path, const std::vector<Table1Row>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  std::string buf = "rho,corr,p11,p10,p01\n";
  for (const Table1Row& r : rows) {
    buf += format_value(r.rho);
    buf += ',';
    buf += format_value(r.corr);
    buf += ',';
    buf += format_value(r.p11);
    buf += ',';
    buf += format_value(r.p10);
    buf += ',';
    buf += format_value(r.p01);
    buf += '\n';
  }
  out << buf;
}

}  // namespace mvrisk
