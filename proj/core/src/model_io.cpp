#include "mvrisk/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mvrisk {

namespace {

using nlohmann::json;
constexpr int kSchemaVersion = 1;

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
  Eigen::VectorXd v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

json logistic_to_json(const UnivariateLogisticModel& m) {
  return json{{"intercept", m.intercept}, {"coefficients", vec_to_json(m.coefficients)}};
}

UnivariateLogisticModel logistic_from_json(const json& j) {
  UnivariateLogisticModel m;
  m.intercept = j.at("intercept").get<double>();
  m.coefficients = vec_from_json(j.at("coefficients"));
  return m;
}

json conditional_to_json(const ChainConditional& c) {
  return json{{"intercept", c.intercept},
              {"coefficients", vec_to_json(c.coefficients)},
              {"outcome_coef", c.outcome_coef}};
}

ChainConditional conditional_from_json(const json& j) {
  ChainConditional c;
  c.intercept = j.at("intercept").get<double>();
  c.coefficients = vec_from_json(j.at("coefficients"));
  c.outcome_coef = j.at("outcome_coef").get<double>();
  return c;
}

json stage2_to_json(const StackedStage2& s) {
  return json{{"intercept", s.intercept},
              {"weight_f1", s.weight_f1},
              {"weight_f2", s.weight_f2},
              {"direct", vec_to_json(s.direct)}};
}

StackedStage2 stage2_from_json(const json& j) {
  StackedStage2 s;
  s.intercept = j.at("intercept").get<double>();
  s.weight_f1 = j.at("weight_f1").get<double>();
  s.weight_f2 = j.at("weight_f2").get<double>();
  s.direct = vec_from_json(j.at("direct"));
  return s;
}

}  // namespace

const std::vector<Method>& all_methods() {
  static const std::vector<Method> m = {Method::univariate, Method::sr,  Method::pcc,
                                        Method::mlr,        Method::mlm, Method::mpm};
  return m;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::univariate: return "univariate";
    case Method::sr: return "sr";
    case Method::pcc: return "pcc";
    case Method::mlr: return "mlr";
    case Method::mlm: return "mlm";
    case Method::mpm: return "mpm";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  for (Method m : all_methods()) {
    if (method_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + name +
                              "'; expected one of univariate, sr, pcc, mlr, mlm, mpm");
}

Method model_method(const FittedModel& m) {
  return static_cast<Method>(m.index());
}

Eigen::Index model_covariate_count(const FittedModel& m) {
  return std::visit(
      [](const auto& model) -> Eigen::Index {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, UnivariatePairModel>) {
          return model.outcome1.coefficients.size();
        } else if constexpr (std::is_same_v<T, StackedModel>) {
          return model.stage1_outcome1.coefficients.size();
        } else if constexpr (std::is_same_v<T, PccModel>) {
          return model.perm1_marginal.coefficients.size();
        } else if constexpr (std::is_same_v<T, MultinomialModel>) {
          return model.coefficients[0].size();
        } else if constexpr (std::is_same_v<T, GumbelMvlModel>) {
          return model.beta1.size() - 1;
        } else {
          return model.mean_beta1.size() - 1;
        }
      },
      m);
}

JointRisk predict_joint(const FittedModel& m, const Eigen::VectorXd& x) {
  return std::visit(
      [&x](const auto& model) -> JointRisk {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, UnivariatePairModel>) {
          return predict_univariate_joint(model.outcome1, model.outcome2, x);
        } else if constexpr (std::is_same_v<T, StackedModel>) {
          return predict_stacked_joint(model, x);
        } else if constexpr (std::is_same_v<T, PccModel>) {
          return predict_pcc(model, x);
        } else if constexpr (std::is_same_v<T, MultinomialModel>) {
          return predict_multinomial(model, x);
        } else if constexpr (std::is_same_v<T, GumbelMvlModel>) {
          return predict_mvl(model, x);
        } else {
          return predict_probit(model, x);
        }
      },
      m);
}

void save_model_json(const std::filesystem::path& path, const FittedModel& model,
                     const std::vector<std::string>& covariate_names) {
  json doc;
  doc["version"] = kSchemaVersion;
  doc["method"] = method_name(model_method(model));
  doc["covariates"] = covariate_names;

  json body;
  std::visit(
      [&body](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UnivariatePairModel>) {
          body["outcome1"] = logistic_to_json(m.outcome1);
          body["outcome2"] = logistic_to_json(m.outcome2);
        } else if constexpr (std::is_same_v<T, StackedModel>) {
          body["stage1_outcome1"] = logistic_to_json(m.stage1_outcome1);
          body["stage1_outcome2"] = logistic_to_json(m.stage1_outcome2);
          body["stage2_outcome1"] = stage2_to_json(m.stage2_outcome1);
          body["stage2_outcome2"] = stage2_to_json(m.stage2_outcome2);
          body["lambda1"] = m.lambda1;
          body["lambda2"] = m.lambda2;
        } else if constexpr (std::is_same_v<T, PccModel>) {
          body["perm1_marginal"] = logistic_to_json(m.perm1_marginal);
          body["perm1_conditional"] = conditional_to_json(m.perm1_conditional);
          body["perm2_marginal"] = logistic_to_json(m.perm2_marginal);
          body["perm2_conditional"] = conditional_to_json(m.perm2_conditional);
        } else if constexpr (std::is_same_v<T, MultinomialModel>) {
          body["categories"] = {"11", "10", "01"};
          body["intercepts"] = {m.intercepts[0], m.intercepts[1], m.intercepts[2]};
          body["coefficients"] = {vec_to_json(m.coefficients[0]), vec_to_json(m.coefficients[1]),
                                  vec_to_json(m.coefficients[2])};
        } else if constexpr (std::is_same_v<T, GumbelMvlModel>) {
          body["beta1"] = vec_to_json(m.beta1);
          body["beta2"] = vec_to_json(m.beta2);
          body["rho"] = m.rho;
          body["rho_envelope"] = {m.rho_envelope_lo, m.rho_envelope_hi};
          body["boundary_solution"] = m.boundary_solution;
        } else {
          body["mean_beta1"] = vec_to_json(m.mean_beta1);
          body["mean_beta2"] = vec_to_json(m.mean_beta2);
          body["mean_rho"] = m.mean_rho;
          body["sd_beta1"] = vec_to_json(m.sd_beta1);
          body["sd_beta2"] = vec_to_json(m.sd_beta2);
          body["sd_rho"] = m.sd_rho;
          body["chain"] = json{{"total_samples", m.config.total_samples},
                               {"burn_in", m.burn_in},
                               {"retained", m.retained},
                               {"rho_acceptance_rate", m.rho_acceptance_rate},
                               {"rho_proposal_scale", m.config.rho_proposal_scale},
                               {"positive_rho_prior", m.config.positive_rho_prior},
                               {"seed", m.config.seed}};
        }
      },
      model);
  doc["model"] = std::move(body);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

LoadedModel load_model_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  json doc;
  in >> doc;
  if (doc.at("version").get<int>() != kSchemaVersion) {
    throw std::runtime_error("model file '" + path.string() + "': unsupported version");
  }
  LoadedModel loaded;
  loaded.covariate_names = doc.at("covariates").get<std::vector<std::string>>();
  const Method method = parse_method(doc.at("method").get<std::string>());
  const json& body = doc.at("model");

  switch (method) {
    case Method::univariate: {
      UnivariatePairModel m;
      m.outcome1 = logistic_from_json(body.at("outcome1"));
      m.outcome2 = logistic_from_json(body.at("outcome2"));
      loaded.model = std::move(m);
      break;
    }
    case Method::sr: {
      StackedModel m;
      m.stage1_outcome1 = logistic_from_json(body.at("stage1_outcome1"));
      m.stage1_outcome2 = logistic_from_json(body.at("stage1_outcome2"));
      m.stage2_outcome1 = stage2_from_json(body.at("stage2_outcome1"));
      m.stage2_outcome2 = stage2_from_json(body.at("stage2_outcome2"));
      m.lambda1 = body.at("lambda1").get<double>();
      m.lambda2 = body.at("lambda2").get<double>();
      loaded.model = std::move(m);
      break;
    }
    case Method::pcc: {
      PccModel m;
      m.perm1_marginal = logistic_from_json(body.at("perm1_marginal"));
      m.perm1_conditional = conditional_from_json(body.at("perm1_conditional"));
      m.perm2_marginal = logistic_from_json(body.at("perm2_marginal"));
      m.perm2_conditional = conditional_from_json(body.at("perm2_conditional"));
      loaded.model = std::move(m);
      break;
    }
    case Method::mlr: {
      MultinomialModel m;
      for (int k = 0; k < 3; ++k) {
        m.intercepts[k] = body.at("intercepts")[k].get<double>();
        m.coefficients[k] = vec_from_json(body.at("coefficients")[k]);
      }
      loaded.model = std::move(m);
      break;
    }
    case Method::mlm: {
      GumbelMvlModel m;
      m.beta1 = vec_from_json(body.at("beta1"));
      m.beta2 = vec_from_json(body.at("beta2"));
      m.rho = body.at("rho").get<double>();
      m.rho_envelope_lo = body.at("rho_envelope")[0].get<double>();
      m.rho_envelope_hi = body.at("rho_envelope")[1].get<double>();
      m.boundary_solution = body.at("boundary_solution").get<bool>();
      loaded.model = std::move(m);
      break;
    }
    case Method::mpm: {
      ProbitPosterior m;
      m.mean_beta1 = vec_from_json(body.at("mean_beta1"));
      m.mean_beta2 = vec_from_json(body.at("mean_beta2"));
      m.mean_rho = body.at("mean_rho").get<double>();
      m.sd_beta1 = vec_from_json(body.at("sd_beta1"));
      m.sd_beta2 = vec_from_json(body.at("sd_beta2"));
      m.sd_rho = body.at("sd_rho").get<double>();
      const json& chain = body.at("chain");
      m.config.total_samples = chain.at("total_samples").get<int>();
      m.burn_in = chain.at("burn_in").get<int>();
      m.config.burn_in = m.burn_in;
      m.retained = chain.at("retained").get<int>();
      m.rho_acceptance_rate = chain.at("rho_acceptance_rate").get<double>();
      m.config.rho_proposal_scale = chain.at("rho_proposal_scale").get<double>();
      m.config.positive_rho_prior = chain.at("positive_rho_prior").get<bool>();
      m.config.seed = chain.at("seed").get<std::uint64_t>();
      loaded.model = std::move(m);
      break;
    }
  }
  return loaded;
}

void write_metrics_json(const std::filesystem::path& path, const MetricsReport& report) {
  json doc;
  doc["version"] = kSchemaVersion;
  if (!report.method.empty()) doc["method"] = report.method;
  if (!report.scenario.empty()) doc["scenario"] = report.scenario;
  if (report.iteration >= 0) doc["iteration"] = report.iteration;
  json targets;
  for (int t = 0; t < 5; ++t) {
    const TargetMetrics& tm = report.by_target[t];
    json entry{{"citl", tm.citl}, {"slope", tm.slope}, {"auc", tm.auc}};
    if (tm.mse) entry["mse"] = *tm.mse;
    targets[target_names()[t]] = std::move(entry);
  }
  doc["targets"] = std::move(targets);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

}  // namespace mvrisk
