#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "mvrisk/metrics.hpp"
#include "mvrisk/models/gumbel.hpp"
#include "mvrisk/models/multinomial.hpp"
#include "mvrisk/models/pcc.hpp"
#include "mvrisk/models/probit.hpp"
#include "mvrisk/models/stacked.hpp"
#include "mvrisk/models/univariate.hpp"

namespace mvrisk {

enum class Method : int { univariate = 0, sr, pcc, mlr, mlm, mpm };

const std::vector<Method>& all_methods();
std::string method_name(Method m);
// Throws std::invalid_argument listing the six recognized tags.
Method parse_method(const std::string& name);

using FittedModel = std::variant<UnivariatePairModel, StackedModel, PccModel,
                                 MultinomialModel, GumbelMvlModel, ProbitPosterior>;

Method model_method(const FittedModel& m);
Eigen::Index model_covariate_count(const FittedModel& m);
JointRisk predict_joint(const FittedModel& m, const Eigen::VectorXd& x);

// Versioned JSON document: method tag, covariate names, coefficient blocks,
// and fit diagnostics. Posterior draws are summarized (means/sds), not
// stored; plug-in prediction from a reloaded model matches the in-process
// plug-in prediction exactly.
void save_model_json(const std::filesystem::path& path, const FittedModel& model,
                     const std::vector<std::string>& covariate_names);

struct LoadedModel {
  FittedModel model;
  std::vector<std::string> covariate_names;
};
LoadedModel load_model_json(const std::filesystem::path& path);

void write_metrics_json(const std::filesystem::path& path, const MetricsReport& report);

}  // namespace mvrisk
