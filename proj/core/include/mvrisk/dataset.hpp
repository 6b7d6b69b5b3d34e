#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mvrisk/joint_risk.hpp"

namespace mvrisk {

// Per-row data-generating risks, kept alongside synthetic data so MSE against
// the truth never has to re-derive them.
struct SyntheticTruth {
  Eigen::VectorXd marginal1;
  Eigen::VectorXd marginal2;
  std::vector<JointRisk> joint;
};

struct Dataset {
  std::vector<std::string> covariate_names;  // x1..xP
  Eigen::MatrixXd X;                         // n x P
  Eigen::VectorXi y1;
  Eigen::VectorXi y2;
  std::optional<SyntheticTruth> truth;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

// CSV schema: x1,...,xP,y1,y2[,true_p11,true_p10,true_p01,true_p00].
// Strict parse: missing or non-numeric cells are a hard error.
Dataset read_dataset_csv(const std::filesystem::path& path);
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data,
                       bool include_truth);

// Prediction schema: p11,p10,p01,p00,py1,py2.
void write_predictions_csv(const std::filesystem::path& path,
                           const std::vector<JointRisk>& preds);
std::vector<JointRisk> read_predictions_csv(const std::filesystem::path& path);

}  // namespace mvrisk
