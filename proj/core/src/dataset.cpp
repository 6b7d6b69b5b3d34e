#include "mvrisk/dataset.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mvrisk {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_cell(const std::string& cell, const std::string& column, size_t row) {
  if (cell.empty()) {
    throw std::runtime_error("csv: missing value in column '" + column + "' at data row " +
                             std::to_string(row));
  }
  size_t pos = 0;
  double v;
  try {
    v = std::stod(cell, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("csv: non-numeric value '" + cell + "' in column '" + column +
                             "' at data row " + std::to_string(row));
  }
  while (pos < cell.size() && (cell[pos] == ' ' || cell[pos] == '\r')) ++pos;
  if (pos != cell.size()) {
    throw std::runtime_error("csv: non-numeric value '" + cell + "' in column '" + column +
                             "' at data row " + std::to_string(row));
  }
  return v;
}

int parse_binary(const std::string& cell, const std::string& column, size_t row) {
  const double v = parse_cell(cell, column, row);
  if (v != 0.0 && v != 1.0) {
    throw std::runtime_error("csv: column '" + column + "' must be 0/1, got '" + cell +
                             "' at data row " + std::to_string(row));
  }
  return static_cast<int>(v);
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  size_t e = s.find_last_not_of(" \t\r\n");
  return (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
}

void format_double(std::string& out, double v) {
  // shortest round-trip representation: written files reproduce the doubles
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty file " + path.string());
  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) h = trim(h);

  const std::vector<std::string> truth_cols = {"true_p11", "true_p10", "true_p01", "true_p00"};
  bool has_truth = false;
  size_t ncols = header.size();
  if (ncols >= 6 && std::equal(truth_cols.begin(), truth_cols.end(), header.end() - 4)) {
    has_truth = true;
    ncols -= 4;
  }
  if (ncols < 3 || header[ncols - 2] != "y1" || header[ncols - 1] != "y2") {
    throw std::runtime_error("csv: expected header x1,...,xP,y1,y2[,true_p11..true_p00] in " +
                             path.string());
  }
  const size_t p = ncols - 2;
  for (size_t j = 0; j < p; ++j) {
    if (header[j] != "x" + std::to_string(j + 1)) {
      throw std::runtime_error("csv: covariate column " + std::to_string(j + 1) +
                               " must be named x" + std::to_string(j + 1) + ", got '" +
                               header[j] + "'");
    }
  }

  std::vector<std::vector<double>> xrows;
  std::vector<int> y1, y2;
  SyntheticTruth truth;
  std::vector<double> m1, m2;
  size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error("csv: row " + std::to_string(row) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(header.size()));
    }
    std::vector<double> xr(p);
    for (size_t j = 0; j < p; ++j) xr[j] = parse_cell(cells[j], header[j], row);
    xrows.push_back(std::move(xr));
    y1.push_back(parse_binary(cells[p], "y1", row));
    y2.push_back(parse_binary(cells[p + 1], "y2", row));
    if (has_truth) {
      JointRisk jr;
      jr.p11 = parse_cell(cells[p + 2], "true_p11", row);
      jr.p10 = parse_cell(cells[p + 3], "true_p10", row);
      jr.p01 = parse_cell(cells[p + 4], "true_p01", row);
      jr.p00 = parse_cell(cells[p + 5], "true_p00", row);
      truth.joint.push_back(jr);
      m1.push_back(jr.marginal1());
      m2.push_back(jr.marginal2());
    }
  }

  Dataset d;
  d.covariate_names.reserve(p);
  for (size_t j = 0; j < p; ++j) d.covariate_names.push_back("x" + std::to_string(j + 1));
  d.X.resize(static_cast<Eigen::Index>(xrows.size()), static_cast<Eigen::Index>(p));
  d.y1.resize(static_cast<Eigen::Index>(y1.size()));
  d.y2.resize(static_cast<Eigen::Index>(y2.size()));
  for (size_t i = 0; i < xrows.size(); ++i) {
    for (size_t j = 0; j < p; ++j) d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = xrows[i][j];
    d.y1[static_cast<Eigen::Index>(i)] = y1[i];
    d.y2[static_cast<Eigen::Index>(i)] = y2[i];
  }
  if (has_truth) {
    truth.marginal1 = Eigen::Map<Eigen::VectorXd>(m1.data(), static_cast<Eigen::Index>(m1.size()));
    truth.marginal2 = Eigen::Map<Eigen::VectorXd>(m2.data(), static_cast<Eigen::Index>(m2.size()));
    d.truth = std::move(truth);
  }
  return d;
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data,
                       bool include_truth) {
  if (include_truth && !data.truth) {
    throw std::invalid_argument("write_dataset_csv: dataset carries no truth columns");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  std::string buf;
  for (const auto& name : data.covariate_names) {
    buf += name;
    buf += ',';
  }
  buf += "y1,y2";
  if (include_truth) buf += ",true_p11,true_p10,true_p01,true_p00";
  buf += '\n';
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < data.p(); ++j) {
      format_double(buf, data.X(i, j));
      buf += ',';
    }
    buf += std::to_string(data.y1[i]);
    buf += ',';
    buf += std::to_string(data.y2[i]);
    if (include_truth) {
      const JointRisk& jr = data.truth->joint[static_cast<size_t>(i)];
      for (double v : {jr.p11, jr.p10, jr.p01, jr.p00}) {
        buf += ',';
        format_double(buf, v);
      }
    }
    buf += '\n';
  }
  out << buf;
}

void write_predictions_csv(const std::filesystem::path& path,
                           const std::vector<JointRisk>& preds) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  std::string buf = "p11,p10,p01,p00,py1,py2\n";
  for (const auto& j : preds) {
    bool first = true;
    for (double v : {j.p11, j.p10, j.p01, j.p00, j.marginal1(), j.marginal2()}) {
      if (!first) buf += ',';
      format_double(buf, v);
      first = false;
    }
    buf += '\n';
  }
  out << buf;
}

std::vector<JointRisk> read_predictions_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty file " + path.string());
  auto header = split_csv_line(line);
  for (auto& h : header) h = trim(h);
  const std::vector<std::string> expected = {"p11", "p10", "p01", "p00", "py1", "py2"};
  if (std::vector<std::string>(header.begin(), header.end()) != expected) {
    throw std::runtime_error("csv: expected header p11,p10,p01,p00,py1,py2 in " + path.string());
  }
  std::vector<JointRisk> preds;
  size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split_csv_line(line);
    if (cells.size() != expected.size()) {
      throw std::runtime_error("csv: row " + std::to_string(row) + " has wrong cell count");
    }
    JointRisk j;
    j.p11 = parse_cell(cells[0], "p11", row);
    j.p10 = parse_cell(cells[1], "p10", row);
    j.p01 = parse_cell(cells[2], "p01", row);
    j.p00 = parse_cell(cells[3], "p00", row);
    preds.push_back(j);
  }
  return preds;
}

}  // namespace mvrisk
