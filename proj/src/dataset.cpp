#include "surprise/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace surprise {

AugmentedCovariate augment(const DataPoint& p) {
  Vector z(p.x.size() + 1);
  z(0) = 1.0;
  z.tail(p.x.size()) = p.x;
  return AugmentedCovariate{std::move(z)};
}

Dataset::Dataset(RowMatrix x, std::optional<Vector> y, std::vector<std::string> column_names)
    : x_(std::move(x)), y_(std::move(y)), names_(std::move(column_names)) {
  if (x_.rows() < 1) throw ContractError("dataset must contain at least one row");
  if (!x_.allFinite())
    throw ContractError("dataset covariates contain non-finite entries");
  if (y_) {
    if (y_->size() != x_.rows())
      throw ContractError("response length does not match row count");
    if (!y_->allFinite()) throw ContractError("dataset responses contain non-finite entries");
  }
  if (names_.empty()) {
    names_.reserve(static_cast<std::size_t>(x_.cols()));
    for (int j = 0; j < x_.cols(); ++j) names_.push_back("x" + std::to_string(j + 1));
  }
  if (static_cast<Eigen::Index>(names_.size()) != x_.cols())
    throw ContractError("column name count does not match covariate count");
}

const Vector& Dataset::responses() const {
  if (!y_) throw ContractError("dataset has no response column");
  return *y_;
}

DataPoint Dataset::row(std::size_t i) const {
  DataPoint p;
  p.x = x_.row(static_cast<Eigen::Index>(i)).transpose();
  if (y_) p.y = (*y_)(static_cast<Eigen::Index>(i));
  return p;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_cell(const std::string& raw, std::size_t row, const std::string& column) {
  const std::string s = trim(raw);
  double value = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last)
    throw ParseError("row " + std::to_string(row) + ", column '" + column +
                     "': cannot parse '" + s + "' as a number");
  if (!std::isfinite(value))
    throw ParseError("row " + std::to_string(row) + ", column '" + column +
                     "': non-finite value '" + s + "'");
  return value;
}

}  // namespace

Dataset Dataset::load_csv(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);

  std::string header;
  if (!std::getline(in, header)) throw Error("empty dataset: " + path);
  std::vector<std::string> columns = split_line(header);
  for (auto& c : columns) c = trim(c);
  if (columns.empty()) throw ParseError("header row has no columns: " + path);

  int response_idx = -1;
  if (options.response_column) {
    for (std::size_t j = 0; j < columns.size(); ++j)
      if (columns[j] == *options.response_column) response_idx = static_cast<int>(j);
    if (response_idx < 0)
      throw ParseError("response column '" + *options.response_column + "' not found");
  }

  std::vector<double> values;
  std::size_t n = 0;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != columns.size())
      throw ParseError("row " + std::to_string(lineno) + ": expected " +
                       std::to_string(columns.size()) + " cells, found " +
                       std::to_string(cells.size()));
    for (std::size_t j = 0; j < cells.size(); ++j)
      values.push_back(parse_cell(cells[j], lineno, columns[j]));
    ++n;
  }
  if (n == 0) throw Error("empty dataset: " + path + " has a header but no rows");

  const std::size_t q = columns.size() - (response_idx >= 0 ? 1 : 0);
  if (q == 0) throw ParseError("dataset has no covariate columns");

  RowMatrix x(n, q);
  std::optional<Vector> y;
  if (response_idx >= 0) y = Vector(n);
  std::vector<std::string> names;
  for (std::size_t j = 0; j < columns.size(); ++j)
    if (static_cast<int>(j) != response_idx) names.push_back(columns[j]);

  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = 0;
    for (std::size_t j = 0; j < columns.size(); ++j) {
      const double v = values[i * columns.size() + j];
      if (static_cast<int>(j) == response_idx)
        (*y)(static_cast<Eigen::Index>(i)) = v;
      else
        x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k++)) = v;
    }
  }

  if (options.log_offset) {
    const double offset = *options.log_offset;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double shifted = x(i, j) + offset;
        if (shifted <= 0.0)
          throw ContractError("log transform: x + offset is not positive at row " +
                              std::to_string(i + 2) + ", column '" + names[j] + "'");
        x(i, j) = std::log(shifted);
      }
  }

  Dataset d(std::move(x), std::move(y), std::move(names));
  if (options.response_column) d.response_name_ = *options.response_column;
  if (options.standardize) d = standardize_columns(std::move(d));
  return d;
}

void Dataset::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot open file for writing: " + path);
  char buf[64];

  if (y_) out << (response_name_.empty() ? "y" : response_name_);
  for (std::size_t j = 0; j < names_.size(); ++j) {
    if (y_ || j > 0) out << ',';
    out << names_[j];
  }
  out << '\n';

  for (Eigen::Index i = 0; i < x_.rows(); ++i) {
    bool first = true;
    if (y_) {
      std::snprintf(buf, sizeof buf, "%.17g", (*y_)(i));
      out << buf;
      first = false;
    }
    for (Eigen::Index j = 0; j < x_.cols(); ++j) {
      if (!first) out << ',';
      std::snprintf(buf, sizeof buf, "%.17g", x_(i, j));
      out << buf;
      first = false;
    }
    out << '\n';
  }
}

Dataset standardize_columns(Dataset d) {
  const Eigen::Index n = d.x_.rows();
  if (n < 2) throw ContractError("standardization requires at least two rows");
  Vector means(d.x_.cols());
  Vector scales(d.x_.cols());
  for (Eigen::Index j = 0; j < d.x_.cols(); ++j) {
    const double mean = d.x_.col(j).mean();
    const double ss = (d.x_.col(j).array() - mean).square().sum();
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0)
      throw ContractError("column '" + d.names_[static_cast<std::size_t>(j)] +
                          "' has zero variance; cannot standardize");
    means(j) = mean;
    scales(j) = sd;
    d.x_.col(j) = (d.x_.col(j).array() - mean) / sd;
  }
  d.standardized_ = true;
  d.means_ = std::move(means);
  d.scales_ = std::move(scales);
  return d;
}

Dataset Dataset::destandardized() const {
  if (!standardized_) throw ContractError("dataset is not standardized");
  RowMatrix x = x_;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    x.col(j) = x.col(j).array() * scales_(j) + means_(j);
  Dataset d(std::move(x), y_, names_);
  d.response_name_ = response_name_;
  return d;
}

}  // namespace surprise
