#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "surprise/error.hpp"

namespace surprise {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One observation: covariates x and an optional response.
struct DataPoint {
  Vector x;
  std::optional<double> y;
};

/// z = (1, x); the leading entry is exactly 1.
struct AugmentedCovariate {
  Vector z;
};

AugmentedCovariate augment(const DataPoint& p);

struct LoadOptions {
  std::optional<std::string> response_column;
  bool standardize = false;
  /// When set, covariates are mapped through log(x + offset) before any
  /// standardization.
  std::optional<double> log_offset;
};

/**
 * Immutable in-memory dataset: an n x q covariate matrix plus an optional
 * response vector. Row-major dense storage; safe for concurrent reads.
 */
class Dataset {
 public:
  Dataset(RowMatrix x, std::optional<Vector> y, std::vector<std::string> column_names);

  static Dataset load_csv(const std::string& path, const LoadOptions& options);
  static Dataset load_csv(const std::string& path,
                          const std::optional<std::string>& response_column,
                          bool standardize) {
    return load_csv(path, LoadOptions{response_column, standardize, std::nullopt});
  }

  void save_csv(const std::string& path) const;

  std::size_t size() const { return static_cast<std::size_t>(x_.rows()); }
  int q() const { return static_cast<int>(x_.cols()); }
  /// Parameter dimension of a linear-index model on this data: q + 1.
  int dim() const { return q() + 1; }

  bool has_response() const { return y_.has_value(); }
  double response(std::size_t i) const { return (*y_)(static_cast<Eigen::Index>(i)); }
  const Vector& responses() const;

  const RowMatrix& covariates() const { return x_; }
  auto covariate_row(std::size_t i) const { return x_.row(static_cast<Eigen::Index>(i)); }

  DataPoint row(std::size_t i) const;

  const std::vector<std::string>& column_names() const { return names_; }
  const std::string& response_name() const { return response_name_; }

  bool standardized() const { return standardized_; }
  const Vector& column_means() const { return means_; }
  const Vector& column_scales() const { return scales_; }

  /// Undoes standardization; error when the dataset is not standardized.
  Dataset destandardized() const;

 private:
  RowMatrix x_;
  std::optional<Vector> y_;
  std::vector<std::string> names_;
  std::string response_name_;
  bool standardized_ = false;
  Vector means_;
  Vector scales_;

  friend Dataset standardize_columns(Dataset d);
};

/// Shifts every covariate column to mean 0 / sample sd 1; a zero-variance
/// column is an error (it would make downstream curvature singular).
Dataset standardize_columns(Dataset d);

}  // namespace surprise
