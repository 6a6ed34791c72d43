#pragma once

#include <cstdint>
#include <vector>

#include "surprise/loss.hpp"
#include "surprise/numerics.hpp"

namespace surprise {

using Index = std::uint64_t;

/**
 * Weighted empirical risk (1/n) sum_i w_i l(d_i; theta) over a row subset,
 * with analytic gradient and Hessian. Sums are chunked reductions with a
 * fixed chunk grid, so results do not depend on the worker count.
 *
 * An empty index list means "all rows"; an empty weight list means unit
 * weights. The 1/n normalization uses the FULL dataset size, matching the
 * weighted estimating equation the subsample stands in for.
 */
class WeightedRisk : public NewtonObjective {
 public:
  WeightedRisk(const Dataset& data, const LossModel& model,
               std::vector<Index> indices = {}, std::vector<double> weights = {});

  void eval(const Vector& theta, double* value, Vector* grad, Matrix* hess) const override;

  std::size_t subset_size() const { return indices_.empty() ? data_.size() : indices_.size(); }

  /// Weighted average Hessian (1/n) sum_i w_i G(d_i; theta).
  Matrix average_hessian(const Vector& theta) const;
  /// Weighted score outer product (1/n) sum_i w_i^2 g_i g_i^T at theta.
  Matrix score_outer(const Vector& theta) const;
  /// Weighted score sum (1/n) sum_i w_i g(d_i; theta).
  Vector score_sum(const Vector& theta) const;

 private:
  const Dataset& data_;
  const LossModel& model_;
  std::vector<Index> indices_;
  std::vector<double> weights_;
};

}  // namespace surprise
