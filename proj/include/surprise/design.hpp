#pragma once

#include "surprise/pilot.hpp"

namespace surprise {

/**
 * Sampling objective. Each kind leads to a different per-point kernel:
 *   Prediction            ||A~^(-1/2) g_i||
 *   EstimationDirection   |v^T A~^(-1) g_i|
 *   MSE                   ||A~^(-1) g_i||
 *   LCC                   |S(y_i, theta~^T z_i)|
 * with g_i the pilot-evaluated per-point gradient.
 */
struct Objective {
  enum class Kind { Prediction, EstimationDirection, MSE, LCC };
  Kind kind = Kind::Prediction;
  Vector direction;  // EstimationDirection only

  static Objective prediction() { return {Kind::Prediction, {}}; }
  static Objective mse() { return {Kind::MSE, {}}; }
  static Objective lcc() { return {Kind::LCC, {}}; }
  static Objective estimation_direction(Vector v);

  std::string name() const;
};

/// Per-point kernels at the pilot; nonnegative, length n.
Vector kernel(const Dataset& data, const LossModel& model, const PilotEstimate& pilot,
              const Objective& objective);

/**
 * Largest c with sum_i min(c k_i, 1) <= n r. Returns +infinity when even
 * capping every positive kernel at 1 cannot reach the rate (the plan then
 * takes prob 1 on every positive kernel). All-zero kernels are an error.
 */
double find_c(const Vector& kernels, double rate);

/// Kernels, rate constant and capped probabilities for one draw.
struct SamplingPlan {
  Vector kernels;
  double c = 0.0;
  Vector probs;
  double target_rate = 0.0;
  double min_prob = 0.0;

  /// Builds the plan: c from find_c, probs = min(c k_i, 1). A positive
  /// min_prob floors every probability afterwards (relaxing the rate
  /// constraint; off by default).
  static SamplingPlan make(Vector kernels, double rate, double min_prob = 0.0);
};

/// Rows with Delta_i = 1 and their Horvitz-Thompson weights 1/pi_i.
/// Indices are strictly increasing.
struct Subsample {
  std::vector<Index> indices;
  std::vector<double> weights;

  std::size_t size() const { return indices.size(); }
};

/// Independent Bernoulli(pi_i) selection. Parallel chunks use substreams
/// derived from the master stream's seed, so the draw is identical for
/// every worker count.
Subsample draw(const SamplingPlan& plan, Rng& rng);

}  // namespace surprise
