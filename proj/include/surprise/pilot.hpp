#pragma once

#include "surprise/risk.hpp"
#include "surprise/rng.hpp"

namespace surprise {

enum class PilotMethod { UniformMLE, WeightedCaseControl, External };

/// A pilot fit could not be produced.
class PilotError : public Error {
 public:
  PilotError(const std::string& what, SolverReport report) : Error(what), report_(report) {}
  const SolverReport& report() const { return report_; }

 private:
  SolverReport report_;
};

/**
 * Pilot parameter guess plus the full-data curvature average
 * (1/n) sum_i G(d_i; theta_tilde). The curvature is always evaluated over
 * the full dataset, never over the pilot subsample.
 */
struct PilotEstimate {
  Vector theta_tilde;
  Matrix a_tilde;
  PilotMethod method = PilotMethod::External;
  std::size_t pilot_size = 0;
};

/// Uniform-without-replacement subsample of pilot_size rows, fitted by the
/// damped Newton solver with equal weights.
PilotEstimate pilot_uniform_mle(const Dataset& data, const LossModel& model,
                                std::size_t pilot_size, Rng& rng);

/**
 * 50-50 case-control pilot for a binary response: pilot_size/2 rows from
 * each class (capped at the class size), logistic fit with weights
 * (class count)/(class sample count). Weights over the pilot sum to n.
 */
PilotEstimate pilot_wcc(const Dataset& data, std::size_t pilot_size, Rng& rng);

/// Wraps an externally supplied parameter; the curvature average is taken
/// under the TARGET loss model, whatever produced theta.
PilotEstimate pilot_external(const Vector& theta, const Dataset& data, const LossModel& model);

/// Uniform-subsample indices without replacement, in ascending order.
std::vector<Index> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng);

}  // namespace surprise
