#pragma once

#include <optional>

#include "surprise/design.hpp"

namespace surprise {

/// The HT fit could not be produced at all.
class FitError : public Error {
 public:
  FitError(const std::string& what, SolverReport report) : Error(what), report_(report) {}
  const SolverReport& report() const { return report_; }

 private:
  SolverReport report_;
};

/**
 * Horvitz-Thompson weighted fit: point estimate, plug-in sandwich
 * covariance A^-1 V A^-1 / n, standard errors and default 95% Wald
 * intervals. covariance is absent when the weighted curvature was
 * singular; the point estimate is still valid then.
 */
struct FitResult {
  Vector theta_hat;
  std::optional<Matrix> covariance;
  Vector std_errors;                                 // empty when covariance absent
  std::vector<std::pair<double, double>> wald_ci;    // at ci_level
  double ci_level = 0.95;
  std::size_t subsample_size = 0;
  SolverReport solver;
};

/// Minimizes sum_i w_i l(d_i;theta) over the subsample, started at theta0
/// (pass the pilot estimate), then forms the plug-in sandwich covariance.
FitResult fit_ht(const Dataset& data, const LossModel& model, const Subsample& sub,
                 const Vector& theta0);

std::pair<double, double> wald_interval(const FitResult& fit, int coordinate, double level);

/**
 * The local case-control baseline: unweighted logistic fit on the
 * subsample plus the pilot parameter. Defined for logistic loss and a
 * subsample drawn with probabilities |y - p(pilot index)| (rate constant 1).
 */
Vector lcc_adjusted_fit(const Dataset& data, const Subsample& sub, const PilotEstimate& pilot);

/// Flat key=value rendering of a fit (one line per entry).
std::string to_key_value(const FitResult& fit, const std::vector<std::string>& coordinate_names);

/// CSV rows: coordinate,estimate,se,ci_lo,ci_hi (se/ci blank without covariance).
std::string to_csv(const FitResult& fit, const std::vector<std::string>& coordinate_names);

/// Coordinate labels: "intercept" then the covariate column names.
std::vector<std::string> coordinate_names(const Dataset& data);

}  // namespace surprise
