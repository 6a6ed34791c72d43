#pragma once

#include "surprise/montecarlo.hpp"

namespace surprise {

/// Root mean squared error of mean predictions (inverse link of the fitted
/// index) over the test set.
double prediction_rmse(const Dataset& test, const LossModel& model, const Vector& theta);

/// The per-fold metric for a finished fit; train is unused by the formula
/// and kept for signature symmetry with the fold driver.
double armse(const Dataset& train, const Dataset& test, const FitResult& fit,
             const LossModel& model);

struct ArmseOptions {
  int folds = 10;
  Family family = Family::PoissonLog;
  PilotSpec pilot;
  Objective objective = Objective::lcc();
  /// Expected surprise subsample size per fold; uniform gets this plus the
  /// pilot size.
  std::size_t subsample_target = 10000;
  std::uint64_t seed = 1;
};

struct ArmseReport {
  double full = 0.0;
  double surprise = 0.0;
  double uniform = 0.0;
  std::vector<double> full_folds;
  std::vector<double> surprise_folds;
  std::vector<double> uniform_folds;
};

/**
 * K-fold cross-validation ARMSE on user data: in each fold the model is
 * trained three ways (full training data, surprise-sampled HT fit, uniform
 * subsample MLE at matched total budget) and scored on the held-out part.
 */
ArmseReport kfold_armse(const Dataset& data, const ArmseOptions& options);

}  // namespace surprise
