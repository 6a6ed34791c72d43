#include "surprise/armse.hpp"

#include <cmath>
#include <numeric>

namespace surprise {

double prediction_rmse(const Dataset& test, const LossModel& model, const Vector& theta) {
  if (!test.has_response()) throw ContractError("RMSE requires test responses");
  const auto& x = test.covariates();
  const Vector& y = test.responses();
  const Vector t = (x * theta.tail(theta.size() - 1)).array() + theta(0);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double r = y(i) - model.inverse_link(t(i));
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(t.size()));
}

double armse(const Dataset& /*train*/, const Dataset& test, const FitResult& fit,
             const LossModel& model) {
  return prediction_rmse(test, model, fit.theta_hat);
}

namespace {

Dataset take_rows(const Dataset& data, const std::vector<Index>& rows) {
  RowMatrix x(rows.size(), data.q());
  Vector y(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    x.row(static_cast<Eigen::Index>(k)) = data.covariate_row(rows[k]);
    y(static_cast<Eigen::Index>(k)) = data.response(rows[k]);
  }
  return Dataset(std::move(x), std::move(y), data.column_names());
}

}  // namespace

ArmseReport kfold_armse(const Dataset& data, const ArmseOptions& options) {
  if (!data.has_response()) throw ContractError("ARMSE requires a response column");
  if (options.folds < 2) throw ContractError("need at least 2 folds");
  const std::size_t n = data.size();
  if (n < static_cast<std::size_t>(options.folds))
    throw ContractError("fewer rows than folds");

  LossModel model(options.family, data.dim());
  Rng master(options.seed);

  // Random fold assignment by a permutation of the row indices.
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), Index{0});
  Rng perm_rng = master.substream(stream::kTest);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(perm_rng.below(i));
    std::swap(perm[i - 1], perm[j]);
  }

  ArmseReport report;
  for (int fold = 0; fold < options.folds; ++fold) {
    const std::size_t lo = n * static_cast<std::size_t>(fold) /
                           static_cast<std::size_t>(options.folds);
    const std::size_t hi = n * static_cast<std::size_t>(fold + 1) /
                           static_cast<std::size_t>(options.folds);
    std::vector<Index> test_rows(perm.begin() + static_cast<std::ptrdiff_t>(lo),
                                 perm.begin() + static_cast<std::ptrdiff_t>(hi));
    std::vector<Index> train_rows;
    train_rows.reserve(n - test_rows.size());
    train_rows.insert(train_rows.end(), perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(lo));
    train_rows.insert(train_rows.end(), perm.begin() + static_cast<std::ptrdiff_t>(hi), perm.end());

    const Dataset train = take_rows(data, train_rows);
    const Dataset test = take_rows(data, test_rows);
    Rng fold_rng = master.substream(stream::kGenerate, static_cast<std::uint64_t>(fold));

    // Full-training-data fit (the benchmark).
    WeightedRisk full_risk(train, model);
    auto [theta_full, rep_full] = newton_minimize(full_risk, Vector::Zero(model.dim()));
    if (!rep_full.converged) throw FitError("full fit did not converge", rep_full);
    report.full_folds.push_back(prediction_rmse(test, model, theta_full));

    // Surprise-sampled HT fit.
    Rng pilot_rng = fold_rng.substream(stream::kPilot);
    PilotEstimate pilot = pilot_uniform_mle(train, model, options.pilot.size, pilot_rng);
    Vector k = kernel(train, model, pilot, options.objective);
    const double rate = std::min(
        static_cast<double>(options.subsample_target) / static_cast<double>(train.size()),
        1.0 - 1e-9);
    SamplingPlan plan = SamplingPlan::make(std::move(k), rate);
    Rng draw_rng = fold_rng.substream(stream::kDraw);
    Subsample sub = draw(plan, draw_rng);
    FitResult fit = fit_ht(train, model, sub, pilot.theta_tilde);
    report.surprise_folds.push_back(armse(train, test, fit, model));

    // Uniform subsample MLE at matched total budget.
    Rng unif_rng = fold_rng.substream(stream::kDraw, 1);
    const std::size_t budget =
        std::min(options.subsample_target + options.pilot.size, train.size());
    std::vector<Index> unif = sample_without_replacement(train.size(), budget, unif_rng);
    WeightedRisk unif_risk(train, model, std::move(unif));
    auto [theta_unif, rep_unif] = newton_minimize(unif_risk, Vector::Zero(model.dim()));
    if (!rep_unif.converged) throw FitError("uniform fit did not converge", rep_unif);
    report.uniform_folds.push_back(prediction_rmse(test, model, theta_unif));
  }

  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  report.full = mean(report.full_folds);
  report.surprise = mean(report.surprise_folds);
  report.uniform = mean(report.uniform_folds);
  return report;
}

}  // namespace surprise
