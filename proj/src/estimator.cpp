#include "surprise/estimator.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace surprise {

FitResult fit_ht(const Dataset& data, const LossModel& model, const Subsample& sub,
                 const Vector& theta0) {
  const int p = model.dim();
  if (sub.indices.empty()) throw ContractError("subsample is empty");
  if (sub.indices.size() != sub.weights.size())
    throw ContractError("subsample indices and weights differ in length");
  if (sub.indices.size() < static_cast<std::size_t>(p))
    throw FitError("subsample smaller than the parameter dimension (" +
                       std::to_string(sub.indices.size()) + " < " + std::to_string(p) + ")",
                   {});
  for (const double w : sub.weights)
    if (!std::isfinite(w) || w < 1.0) throw ContractError("subsample weights must be finite and >= 1");
  if (theta0.size() != p) throw ContractError("start point has wrong length");

  WeightedRisk risk(data, model, sub.indices, sub.weights);
  Vector theta;
  SolverReport report;
  try {
    std::tie(theta, report) = newton_minimize(risk, theta0);
  } catch (const SolverError& e) {
    throw FitError(std::string("HT fit failed: ") + e.what(), e.report());
  }
  if (!report.converged)
    throw FitError("HT fit did not converge within the iteration budget", report);

  FitResult fit;
  fit.theta_hat = std::move(theta);
  fit.subsample_size = sub.indices.size();
  fit.solver = report;

  const Matrix a_hat = risk.average_hessian(fit.theta_hat);
  const Matrix v_hat = risk.score_outer(fit.theta_hat);
  try {
    const Matrix a_inv = spd_inverse(a_hat);
    Matrix cov = a_inv * v_hat * a_inv / static_cast<double>(data.size());
    cov = 0.5 * (cov + cov.transpose());
    fit.covariance = cov;
    fit.std_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    fit.wald_ci.reserve(static_cast<std::size_t>(p));
    const double z = normal_quantile(0.5 * (1.0 + fit.ci_level));
    for (int j = 0; j < p; ++j)
      fit.wald_ci.emplace_back(fit.theta_hat(j) - z * fit.std_errors(j),
                               fit.theta_hat(j) + z * fit.std_errors(j));
  } catch (const DecompositionError&) {
    // Singular weighted curvature: keep the point estimate, drop inference.
    fit.covariance.reset();
    fit.std_errors.resize(0);
    fit.wald_ci.clear();
  }
  return fit;
}

std::pair<double, double> wald_interval(const FitResult& fit, int coordinate, double level) {
  if (!(level > 0.0 && level < 1.0)) throw ContractError("confidence level must lie in (0,1)");
  if (coordinate < 0 || coordinate >= fit.theta_hat.size())
    throw ContractError("coordinate index out of range");
  if (!fit.covariance)
    throw InferenceError("no covariance available for this fit");
  const double z = normal_quantile(0.5 * (1.0 + level));
  const double se = fit.std_errors(coordinate);
  const double center = fit.theta_hat(coordinate);
  return {center - z * se, center + z * se};
}

Vector lcc_adjusted_fit(const Dataset& data, const Subsample& sub, const PilotEstimate& pilot) {
  LossModel logistic(Family::Logistic, data.dim());
  if (sub.indices.empty()) throw ContractError("subsample is empty");
  if (sub.indices.size() < static_cast<std::size_t>(logistic.dim()))
    throw FitError("subsample smaller than the parameter dimension", {});

  // Unweighted logistic MLE on the subsample, then the pilot offset.
  WeightedRisk risk(data, logistic, sub.indices);
  Vector theta;
  SolverReport report;
  try {
    std::tie(theta, report) = newton_minimize(risk, Vector::Zero(logistic.dim()));
  } catch (const SolverError& e) {
    throw FitError(std::string("LCC fit failed: ") + e.what(), e.report());
  }
  if (!report.converged)
    throw FitError("LCC fit did not converge within the iteration budget", report);
  return theta + pilot.theta_tilde;
}

std::vector<std::string> coordinate_names(const Dataset& data) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(data.dim()));
  names.push_back("intercept");
  for (const auto& c : data.column_names()) names.push_back(c);
  return names;
}

namespace {
std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

std::string to_key_value(const FitResult& fit, const std::vector<std::string>& names) {
  std::ostringstream out;
  for (int j = 0; j < fit.theta_hat.size(); ++j)
    out << "estimate." << names[static_cast<std::size_t>(j)] << " = " << num(fit.theta_hat(j)) << '\n';
  if (fit.covariance) {
    for (int j = 0; j < fit.std_errors.size(); ++j)
      out << "se." << names[static_cast<std::size_t>(j)] << " = " << num(fit.std_errors(j)) << '\n';
    for (std::size_t j = 0; j < fit.wald_ci.size(); ++j)
      out << "ci" << static_cast<int>(fit.ci_level * 100) << "." << names[j] << " = ["
          << num(fit.wald_ci[j].first) << ", " << num(fit.wald_ci[j].second) << "]\n";
  }
  out << "subsample_size = " << fit.subsample_size << '\n';
  out << "solver.converged = " << (fit.solver.converged ? "true" : "false") << '\n';
  out << "solver.iterations = " << fit.solver.iterations << '\n';
  out << "solver.gradient_norm = " << num(fit.solver.final_gradient_norm) << '\n';
  out << "solver.objective = " << num(fit.solver.objective) << '\n';
  return out.str();
}

std::string to_csv(const FitResult& fit, const std::vector<std::string>& names) {
  std::ostringstream out;
  out << "coordinate,estimate,se,ci_lo,ci_hi\n";
  for (int j = 0; j < fit.theta_hat.size(); ++j) {
    out << names[static_cast<std::size_t>(j)] << ',' << num(fit.theta_hat(j));
    if (fit.covariance)
      out << ',' << num(fit.std_errors(j)) << ','
          << num(fit.wald_ci[static_cast<std::size_t>(j)].first) << ','
          << num(fit.wald_ci[static_cast<std::size_t>(j)].second);
    else
      out << ",,,";
    out << '\n';
  }
  return out.str();
}

}  // namespace surprise
