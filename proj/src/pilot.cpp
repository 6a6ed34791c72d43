#include "surprise/pilot.hpp"

#include <algorithm>
#include <cmath>

namespace surprise {

std::vector<Index> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
  if (k > n) throw ContractError("cannot sample " + std::to_string(k) + " of " +
                                 std::to_string(n) + " rows without replacement");
  // Partial Fisher-Yates over an index array; fine at the pilot sizes used.
  std::vector<Index> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<Index> out(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

Vector fit_or_throw(const WeightedRisk& risk, const Vector& start, const char* what) {
  auto [theta, report] = newton_minimize(risk, start);
  if (!report.converged)
    throw PilotError(std::string(what) + ": solver did not converge (grad norm " +
                         std::to_string(report.final_gradient_norm) + ")",
                     report);
  return theta;
}

}  // namespace

PilotEstimate pilot_uniform_mle(const Dataset& data, const LossModel& model,
                                std::size_t pilot_size, Rng& rng) {
  if (pilot_size == 0) throw ContractError("pilot size must be positive");
  if (pilot_size > data.size()) throw ContractError("pilot size exceeds dataset size");

  std::vector<Index> idx = sample_without_replacement(data.size(), pilot_size, rng);
  WeightedRisk pilot_risk(data, model, std::move(idx));
  Vector theta;
  try {
    theta = fit_or_throw(pilot_risk, Vector::Zero(model.dim()), "uniform pilot");
  } catch (const SolverError& e) {
    throw PilotError(std::string("uniform pilot: ") + e.what(), e.report());
  }

  WeightedRisk full_risk(data, model);
  PilotEstimate pilot;
  pilot.theta_tilde = std::move(theta);
  pilot.a_tilde = full_risk.average_hessian(pilot.theta_tilde);
  pilot.method = PilotMethod::UniformMLE;
  pilot.pilot_size = pilot_size;
  return pilot;
}

PilotEstimate pilot_wcc(const Dataset& data, std::size_t pilot_size, Rng& rng) {
  if (!data.has_response()) throw ContractError("case-control pilot requires a response");
  if (pilot_size == 0 || pilot_size % 2 != 0)
    throw ContractError("case-control pilot size must be positive and even");

  const Vector& y = data.responses();
  std::vector<Index> cases, controls;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double v = y(static_cast<Eigen::Index>(i));
    if (v == 1.0)
      cases.push_back(i);
    else if (v == 0.0)
      controls.push_back(i);
    else
      throw ContractError("case-control pilot requires a 0/1 response");
  }
  if (cases.empty() || controls.empty())
    throw ContractError("case-control pilot requires both classes to be present");

  // A class smaller than pilot_size/2 is sampled whole and reweighted.
  const std::size_t half = pilot_size / 2;
  const std::size_t m1 = std::min(half, cases.size());
  const std::size_t m0 = std::min(half, controls.size());

  std::vector<Index> idx;
  std::vector<double> weights;
  idx.reserve(m1 + m0);
  weights.reserve(m1 + m0);

  {
    std::vector<Index> chosen = sample_without_replacement(cases.size(), m1, rng);
    const double w = static_cast<double>(cases.size()) / static_cast<double>(m1);
    for (const Index k : chosen) {
      idx.push_back(cases[k]);
      weights.push_back(w);
    }
  }
  {
    std::vector<Index> chosen = sample_without_replacement(controls.size(), m0, rng);
    const double w = static_cast<double>(controls.size()) / static_cast<double>(m0);
    for (const Index k : chosen) {
      idx.push_back(controls[k]);
      weights.push_back(w);
    }
  }

  LossModel model(Family::Logistic, data.dim());
  WeightedRisk pilot_risk(data, model, std::move(idx), std::move(weights));
  Vector theta;
  try {
    theta = fit_or_throw(pilot_risk, Vector::Zero(model.dim()), "case-control pilot");
  } catch (const SolverError& e) {
    throw PilotError(std::string("case-control pilot: ") + e.what(), e.report());
  }

  WeightedRisk full_risk(data, model);
  PilotEstimate pilot;
  pilot.theta_tilde = std::move(theta);
  pilot.a_tilde = full_risk.average_hessian(pilot.theta_tilde);
  pilot.method = PilotMethod::WeightedCaseControl;
  pilot.pilot_size = m1 + m0;
  return pilot;
}

PilotEstimate pilot_external(const Vector& theta, const Dataset& data, const LossModel& model) {
  if (theta.size() != model.dim())
    throw ContractError("external pilot has length " + std::to_string(theta.size()) +
                        ", model dimension is " + std::to_string(model.dim()));
  if (!theta.allFinite()) throw ContractError("external pilot has non-finite entries");

  WeightedRisk full_risk(data, model);
  PilotEstimate pilot;
  pilot.theta_tilde = theta;
  pilot.a_tilde = full_risk.average_hessian(theta);
  pilot.method = PilotMethod::External;
  pilot.pilot_size = 0;
  return pilot;
}

}  // namespace surprise
