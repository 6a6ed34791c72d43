#pragma once

#include "surprise/loss.hpp"
#include "surprise/rng.hpp"

namespace surprise {

/**
 * Synthetic data scheme: covariates i.i.d. N(0, x_sd^2), linear index
 * t = intercept + slopes^T x + quad_coef * x1^2, response drawn from the
 * working family's conditional law at t. quad_coef != 0 makes the fitted
 * linear-index model misspecified.
 */
struct GeneratorSpec {
  Family working_family = Family::Logistic;
  int q = 2;
  Vector slopes;
  double quad_coef = 0.0;
  double intercept = 0.0;
  double x_sd = 1.0;
  double noise_sd = 1.0;  // Gaussian response only

  bool misspecified() const { return quad_coef != 0.0; }
  /// Stable identity used for pinned-constant lookup (intercept excluded,
  /// it is the calibrated quantity).
  std::string key() const;
  /// key() plus the intercept; identifies a fully specified scheme.
  std::string full_key() const;
};

Dataset generate(const GeneratorSpec& spec, std::size_t n, Rng& rng);

/**
 * The marginal imbalance statistic each study calibrates against:
 * P(Y=1) for binary families, P(Y<=1) for Poisson, P(-0.5<Y<0.5) for
 * Gaussian. Deterministic Gauss-Hermite quadrature.
 */
double marginal_statistic(const GeneratorSpec& spec);

/// Intercept that hits the target marginal statistic, by bisection on the
/// quadrature value. The result ships in the pinned-constants table.
double calibrate_intercept(const GeneratorSpec& spec, double target);

/// theta* of the fitted (working) model, with the Monte-Carlo standard
/// error of the oracle when it had to be estimated.
struct OracleTarget {
  Vector theta_star;
  Vector mc_se;          // zero when theta* is exact
  std::size_t oracle_n = 0;
  std::uint64_t oracle_seed = 0;
};

/// Exact under correct specification; otherwise the working model fitted
/// once on an independent mega-sample (pinned after first derivation).
OracleTarget true_target(const GeneratorSpec& spec);

/// Forces the slow oracle path (used by the derivation tool and tests).
OracleTarget derive_oracle_target(const GeneratorSpec& spec, std::size_t oracle_n,
                                  std::uint64_t oracle_seed);

// Pinned constants (sim_constants.cpp).
std::optional<double> pinned_intercept(const std::string& key, double target);
std::optional<OracleTarget> pinned_target(const std::string& key);
constexpr std::size_t kOracleSampleSize = 10'000'000;
constexpr std::uint64_t kOracleSeed = 761293845ULL;

}  // namespace surprise
