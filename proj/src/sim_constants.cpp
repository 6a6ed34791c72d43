// Pinned calibration constants for the shipped simulation scenarios.
//
// Intercepts come from calibrate_intercept (bisection on Gauss-Hermite
// quadrature of the marginal statistic); misspecified targets come from
// derive_oracle_target on an independent sample of kOracleSampleSize rows
// with seed kOracleSeed. Regenerate with: tools/derive-constants.

#include <map>

#include "surprise/generators.hpp"

namespace surprise {

namespace {

struct PinnedIntercept {
  double target;
  double value;
};

// key -> calibrated intercept at the scenario's marginal target.
const std::map<std::string, PinnedIntercept>& intercept_table() {
  static const std::map<std::string, PinnedIntercept> table = {
      // filled by tools/derive-constants; see scripts in tools/.
  };
  return table;
}

struct PinnedTarget {
  std::vector<double> theta_star;
  std::vector<double> mc_se;
};

const std::map<std::string, PinnedTarget>& target_table() {
  static const std::map<std::string, PinnedTarget> table = {
      // filled by tools/derive-constants.
  };
  return table;
}

}  // namespace

std::optional<double> pinned_intercept(const std::string& key, double target) {
  const auto& table = intercept_table();
  const auto it = table.find(key);
  if (it == table.end()) return std::nullopt;
  if (std::abs(it->second.target - target) > 1e-12) return std::nullopt;
  return it->second.value;
}

std::optional<OracleTarget> pinned_target(const std::string& key) {
  const auto& table = target_table();
  const auto it = table.find(key);
  if (it == table.end()) return std::nullopt;
  OracleTarget t;
  const auto& hit = it->second;
  t.theta_star = Eigen::Map<const Vector>(hit.theta_star.data(),
                                          static_cast<Eigen::Index>(hit.theta_star.size()));
  t.mc_se =
      Eigen::Map<const Vector>(hit.mc_se.data(), static_cast<Eigen::Index>(hit.mc_se.size()));
  t.oracle_n = kOracleSampleSize;
  t.oracle_seed = kOracleSeed;
  return t;
}

}  // namespace surprise
