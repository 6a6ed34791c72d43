#include "surprise/design.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "surprise/parallel.hpp"

namespace surprise {

Objective Objective::estimation_direction(Vector v) {
  if (v.size() == 0 || !v.allFinite() || v.norm() == 0.0)
    throw ContractError("estimation direction must be a finite nonzero vector");
  Objective o;
  o.kind = Kind::EstimationDirection;
  o.direction = std::move(v);
  return o;
}

std::string Objective::name() const {
  switch (kind) {
    case Kind::Prediction: return "prediction";
    case Kind::EstimationDirection: return "direction";
    case Kind::MSE: return "mse";
    case Kind::LCC: return "lcc";
  }
  return "?";
}

Vector kernel(const Dataset& data, const LossModel& model, const PilotEstimate& pilot,
              const Objective& objective) {
  const int p = model.dim();
  if (pilot.theta_tilde.size() != p)
    throw ContractError("pilot dimension does not match loss model");
  if (model.dim() != data.dim()) throw ContractError("loss model does not match dataset");
  if (!data.has_response()) throw ContractError("kernel evaluation requires responses");

  const std::size_t n = data.size();
  const auto& x = data.covariates();
  const Vector& y = data.responses();
  const Vector slopes = pilot.theta_tilde.tail(p - 1);
  const double intercept = pilot.theta_tilde(0);

  // Per-row gradient is -S_i z_i, so every kernel factors as |S_i| times a
  // function of z_i alone.
  Matrix transform;  // A~^(-1/2) or A~^(-1), when needed
  Vector direction_w;
  switch (objective.kind) {
    case Objective::Kind::Prediction:
      transform = inv_sqrt(pilot.a_tilde);
      break;
    case Objective::Kind::MSE:
      transform = floored_inverse(pilot.a_tilde);
      break;
    case Objective::Kind::EstimationDirection: {
      if (objective.direction.size() != p)
        throw ContractError("estimation direction has wrong length");
      direction_w = floored_inverse(pilot.a_tilde) * objective.direction;
      break;
    }
    case Objective::Kind::LCC:
      break;
  }

  Vector kernels(n);
  for_chunks(n, [&](std::size_t, std::size_t lo, std::size_t hi) {
    const Eigen::Index len = static_cast<Eigen::Index>(hi - lo);
    const Eigen::Index off = static_cast<Eigen::Index>(lo);
    const auto xc = x.middleRows(off, len);
    Vector t = (xc * slopes).array() + intercept;
    Vector s(len);
    for (Eigen::Index k = 0; k < len; ++k)
      s(k) = model.score_at(y(off + k), t(k));

    switch (objective.kind) {
      case Objective::Kind::LCC:
        kernels.segment(off, len) = s.cwiseAbs();
        break;
      case Objective::Kind::EstimationDirection: {
        Vector u = (xc * direction_w.tail(p - 1)).array() + direction_w(0);
        kernels.segment(off, len) = (s.array() * u.array()).abs();
        break;
      }
      case Objective::Kind::Prediction:
      case Objective::Kind::MSE: {
        // ||T z_i|| per row: z W columns, with z = (1, x).
        Matrix zt(len, p);
        zt.col(0).setOnes();
        zt.rightCols(p - 1) = xc;
        const Matrix rows = zt * transform;
        kernels.segment(off, len) = rows.rowwise().norm().cwiseProduct(s.cwiseAbs());
        break;
      }
    }
  });
  return kernels;
}

double find_c(const Vector& kernels, double rate) {
  const std::size_t n = static_cast<std::size_t>(kernels.size());
  if (n == 0) throw ContractError("find_c: empty kernel vector");
  if (!(rate > 0.0 && rate < 1.0)) throw ContractError("rate must lie in (0,1)");
  if (!kernels.allFinite() || kernels.minCoeff() < 0.0)
    throw ContractError("kernels must be finite and nonnegative");

  const double total = kernels.sum();
  if (total <= 0.0) throw DegenerateDesignError("all sampling kernels are zero");

  const double nr = static_cast<double>(n) * rate;
  std::size_t n_pos = 0;
  for (Eigen::Index i = 0; i < kernels.size(); ++i)
    if (kernels(i) > 0.0) ++n_pos;
  if (static_cast<double>(n_pos) <= nr) {
    std::cerr << "warning: target rate " << rate
              << " is not reachable; capping every positive kernel at probability 1\n";
    return std::numeric_limits<double>::infinity();
  }

  std::vector<double> sorted(kernels.data(), kernels.data() + kernels.size());
  std::sort(sorted.begin(), sorted.end());

  const double c0 = nr / total;
  if (c0 * sorted.back() <= 1.0) return c0;

  // Capped branch: locate the boundary index m (1-based in the sorted
  // order) with f(1/k_(m+1)) <= nr <= f(1/k_(m)), f(x) = sum min(x k_i, 1).
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + sorted[i];

  auto f_at = [&](std::size_t m) {
    const double km = sorted[m - 1];
    if (km <= 0.0) return static_cast<double>(n_pos);  // x -> infinity limit
    const std::size_t j = static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), km) - sorted.begin());
    return prefix[j] / km + static_cast<double>(n - j);
  };

  // f_at is nonincreasing in m; bisect for the largest m with f_at(m) >= nr.
  std::size_t lo = 1, hi = n;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (f_at(mid) >= nr)
      lo = mid;
    else
      hi = mid - 1;
  }
  const std::size_t m = lo;
  return (nr - static_cast<double>(n - m)) / prefix[m];
}

SamplingPlan SamplingPlan::make(Vector kernels, double rate, double min_prob) {
  if (min_prob < 0.0 || min_prob > 1.0)
    throw ContractError("min_prob must lie in [0,1]");
  SamplingPlan plan;
  plan.c = find_c(kernels, rate);
  plan.target_rate = rate;
  plan.min_prob = min_prob;
  plan.probs = Vector(kernels.size());
  if (std::isinf(plan.c)) {
    for (Eigen::Index i = 0; i < kernels.size(); ++i)
      plan.probs(i) = kernels(i) > 0.0 ? 1.0 : 0.0;
  } else {
    plan.probs = (plan.c * kernels).cwiseMin(1.0);
  }
  if (min_prob > 0.0) plan.probs = plan.probs.cwiseMax(min_prob);
  plan.kernels = std::move(kernels);
  return plan;
}

Subsample draw(const SamplingPlan& plan, Rng& rng) {
  const std::size_t n = static_cast<std::size_t>(plan.probs.size());
  const std::uint64_t nonce = mix64(rng.next_u64());

  const std::size_t m = chunk_count(n);
  std::vector<std::vector<Index>> chunk_idx(m);
  std::vector<std::vector<double>> chunk_w(m);

  for_chunks(n, [&](std::size_t ci, std::size_t lo, std::size_t hi) {
    Rng local(derive_seed(nonce, stream::kDraw, ci));
    auto& idx = chunk_idx[ci];
    auto& w = chunk_w[ci];
    for (std::size_t i = lo; i < hi; ++i) {
      const double pi = plan.probs(static_cast<Eigen::Index>(i));
      const double u = local.uniform01();
      if (pi > 0.0 && u < pi) {
        idx.push_back(i);
        w.push_back(1.0 / pi);
      }
    }
  });

  Subsample sub;
  for (std::size_t ci = 0; ci < m; ++ci) {
    sub.indices.insert(sub.indices.end(), chunk_idx[ci].begin(), chunk_idx[ci].end());
    sub.weights.insert(sub.weights.end(), chunk_w[ci].begin(), chunk_w[ci].end());
  }
  return sub;
}

}  // namespace surprise
