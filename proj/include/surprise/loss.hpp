#pragma once

#include "surprise/dataset.hpp"

namespace surprise {

enum class Family { Logistic, PoissonLog, GaussianLinear, Probit };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// Overflow-safe log(1 + e^t).
double log1pexp(double t);
/// e^t / (1 + e^t).
double sigmoid(double t);
double normal_pdf(double t);
double normal_cdf(double t);
/// Inverse standard normal CDF, accurate to machine precision.
double normal_quantile(double p);

/**
 * A loss family with analytic gradient and Hessian under the linear-index
 * convention t = theta^T z, z = (1, x). For every family the gradient is
 * -S(y,t) z and the Hessian is h(y,t) zz^T with h >= 0.
 *
 * Families: Logistic and Probit negative Bernoulli log-likelihood,
 * Poisson log-linear negative log-likelihood, Gaussian squared loss with
 * unit scale.
 */
class LossModel {
 public:
  LossModel(Family family, int dim);

  Family family() const { return family_; }
  int dim() const { return dim_; }

  // Scalar kernels in the linear index t; the hot paths use these directly.
  double loss_at(double y, double t) const;
  /// S(y,t), the per-point score residual.
  double score_at(double y, double t) const;
  /// h(y,t) with Hessian h(y,t) zz^T.
  double curvature_at(double y, double t) const;
  /// Mean prediction: inverse link applied to t.
  double inverse_link(double t) const;
  /// Var[S(Y, t) | z] under the family's own conditional law; only
  /// defined for Logistic and PoissonLog.
  double conditional_score_variance_at(double t) const;

  // Per-point interface over DataPoint.
  double loss(const DataPoint& d, const Vector& theta) const;
  Vector grad(const DataPoint& d, const Vector& theta) const;
  Matrix hessian(const DataPoint& d, const Vector& theta) const;
  double score_residual(const DataPoint& d, const Vector& theta) const;
  double conditional_score_variance(const DataPoint& d, const Vector& theta) const;

  /// theta^T (1, x).
  double linear_index(const DataPoint& d, const Vector& theta) const;

 private:
  void check_args(const DataPoint& d, const Vector& theta) const;

  Family family_;
  int dim_;
};

}  // namespace surprise
