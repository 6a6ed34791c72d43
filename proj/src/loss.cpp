#include "surprise/loss.hpp"

#include <cmath>

namespace surprise {

std::string family_name(Family f) {
  switch (f) {
    case Family::Logistic: return "logistic";
    case Family::PoissonLog: return "poisson";
    case Family::GaussianLinear: return "gaussian";
    case Family::Probit: return "probit";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "logistic") return Family::Logistic;
  if (name == "poisson") return Family::PoissonLog;
  if (name == "gaussian") return Family::GaussianLinear;
  if (name == "probit") return Family::Probit;
  throw ContractError("unknown loss family: " + name);
}

double log1pexp(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double normal_pdf(double t) {
  static const double inv_sqrt_2pi = 0.3989422804014326779399461;
  return inv_sqrt_2pi * std::exp(-0.5 * t * t);
}

double normal_cdf(double t) {
  static const double inv_sqrt2 = 0.7071067811865475244008444;
  return 0.5 * std::erfc(-t * inv_sqrt2);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ContractError("normal_quantile: p must lie in (0,1)");
  // Acklam's rational approximation, then one Halley step on Phi(x) - p.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double u = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  } else if (p <= 1.0 - plow) {
    const double u = p - 0.5;
    const double r = u * u;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double u = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e / normal_pdf(x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

LossModel::LossModel(Family family, int dim) : family_(family), dim_(dim) {
  if (dim < 1) throw ContractError("loss model dimension must be >= 1");
}

double LossModel::loss_at(double y, double t) const {
  switch (family_) {
    case Family::Logistic:
      return -y * t + log1pexp(t);
    case Family::PoissonLog:
      return -y * t + std::exp(t);
    case Family::GaussianLinear: {
      const double r = y - t;
      return r * r;
    }
    case Family::Probit: {
      // -log [ Phi(t)^y (1-Phi(t))^(1-y) ], written through erfc tails.
      const double lp = std::log(std::max(normal_cdf(t), 1e-300));
      const double lq = std::log(std::max(normal_cdf(-t), 1e-300));
      return -(y * lp + (1.0 - y) * lq);
    }
  }
  return 0.0;
}

double LossModel::score_at(double y, double t) const {
  switch (family_) {
    case Family::Logistic:
      return y - sigmoid(t);
    case Family::PoissonLog:
      return y - std::exp(t);
    case Family::GaussianLinear:
      return 2.0 * (y - t);
    case Family::Probit: {
      const double phi = normal_pdf(t);
      const double Phi = normal_cdf(t);
      const double v = std::max(Phi * (1.0 - Phi), 1e-300);
      return phi * (y - Phi) / v;
    }
  }
  return 0.0;
}

double LossModel::curvature_at(double y, double t) const {
  switch (family_) {
    case Family::Logistic: {
      const double p = sigmoid(t);
      return p * (1.0 - p);
    }
    case Family::PoissonLog:
      return std::exp(t);
    case Family::GaussianLinear:
      return 2.0;
    case Family::Probit: {
      const double phi = normal_pdf(t);
      const double Phi = normal_cdf(t);
      const double v = std::max(Phi * (1.0 - Phi), 1e-300);
      const double resid = y - Phi;
      return phi * (t * resid + phi) / v + phi * phi * resid * (1.0 - 2.0 * Phi) / (v * v);
    }
  }
  return 0.0;
}

double LossModel::inverse_link(double t) const {
  switch (family_) {
    case Family::Logistic: return sigmoid(t);
    case Family::PoissonLog: return std::exp(t);
    case Family::GaussianLinear: return t;
    case Family::Probit: return normal_cdf(t);
  }
  return 0.0;
}

double LossModel::conditional_score_variance_at(double t) const {
  switch (family_) {
    case Family::Logistic: {
      const double p = sigmoid(t);
      return p * (1.0 - p);
    }
    case Family::PoissonLog:
      return std::exp(t);
    default:
      throw NotImplementedError("conditional score variance is implemented for logistic and poisson only");
  }
}

void LossModel::check_args(const DataPoint& d, const Vector& theta) const {
  if (!d.y) throw ContractError("loss evaluation requires a response");
  if (theta.size() != dim_)
    throw ContractError("parameter has length " + std::to_string(theta.size()) +
                        ", model dimension is " + std::to_string(dim_));
  if (d.x.size() + 1 != dim_)
    throw ContractError("data point has " + std::to_string(d.x.size()) +
                        " covariates, model expects " + std::to_string(dim_ - 1));
}

double LossModel::linear_index(const DataPoint& d, const Vector& theta) const {
  return theta(0) + theta.tail(theta.size() - 1).dot(d.x);
}

double LossModel::loss(const DataPoint& d, const Vector& theta) const {
  check_args(d, theta);
  return loss_at(*d.y, linear_index(d, theta));
}

Vector LossModel::grad(const DataPoint& d, const Vector& theta) const {
  check_args(d, theta);
  const double s = score_at(*d.y, linear_index(d, theta));
  Vector g(dim_);
  g(0) = -s;
  g.tail(dim_ - 1) = -s * d.x;
  return g;
}

Matrix LossModel::hessian(const DataPoint& d, const Vector& theta) const {
  check_args(d, theta);
  const double h = curvature_at(*d.y, linear_index(d, theta));
  Vector z(dim_);
  z(0) = 1.0;
  z.tail(dim_ - 1) = d.x;
  return h * z * z.transpose();
}

double LossModel::score_residual(const DataPoint& d, const Vector& theta) const {
  check_args(d, theta);
  return score_at(*d.y, linear_index(d, theta));
}

double LossModel::conditional_score_variance(const DataPoint& d, const Vector& theta) const {
  check_args(d, theta);
  return conditional_score_variance_at(linear_index(d, theta));
}

}  // namespace surprise
