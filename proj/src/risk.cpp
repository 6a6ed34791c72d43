#include "surprise/risk.hpp"

#include <cmath>

#include "surprise/parallel.hpp"

namespace surprise {

WeightedRisk::WeightedRisk(const Dataset& data, const LossModel& model,
                           std::vector<Index> indices, std::vector<double> weights)
    : data_(data), model_(model), indices_(std::move(indices)), weights_(std::move(weights)) {
  if (!data_.has_response()) throw ContractError("weighted risk requires a response column");
  if (model_.dim() != data_.dim())
    throw ContractError("loss model dimension does not match dataset");
  if (!weights_.empty() && weights_.size() != subset_size())
    throw ContractError("weight count does not match subset size");
  for (const Index i : indices_)
    if (i >= data_.size()) throw ContractError("subset index out of range");
}

namespace {

struct Accum {
  double f = 0.0;
  Vector g;
  Matrix h;
  bool want_g = false;
  bool want_h = false;
};

}  // namespace

void WeightedRisk::eval(const Vector& theta, double* value, Vector* grad, Matrix* hess) const {
  const int p = model_.dim();
  if (theta.size() != p) throw ContractError("theta has wrong length");
  const std::size_t m = subset_size();
  const std::size_t n = data_.size();
  const auto& x = data_.covariates();
  const Vector& y = data_.responses();
  const Vector slopes = theta.tail(p - 1);
  const double intercept = theta(0);

  Accum total;
  total.want_g = grad != nullptr;
  total.want_h = hess != nullptr;
  total.g = Vector::Zero(p);
  total.h = Matrix::Zero(p, p);

  auto chunk_eval = [&](std::size_t, std::size_t lo, std::size_t hi) {
    const Eigen::Index len = static_cast<Eigen::Index>(hi - lo);
    RowMatrix xc;
    Vector yc(len), wc(len);
    if (indices_.empty()) {
      xc = x.middleRows(static_cast<Eigen::Index>(lo), len);
      yc = y.segment(static_cast<Eigen::Index>(lo), len);
    } else {
      xc.resize(len, x.cols());
      for (Eigen::Index k = 0; k < len; ++k) {
        const Eigen::Index row = static_cast<Eigen::Index>(indices_[lo + k]);
        xc.row(k) = x.row(row);
        yc(k) = y(row);
      }
    }
    if (weights_.empty())
      wc.setOnes();
    else
      for (Eigen::Index k = 0; k < len; ++k) wc(k) = weights_[lo + k];

    const Vector t = (xc * slopes).array() + intercept;

    Accum part;
    part.want_g = total.want_g;
    part.want_h = total.want_h;
    if (value != nullptr)
      for (Eigen::Index k = 0; k < len; ++k)
        part.f += wc(k) * model_.loss_at(yc(k), t(k));
    if (part.want_g) {
      Vector ws(len);
      for (Eigen::Index k = 0; k < len; ++k) ws(k) = wc(k) * model_.score_at(yc(k), t(k));
      part.g = Vector(p);
      part.g(0) = -ws.sum();
      part.g.tail(p - 1) = -(xc.transpose() * ws);
    }
    if (part.want_h) {
      Vector wh(len);
      for (Eigen::Index k = 0; k < len; ++k) wh(k) = wc(k) * model_.curvature_at(yc(k), t(k));
      part.h = Matrix(p, p);
      part.h(0, 0) = wh.sum();
      const Vector hx = xc.transpose() * wh;
      part.h.row(0).tail(p - 1) = hx.transpose();
      part.h.col(0).tail(p - 1) = hx;
      part.h.bottomRightCorner(p - 1, p - 1) =
          xc.transpose() * wh.asDiagonal() * xc;
    }
    return part;
  };

  auto merge = [](Accum acc, const Accum& part) {
    acc.f += part.f;
    if (acc.want_g) acc.g += part.g;
    if (acc.want_h) acc.h += part.h;
    return acc;
  };

  total = reduce_chunks<Accum>(m, std::move(total), chunk_eval, merge);

  const double scale = 1.0 / static_cast<double>(n);
  if (value != nullptr) *value = total.f * scale;
  if (grad != nullptr) *grad = total.g * scale;
  if (hess != nullptr) *hess = 0.5 * scale * (total.h + total.h.transpose());
}

Matrix WeightedRisk::average_hessian(const Vector& theta) const {
  Matrix h;
  eval(theta, nullptr, nullptr, &h);
  return h;
}

Vector WeightedRisk::score_sum(const Vector& theta) const {
  Vector g;
  eval(theta, nullptr, &g, nullptr);
  return g;
}

Matrix WeightedRisk::score_outer(const Vector& theta) const {
  const int p = model_.dim();
  const std::size_t m = subset_size();
  const std::size_t n = data_.size();
  const auto& x = data_.covariates();
  const Vector& y = data_.responses();
  const Vector slopes = theta.tail(p - 1);
  const double intercept = theta(0);

  auto chunk_eval = [&](std::size_t, std::size_t lo, std::size_t hi) {
    const Eigen::Index len = static_cast<Eigen::Index>(hi - lo);
    RowMatrix xc;
    Vector yc(len), wc(len);
    if (indices_.empty()) {
      xc = x.middleRows(static_cast<Eigen::Index>(lo), len);
      yc = y.segment(static_cast<Eigen::Index>(lo), len);
    } else {
      xc.resize(len, x.cols());
      for (Eigen::Index k = 0; k < len; ++k) {
        const Eigen::Index row = static_cast<Eigen::Index>(indices_[lo + k]);
        xc.row(k) = x.row(row);
        yc(k) = y(row);
      }
    }
    if (weights_.empty())
      wc.setOnes();
    else
      for (Eigen::Index k = 0; k < len; ++k) wc(k) = weights_[lo + k];

    const Vector t = (xc * slopes).array() + intercept;
    // g_i g_i^T = S_i^2 z_i z_i^T; the w^2 S^2 factor plays the curvature role.
    Vector w2s2(len);
    for (Eigen::Index k = 0; k < len; ++k) {
      const double s = model_.score_at(yc(k), t(k));
      w2s2(k) = wc(k) * wc(k) * s * s;
    }
    Matrix part(p, p);
    part(0, 0) = w2s2.sum();
    const Vector sx = xc.transpose() * w2s2;
    part.row(0).tail(p - 1) = sx.transpose();
    part.col(0).tail(p - 1) = sx;
    part.bottomRightCorner(p - 1, p - 1) = xc.transpose() * w2s2.asDiagonal() * xc;
    return part;
  };

  Matrix total = reduce_chunks<Matrix>(
      m, Matrix::Zero(p, p), chunk_eval,
      [](Matrix acc, const Matrix& part) { return Matrix(acc + part); });
  total /= static_cast<double>(n);
  return 0.5 * (total + total.transpose());
}

}  // namespace surprise
