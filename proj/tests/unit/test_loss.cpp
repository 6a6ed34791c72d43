#include <doctest.h>

#include <cmath>

#include "surprise/loss.hpp"
#include "surprise/rng.hpp"

using namespace surprise;

namespace {

DataPoint random_point(Family family, int q, Rng& rng) {
  DataPoint d;
  d.x = Vector(q);
  for (int j = 0; j < q; ++j) d.x(j) = rng.normal();
  switch (family) {
    case Family::Logistic:
    case Family::Probit:
      d.y = rng.bernoulli(0.5) ? 1.0 : 0.0;
      break;
    case Family::PoissonLog:
      d.y = static_cast<double>(rng.poisson(1.5));
      break;
    case Family::GaussianLinear:
      d.y = rng.normal() * 1.3 + 0.4;
      break;
  }
  return d;
}

Vector random_theta(int p, Rng& rng) {
  Vector theta(p);
  for (int j = 0; j < p; ++j) theta(j) = 0.5 * rng.normal();
  return theta;
}

/// Central finite difference of the loss: the ground truth for grad.
Vector fd_grad(const LossModel& m, const DataPoint& d, const Vector& theta, double h) {
  Vector g(theta.size());
  for (int j = 0; j < theta.size(); ++j) {
    Vector up = theta, dn = theta;
    up(j) += h;
    dn(j) -= h;
    g(j) = (m.loss(d, up) - m.loss(d, dn)) / (2.0 * h);
  }
  return g;
}

Matrix fd_hessian(const LossModel& m, const DataPoint& d, const Vector& theta, double h) {
  const int p = static_cast<int>(theta.size());
  Matrix hess(p, p);
  for (int j = 0; j < p; ++j) {
    Vector up = theta, dn = theta;
    up(j) += h;
    dn(j) -= h;
    hess.col(j) = (m.grad(d, up) - m.grad(d, dn)) / (2.0 * h);
  }
  return hess;
}

constexpr Family kFamilies[] = {Family::Logistic, Family::PoissonLog, Family::GaussianLinear,
                                Family::Probit};

}  // namespace

TEST_SUITE("loss") {

TEST_CASE("loss values at hand-checked points") {
  DataPoint d{Vector::Zero(1), 1.0};
  const Vector zero2 = Vector::Zero(2);

  LossModel logistic(Family::Logistic, 2);
  CHECK(logistic.loss(d, zero2) == doctest::Approx(std::log(2.0)));  // p(0)=1/2

  LossModel poisson(Family::PoissonLog, 2);
  DataPoint d0{Vector::Zero(1), 0.0};
  CHECK(poisson.loss(d0, zero2) == doctest::Approx(1.0));  // -0 + e^0

  LossModel gaussian(Family::GaussianLinear, 2);
  DataPoint d3{Vector::Zero(1), 3.0};
  Vector theta(2);
  theta << 1.0, 0.0;
  CHECK(gaussian.loss(d3, theta) == doctest::Approx(4.0));  // (3-1)^2
}

TEST_CASE("gradient values at hand-checked points") {
  LossModel logistic(Family::Logistic, 2);
  DataPoint d{Vector::Zero(1), 1.0};
  const Vector g = logistic.grad(d, Vector::Zero(2));
  CHECK(g(0) == doctest::Approx(-0.5));
  CHECK(g(1) == doctest::Approx(0.0));

  // Poisson with y=2, x=1, theta=0: S = 2 - 1 = 1, g = -(1,1).
  LossModel poisson(Family::PoissonLog, 2);
  DataPoint d2{Vector::Ones(1), 2.0};
  const Vector g2 = poisson.grad(d2, Vector::Zero(2));
  CHECK(g2(0) == doctest::Approx(-1.0));
  CHECK(g2(1) == doctest::Approx(-1.0));
}

TEST_CASE("hessian values at hand-checked points") {
  LossModel logistic(Family::Logistic, 2);
  DataPoint d{Vector::Zero(1), 1.0};
  const Matrix h = logistic.hessian(d, Vector::Zero(2));
  CHECK(h(0, 0) == doctest::Approx(0.25));
  CHECK(h(0, 1) == doctest::Approx(0.0));
  CHECK(h(1, 1) == doctest::Approx(0.0));

  LossModel gaussian(Family::GaussianLinear, 3);
  Rng rng(11);
  for (int rep = 0; rep < 5; ++rep) {
    const DataPoint dp = random_point(Family::GaussianLinear, 2, rng);
    const Vector theta = random_theta(3, rng);
    const Matrix hg = gaussian.hessian(dp, theta);
    const Vector z = augment(dp).z;
    CHECK((hg - 2.0 * z * z.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("score residual values") {
  LossModel logistic(Family::Logistic, 2);
  DataPoint d1{Vector::Zero(1), 1.0};
  CHECK(logistic.score_residual(d1, Vector::Zero(2)) == doctest::Approx(0.5));

  DataPoint d0{Vector::Zero(1), 0.0};
  Vector big(2);
  big << 30.0, 0.0;
  CHECK(logistic.score_residual(d0, big) == doctest::Approx(-1.0).epsilon(1e-9));

  LossModel poisson(Family::PoissonLog, 2);
  DataPoint de{Vector::Ones(1), std::exp(1.0)};
  Vector theta(2);
  theta << 0.0, 1.0;
  CHECK(poisson.score_residual(de, theta) == doctest::Approx(0.0));
}

TEST_CASE("conditional score variance") {
  LossModel logistic(Family::Logistic, 2);
  CHECK(logistic.conditional_score_variance_at(0.0) == doctest::Approx(0.25));
  CHECK(logistic.conditional_score_variance_at(40.0) < 1e-15);

  LossModel poisson(Family::PoissonLog, 2);
  CHECK(poisson.conditional_score_variance_at(0.0) == doctest::Approx(1.0));

  LossModel gaussian(Family::GaussianLinear, 2);
  CHECK_THROWS_AS(gaussian.conditional_score_variance_at(0.0), NotImplementedError);
  LossModel probit(Family::Probit, 2);
  CHECK_THROWS_AS(probit.conditional_score_variance_at(0.0), NotImplementedError);
}

TEST_CASE("analytic gradient matches finite differences for every family") {
  Rng rng(2024);
  const int q = 3, p = 4;
  for (const Family family : kFamilies) {
    LossModel m(family, p);
    for (int rep = 0; rep < 20; ++rep) {
      const DataPoint d = random_point(family, q, rng);
      const Vector theta = random_theta(p, rng);
      const Vector g = m.grad(d, theta);
      const Vector g_fd = fd_grad(m, d, theta, 1e-6);
      const double scale = std::max(1.0, g.norm());
      CHECK((g - g_fd).norm() / scale < 1e-6);
    }
  }
}

TEST_CASE("analytic hessian matches finite differences for every family") {
  Rng rng(4048);
  const int q = 3, p = 4;
  for (const Family family : kFamilies) {
    LossModel m(family, p);
    for (int rep = 0; rep < 20; ++rep) {
      const DataPoint d = random_point(family, q, rng);
      const Vector theta = random_theta(p, rng);
      const Matrix h = m.hessian(d, theta);
      const Matrix h_fd = fd_hessian(m, d, theta, 1e-5);
      const double scale = std::max(1.0, h.norm());
      CHECK((h - h_fd).norm() / scale < 1e-5);
    }
  }
}

TEST_CASE("grad is exactly -S z and the hessian is PSD rank one") {
  Rng rng(77);
  for (const Family family : kFamilies) {
    LossModel m(family, 4);
    for (int rep = 0; rep < 10; ++rep) {
      const DataPoint d = random_point(family, 3, rng);
      const Vector theta = random_theta(4, rng);
      const Vector z = augment(d).z;
      const double s = m.score_residual(d, theta);
      CHECK((m.grad(d, theta) + s * z).cwiseAbs().maxCoeff() == 0.0);

      const Matrix h = m.hessian(d, theta);
      CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
      const double scalar = m.curvature_at(*d.y, m.linear_index(d, theta));
      CHECK(scalar >= 0.0);
    }
  }
}

TEST_CASE("logistic loss is overflow safe at |t| = 700") {
  LossModel m(Family::Logistic, 2);
  Vector theta(2);
  theta << 700.0, 0.0;
  DataPoint d{Vector::Zero(1), 0.0};
  CHECK(std::isfinite(m.loss(d, theta)));
  theta(0) = -700.0;
  DataPoint d1{Vector::Zero(1), 1.0};
  CHECK(std::isfinite(m.loss(d1, theta)));
  CHECK(m.loss(d1, theta) == doctest::Approx(700.0));
}

TEST_CASE("probit score is clamped in the far tails") {
  LossModel m(Family::Probit, 2);
  CHECK(std::isfinite(m.score_at(1.0, -40.0)));
  CHECK(std::isfinite(m.score_at(0.0, 40.0)));
  CHECK(std::isfinite(m.curvature_at(1.0, -40.0)));
}

TEST_CASE("missing response is a contract violation") {
  LossModel m(Family::Logistic, 2);
  DataPoint d{Vector::Zero(1), std::nullopt};
  CHECK_THROWS_AS(m.loss(d, Vector::Zero(2)), ContractError);
}

TEST_CASE("normal quantile hits the textbook value") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-6));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
  CHECK(normal_quantile(0.025) == doctest::Approx(-1.959964).epsilon(1e-6));
}

}  // TEST_SUITE
