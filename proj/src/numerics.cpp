#include "surprise/numerics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace surprise {

void require_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw ContractError("matrix is not square");
  if (!m.allFinite()) throw NumericalError("matrix has non-finite entries");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol)
    throw ContractError("matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
}

namespace {

struct EigenPair {
  Matrix vectors;
  Vector values;
};

EigenPair floored_eigs(const Matrix& m, double eigen_floor) {
  require_symmetric(m);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw NumericalError("symmetric eigendecomposition failed");
  Vector values = solver.eigenvalues();
  const double max_abs = values.cwiseAbs().maxCoeff();
  if (values.minCoeff() < -1e-8 * max_abs)
    throw NumericalError("matrix is not positive semidefinite (min eigenvalue " +
                         std::to_string(values.minCoeff()) + ")");
  double floor = eigen_floor;
  if (floor <= 0.0) floor = 1e-10 * values.maxCoeff();
  if (floor <= 0.0) throw NumericalError("matrix has no positive eigenvalue to floor against");
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (values(i) < floor) values(i) = floor;
  return {solver.eigenvectors(), std::move(values)};
}

}  // namespace

Matrix inv_sqrt(const Matrix& m, double eigen_floor) {
  const EigenPair e = floored_eigs(m, eigen_floor);
  return e.vectors * e.values.cwiseSqrt().cwiseInverse().asDiagonal() * e.vectors.transpose();
}

Matrix floored_inverse(const Matrix& m, double eigen_floor) {
  const EigenPair e = floored_eigs(m, eigen_floor);
  return e.vectors * e.values.cwiseInverse().asDiagonal() * e.vectors.transpose();
}

namespace {

/// Lower Cholesky; reports the failing pivot index instead of silently
/// producing NaNs.
Matrix cholesky_lower(const Matrix& m) {
  require_symmetric(m);
  const Eigen::Index p = m.rows();
  Matrix l = Matrix::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double d = m(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > 0.0) || !std::isfinite(d))
      throw DecompositionError("Cholesky failed: non-positive pivot at index " +
                                   std::to_string(j),
                               static_cast<int>(j));
    const double root = std::sqrt(d);
    l(j, j) = root;
    for (Eigen::Index i = j + 1; i < p; ++i) {
      const double s = m(i, j) - l.row(i).head(j).dot(l.row(j).head(j));
      l(i, j) = s / root;
    }
  }
  return l;
}

Vector cholesky_solve(const Matrix& l, const Vector& b) {
  Vector x = l.triangularView<Eigen::Lower>().solve(b);
  l.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
  return x;
}

}  // namespace

Vector solve_spd(const Matrix& m, const Vector& b) {
  if (m.rows() != b.size()) throw ContractError("solve_spd: dimension mismatch");
  const Matrix l = cholesky_lower(m);
  Vector x = cholesky_solve(l, b);
  // One step of iterative refinement keeps the residual near machine level.
  const Vector r = b - m * x;
  x += cholesky_solve(l, r);
  return x;
}

Matrix spd_inverse(const Matrix& m) {
  const Matrix l = cholesky_lower(m);
  Matrix inv = Matrix::Identity(m.rows(), m.cols());
  l.triangularView<Eigen::Lower>().solveInPlace(inv);
  l.transpose().triangularView<Eigen::Upper>().solveInPlace(inv);
  return 0.5 * (inv + inv.transpose());
}

std::pair<Vector, SolverReport> newton_minimize(const NewtonObjective& objective,
                                                Vector theta0,
                                                const NewtonOptions& options) {
  const Eigen::Index p = theta0.size();
  Vector theta = std::move(theta0);
  double f = 0.0;
  Vector g(p);
  Matrix h(p, p);
  objective.eval(theta, &f, &g, &h);
  if (!std::isfinite(f)) throw SolverError("objective is non-finite at the start point", {});

  SolverReport report;
  report.objective = f;
  report.final_gradient_norm = g.cwiseAbs().maxCoeff();

  for (int iter = 0; iter < options.max_iter; ++iter) {
    if (report.final_gradient_norm <= options.tol) {
      report.converged = true;
      return {theta, report};
    }

    // Newton direction; ridge the Hessian if it fails to factor.
    Vector step;
    double ridge = 1e-8 * h.trace() / static_cast<double>(p);
    if (!(ridge > 0.0)) ridge = 1e-12;
    Matrix hw = h;
    for (int attempt = 0;; ++attempt) {
      try {
        step = solve_spd(hw, Vector(-g));
        break;
      } catch (const DecompositionError&) {
        if (attempt >= 60) throw SolverError("Hessian could not be regularized", report);
        hw = h + ridge * Matrix::Identity(p, p);
        ridge *= 10.0;
      }
    }

    const double slope = g.dot(step);
    double scale = 1.0;
    bool accepted = false;
    double f_new = 0.0;
    Vector theta_new;
    while (scale >= 0x1.0p-40) {
      theta_new = theta + scale * step;
      double f_try = 0.0;
      objective.eval(theta_new, &f_try, nullptr, nullptr);
      if (std::isfinite(f_try) && f_try <= f + options.armijo * scale * slope) {
        accepted = true;
        f_new = f_try;
        break;
      }
      scale *= 0.5;
    }
    report.iterations = iter + 1;
    if (!accepted) {
      report.objective = f;
      throw SolverError("line search stalled: no acceptable step length", report);
    }

    theta = std::move(theta_new);
    if (theta.norm() > options.theta_norm_guard) {
      report.objective = f_new;
      throw SolverError("iterate norm exceeded guard (" +
                            std::to_string(options.theta_norm_guard) +
                            "); objective appears unbounded (possible separation)",
                        report);
    }
    f = f_new;
    objective.eval(theta, nullptr, &g, &h);
    report.objective = f;
    report.final_gradient_norm = g.cwiseAbs().maxCoeff();
  }

  report.converged = report.final_gradient_norm <= options.tol;
  return {theta, report};
}

}  // namespace surprise
