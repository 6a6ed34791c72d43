#include "surprise/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace surprise {

GaussHermite gauss_hermite(int n) {
  if (n < 1) throw ContractError("quadrature order must be positive");
  // Jacobi matrix of the probabilists' Hermite recurrence:
  // He_{k+1}(x) = x He_k(x) - k He_{k-1}(x)  ->  off-diagonal sqrt(k).
  Matrix jacobi = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(static_cast<double>(k));
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(jacobi);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermite eigensolve failed");
  GaussHermite gh;
  gh.nodes = solver.eigenvalues();
  gh.weights = solver.eigenvectors().row(0).transpose().array().square();
  return gh;
}

double expect_normal(int n, const std::function<double(double)>& f) {
  const GaussHermite gh = gauss_hermite(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += gh.weights(i) * f(gh.nodes(i));
  return acc;
}

double expect_normal2(int n, const std::function<double(double, double)>& f) {
  const GaussHermite gh = gauss_hermite(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      acc += gh.weights(i) * gh.weights(j) * f(gh.nodes(i), gh.nodes(j));
  return acc;
}

double bisect_monotone(const std::function<double(double)>& h, double target, double lo,
                       double hi, double tol, int max_iter) {
  double flo = h(lo) - target;
  double fhi = h(hi) - target;
  if (flo > 0.0 || fhi < 0.0)
    throw NumericalError("bisection bracket does not straddle the target");
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (h(mid) - target <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace surprise
