#pragma once

#include <utility>

#include "surprise/dataset.hpp"

namespace surprise {

struct SolverReport {
  bool converged = false;
  int iterations = 0;
  double final_gradient_norm = 0.0;
  double objective = 0.0;
};

/// Newton failed structurally (line-search stall or diverging iterates).
class SolverError : public Error {
 public:
  SolverError(const std::string& what, SolverReport report)
      : Error(what), report_(report) {}
  const SolverReport& report() const { return report_; }

 private:
  SolverReport report_;
};

void require_symmetric(const Matrix& m, double tol = 1e-12);

/**
 * Symmetric inverse square root via eigendecomposition. Eigenvalues below
 * eigen_floor are raised to eigen_floor; pass eigen_floor <= 0 for the
 * default 1e-10 * max eigenvalue. An eigenvalue below -1e-8 * max|lambda|
 * is a not-PSD error.
 */
Matrix inv_sqrt(const Matrix& m, double eigen_floor = 0.0);

/// Same flooring rules, returning the (pseudo-)inverse itself.
Matrix floored_inverse(const Matrix& m, double eigen_floor = 0.0);

/// Cholesky solve for SPD systems; DecompositionError carries the index of
/// the first non-positive pivot.
Vector solve_spd(const Matrix& m, const Vector& b);
Matrix spd_inverse(const Matrix& m);

/// Value / gradient / Hessian oracle for newton_minimize. Null output
/// pointers are skipped.
class NewtonObjective {
 public:
  virtual ~NewtonObjective() = default;
  virtual void eval(const Vector& theta, double* value, Vector* grad, Matrix* hess) const = 0;
  double value(const Vector& theta) const {
    double f = 0.0;
    eval(theta, &f, nullptr, nullptr);
    return f;
  }
};

struct NewtonOptions {
  double tol = 1e-8;          // gradient sup-norm
  int max_iter = 100;
  double armijo = 1e-4;
  double theta_norm_guard = 1e6;  // separation / divergence guard
};

/**
 * Damped Newton with halving line search. Convergence is declared when the
 * gradient sup-norm drops to tol. A Hessian that fails to factor gets ridge
 * 1e-8 * trace/p added (escalating) before retrying. Exceeding max_iter
 * returns the best iterate with converged=false; a stalled line search or a
 * parameter norm above the guard throws SolverError.
 */
std::pair<Vector, SolverReport> newton_minimize(const NewtonObjective& objective,
                                                Vector theta0,
                                                const NewtonOptions& options = {});

}  // namespace surprise
