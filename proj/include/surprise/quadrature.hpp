#pragma once

#include <functional>

#include "surprise/dataset.hpp"

namespace surprise {

/// Nodes and weights for E[f(Z)], Z standard normal: sum w_i f(x_i).
struct GaussHermite {
  Vector nodes;
  Vector weights;
};

/// Golub-Welsch on the Hermite Jacobi matrix, probabilists' convention.
GaussHermite gauss_hermite(int n);

/// E[f(Z)] by quadrature.
double expect_normal(int n, const std::function<double(double)>& f);
/// E[f(Z1, Z2)] over independent standard normals.
double expect_normal2(int n, const std::function<double(double, double)>& f);

/**
 * Bisection for h(x) = target with h monotone nondecreasing on [lo, hi].
 * Returns the midpoint after the bracket shrinks below tol.
 */
double bisect_monotone(const std::function<double(double)>& h, double target, double lo,
                       double hi, double tol = 1e-12, int max_iter = 200);

}  // namespace surprise
