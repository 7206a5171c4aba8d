#pragma once

#include <functional>

namespace hetfair {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Globally adaptive 15-point Gauss-Kronrod integration of f over [a, b].
/// Subdivides the interval with the largest error estimate until the total
/// estimate is below max(rel_tol * |value|, abs_tol). f is never evaluated at
/// the endpoints, so integrable endpoint singularities are handled.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol = 1e-10, double abs_tol = 0.0,
                                    int max_intervals = 20000);

}  // namespace hetfair
