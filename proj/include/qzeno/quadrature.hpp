// quadrature.hpp — adaptive Gauss–Kronrod integration for complex-valued integrands.
#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace qzeno::quadrature {

struct QuadratureResult {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;      // absolute error estimate
  int evaluations = 0;
  bool converged = false;
};

// Adaptive 15-point Gauss–Kronrod rule on [a, b]. The interval is pre-split at the
// given seed points (stationary-phase points, kinks, near-poles) before adaptive
// bisection of the worst interval. Stops when the summed error estimate drops below
// max(abs_tol, rel_tol * |value|) or the interval budget is exhausted.
QuadratureResult integrate(const std::function<std::complex<double>(double)>& f, double a,
                           double b, double abs_tol = 1e-10, double rel_tol = 1e-12,
                           const std::vector<double>& seed_splits = {},
                           int max_intervals = 4000);

}  // namespace qzeno::quadrature
