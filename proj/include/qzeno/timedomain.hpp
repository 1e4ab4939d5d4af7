// timedomain.hpp — independent time-domain oracles: the Volterra integro-differential
// solver for the exact reduced dynamics and the discretized-bath full integrator.
#pragma once

#include <complex>
#include <vector>

#include "qzeno/model.hpp"

namespace qzeno::timedomain {

struct RefinementRequiredError : NumericalFailureError {
  using NumericalFailureError::NumericalFailureError;
};

// Integrates
//   dc1/dt = -i J c2 e^{-i eps t}
//   dc2/dt = -i J c1 e^{+i eps t} - \int_0^t R(t-t') c2(t') dt'
// on a uniform grid by trapezoidal product integration of the memory term with an
// Euler predictor and two trapezoid corrector passes (second-order accurate). The
// Markovian variant replaces the memory integral by the local term -(gamma/2) c2.
// Throws RefinementRequiredError when the declared step-size estimate exceeds 1e-3.
model::AmplitudeTrace solve_volterra(const model::SystemConfig& sys,
                                     const model::SpectralDensity& density,
                                     const model::TimeGrid& grid);

struct BathDiscretization {
  enum class Strategy { UniformGrid, GaussQuadratureNodes };

  std::vector<double> mode_frequencies;  // omega_lambda over the declared support
  std::vector<double> mode_couplings;    // g(omega_lambda) >= 0, sum of squares = weight
  double omega_ref = 0.0;                // damped-qubit frequency (detunings = omega - omega_ref)
  Strategy strategy = Strategy::UniformGrid;
  double captured_weight = 0.0;          // sum g^2
  double total_weight = 0.0;             // integral of J over all frequencies
  double truncation_fraction = 0.0;      // weight outside the support / total
  bool truncation_report = false;        // true when truncation exceeds 0.1%

  double recurrence_time() const;        // 2 pi / (mode spacing), Poincare revival bound
};

// Samples the density into n_modes discrete oscillators with g^2 = J(omega) d omega
// (uniform midpoint grid) or Gauss–Legendre weights. Default supports: Lorentzian
// +/- 40 gamma around the peak, Ohmic [0, 30 omega_c], Tabulated its own support.
// Pass support_min >= support_max to request the default.
BathDiscretization discretize_bath(const model::SpectralDensity& density, int n_modes,
                                   double support_min = 0.0, double support_max = -1.0,
                                   BathDiscretization::Strategy strategy =
                                       BathDiscretization::Strategy::UniformGrid);

// Integrates the closed amplitude system (c1, c2, one amplitude per bath mode) with an
// adaptive Dormand–Prince 5(4) stepper at 1e-12 local tolerance. The full system is
// unitary, so the state norm is conserved to ~1e-8 over desk-scale horizons. Points
// beyond the discretization's recurrence time are flagged via the trace's
// recurrence_time field and accuracy warning.
model::AmplitudeTrace solve_discretized(const model::SystemConfig& sys,
                                        const BathDiscretization& bath,
                                        const model::TimeGrid& grid);

}  // namespace qzeno::timedomain
