// kernel.hpp — reservoir memory kernel R(t) and its Laplace transform B(s) for every
// spectral-density variant.
//
// B(s) = \int_0^\infty J(omega) / (s + i(omega - omega_ref)) d omega, where omega_ref
// is the damped qubit's transition frequency, so B is analytic off the imaginary-axis
// cut s in i*(-inf, omega_ref]. The Markovian variant has the distributional kernel
// R(t) = gamma_tilde * delta(t), i.e. B(s) = gamma_tilde / 2 identically.
#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "qzeno/model.hpp"

namespace qzeno::kernel {

struct PoleHitError : NumericalFailureError {
  using NumericalFailureError::NumericalFailureError;
};
struct NearSingularError : NumericalFailureError {
  using NumericalFailureError::NumericalFailureError;
};

// Exact rational evaluation B(s) = g^2 / (s + gamma/2 + i*delta_c).
// Throws PoleHitError when s lands on the pole.
cdouble lorentzian_B(cdouble s, const model::LorentzianDensity& d);

// B(s) = -i (g^2/omega_c) * zz^S * e^{zz} * Gamma(-S, zz) with zz = (-i s - omega_eg)/omega_c,
// evaluated with the principal power and the scaled incomplete gamma so the two
// exponential factors never overflow separately. Analytic off the cut
// s in i*(-inf, omega_eg]; evaluating on the cut throws PoleHitError.
cdouble ohmic_B(cdouble s, const model::OhmicDensity& d);

// Quadrature-free transform of a piecewise-linear tabulated density: each segment is
// integrated in closed form (the only error is the tabulation itself). Throws
// NearSingularError when Re s <= 1e-12 and the integrand pole at
// omega = omega_eg_prime - Im(s) falls within one grid cell.
cdouble custom_B(cdouble s, const model::TabulatedDensity& d);

// Memory kernel R(t) = \int_0^\infty J(omega) e^{-i (omega - omega_ref) t} d omega.
// Lorentzian and Ohmic use their closed forms (g^2 e^{-(gamma/2 + i delta_c) t} and
// g^2 e^{i omega_eg t} / (1 + i omega_c t)^{S+1}); Tabulated integrates each linear
// segment exactly. The Markovian variant throws UnsupportedOperationError directing
// the caller to the phenomenological local-damping route.
cdouble kernel_R(double t, const model::SpectralDensity& density);

// Evaluable transform plus the metadata the inversion engines need.
struct KernelTransform {
  std::function<cdouble(cdouble)> B;  // s -> B(s)
  std::string variant;                // markovian | lorentzian | ohmic | tabulated
  bool rational = false;              // B is rational (exact pole algebra available)
  bool point_mass = false;            // Markovian delta kernel: B constant, no decay at infinity
  double total_weight = 0.0;          // integral of J = R(0) = g^2 (0 for Markovian)
  double sigma_min = 0.0;             // declared abscissa of direct validity
  double cut_top = 0.0;               // branch point: B analytic off s in i*(-inf, cut_top]
  double cut_bottom = -1e300;         // lower end of the cut (finite for tabulated supports)
  bool has_cut = false;
  std::vector<cdouble> b_poles;       // poles of B itself (Lorentzian)
};

KernelTransform make_transform(const model::SpectralDensity& density);

// Branch-cut guard: scans B along a proposed contour and reports whether any jump
// between consecutive samples exceeds 10x the local (median-of-neighbors) jump scale.
// Used by the Talbot engine on non-rational kernels.
bool contour_jump_detected(const std::function<cdouble(cdouble)>& B,
                           const std::vector<cdouble>& contour_samples);

}  // namespace qzeno::kernel
