// markovian.hpp — closed-form dynamics, eigensystem, and the analytic exceptional-point
// condition for the Markovian-damped pair, the exactly solvable reference case.
#pragma once

#include <array>
#include <complex>
#include <optional>

#include "qzeno/model.hpp"

namespace qzeno::markovian {

// c1_tilde(t) for epsilon = 0:
//   e^{-gamma t/4} [cos(Omega t/4) + (gamma/Omega) sin(Omega t/4)],
//   Omega = sqrt((4J)^2 - gamma^2),
// continued through gamma = 4J by the degenerate branch e^{-J t}(1 + J t) (used within
// |gamma - 4J| < 1e-8 J) and by hyperbolic functions for gamma > 4J. Output is real.
cdouble c1_closed_form(double t, double gamma_tilde, double J);

struct EigenSystem {
  cdouble lambda1{};  // no-excitation level
  cdouble lambda2{};  // doubly excited level (damped)
  cdouble lambda3{};  // single-excitation branch, -sqrt branch
  cdouble lambda4{};  // single-excitation branch, +sqrt branch
  std::array<cdouble, 2> phi3{};  // in the {|e g>, |g e>} basis
  std::array<cdouble, 2> phi4{};
  double overlap = 0.0;  // |<phi3|phi4>| / (|phi3| |phi4|), 1 at coalescence
};

// Non-Hermitian eigensystem with the substitution omega_e' -> omega_e' - i gamma/2.
// lambda_{3,4} = (Sigma omega - i gamma/2)/2 -/+ (1/4) sqrt((4J)^2 - (gamma + 2 i eps)^2)
// where Sigma omega sums the four level energies.
EigenSystem eigensystem(const model::SystemConfig& sys, double gamma_tilde);

// The single-excitation branches coalesce only for epsilon = 0, at gamma = 4J.
// Returns 4J when |epsilon| < 1e-10 J, nothing otherwise.
std::optional<double> markovian_ep_condition(double epsilon, double J);

}  // namespace qzeno::markovian
