// special.hpp — upper incomplete gamma function for real order and complex argument.
//
// Provides Gamma(a, z) on the principal branch for any real a (including the negative
// and integer orders the Ohmic kernel needs) and the exponentially scaled variant
// e^z * Gamma(a, z), which stays finite for arguments far into the left half plane.
#pragma once

#include <complex>

namespace qzeno::special {

// Principal-branch Gamma(a, z) = \int_z^\infty t^{a-1} e^{-t} dt.
//
// Routing: a modified Lentz continued fraction away from the negative real axis for
// moderate-to-large |z|; the all-z lower-series otherwise; nonpositive integer orders
// start from the exponential integral E1 and all orders below (0, 1] are reached by
// the downward recurrence Gamma(a-1, z) = (Gamma(a, z) - z^{a-1} e^{-z}) / (a - 1).
//
// Throws std::domain_error for z = 0 with a <= 0, NumericalFailureError if the
// continued fraction fails to converge (the message carries z).
std::complex<double> upper_incomplete_gamma(double a, std::complex<double> z);

// e^z * Gamma(a, z), computed without forming the overflowing factors separately.
std::complex<double> upper_incomplete_gamma_scaled(double a, std::complex<double> z);

}  // namespace qzeno::special
