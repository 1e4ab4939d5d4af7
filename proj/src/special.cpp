// special.cpp — principal-branch upper incomplete gamma for real order, complex argument.
//
// The exponentially scaled core G(a, z) = e^z Gamma(a, z) is computed first and the
// plain value recovered as e^{-z} G. Orders are reduced to a base order in (0, 1]
// (or to 0 for nonpositive integer orders, where the base case is the exponential
// integral E1) and walked to the requested order with the two-term recurrence, which
// scales cleanly: G(a-1, z) = (G(a, z) - z^{a-1}) / (a - 1).
#include "qzeno/special.hpp"

#include "qzeno/model.hpp"

#include <cmath>
#include <sstream>

namespace qzeno::special {

namespace {

using cdouble = std::complex<double>;

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kTol = 5e-17;
constexpr int kMaxIter = 1200;

std::string describe(double a, cdouble z) {
  std::ostringstream out;
  out << "a=" << a << ", z=(" << z.real() << "," << z.imag() << ")";
  return out.str();
}

// Modified Lentz evaluation of the standard continued fraction; returns
// G(a, z) = z^a * CF, valid away from the negative real axis for moderate |z|.
cdouble scaled_cf(double a, cdouble z) {
  constexpr double kFpMin = 1e-290;
  cdouble b = z + 1.0 - a;
  cdouble c = 1.0 / kFpMin;
  cdouble d = 1.0 / b;
  if (std::abs(b) < kFpMin) d = 1.0 / cdouble{kFpMin, 0.0};
  cdouble h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = b + an / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const cdouble del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kTol) return std::pow(z, cdouble{a, 0.0}) * h;
  }
  throw NumericalFailureError("incomplete gamma continued fraction failed to converge for " +
                              describe(a, z));
}

// Lower-series route: gamma(a, z) = z^a e^{-z} sum_n z^n / (a (a+1) ... (a+n)), so
// G(a, z) = e^z Gamma(a) - z^a * sum. Used only at small |z| or to the left of the
// imaginary axis, where e^z stays tame.
cdouble scaled_series(double a, cdouble z) {
  cdouble term = 1.0 / a;
  cdouble sum = term;
  for (int n = 1; n <= 2000; ++n) {
    term *= z / (a + n);
    sum += term;
    if (std::abs(term) < kTol * std::abs(sum))
      return std::exp(z) * std::tgamma(a) - std::pow(z, cdouble{a, 0.0}) * sum;
  }
  throw NumericalFailureError("incomplete gamma series failed to converge for " + describe(a, z));
}

// Scaled exponential integral e^z E1(z) = G(0, z).
cdouble scaled_e1(cdouble z) {
  const double absz = std::abs(z);
  if (absz <= 2.3 || std::abs(std::arg(z)) > 2.45) {
    cdouble term{1.0, 0.0};
    cdouble sum{0.0, 0.0};
    for (int k = 1; k <= 2000; ++k) {
      term *= -z / static_cast<double>(k);
      const cdouble contrib = -term / static_cast<double>(k);
      sum += contrib;
      if (std::abs(contrib) < kTol * (std::abs(sum) + 1e-300))
        return std::exp(z) * (-kEulerGamma - std::log(z) + sum);
    }
    throw NumericalFailureError("exponential integral series failed to converge for " +
                                describe(0.0, z));
  }
  return scaled_cf(0.0, z);
}

cdouble scaled_core(double a, cdouble z) {
  if (z == cdouble{0.0, 0.0}) {
    if (a <= 0.0) throw std::domain_error("Gamma(a, 0) diverges for a <= 0");
    return std::tgamma(a);
  }

  const bool integer_order = (a == std::floor(a));
  double a_base;
  if (integer_order && a <= 0.0) {
    a_base = 0.0;
  } else {
    a_base = a - std::floor(a);
    if (a_base == 0.0) a_base = 1.0;  // positive integer order
  }

  cdouble g;
  if (a_base == 0.0) {
    g = scaled_e1(z);
  } else if (std::abs(z) >= std::max(2.5, a_base + 1.0) && std::abs(std::arg(z)) <= 2.45) {
    g = scaled_cf(a_base, z);
  } else {
    g = scaled_series(a_base, z);
  }

  double cur = a_base;
  while (cur > a + 0.5) {  // walk down to negative orders
    const double next = cur - 1.0;
    g = (g - std::pow(z, cdouble{next, 0.0})) / next;
    cur = next;
  }
  while (cur < a - 0.5) {  // walk up for orders above the base
    g = cur * g + std::pow(z, cdouble{cur, 0.0});
    cur += 1.0;
  }
  return g;
}

}  // namespace

cdouble upper_incomplete_gamma(double a, cdouble z) {
  return std::exp(-z) * scaled_core(a, z);
}

cdouble upper_incomplete_gamma_scaled(double a, cdouble z) { return scaled_core(a, z); }

}  // namespace qzeno::special
