// kernel.cpp — memory-kernel transforms B(s) and time-domain kernels R(t).
#include "qzeno/kernel.hpp"

#include "qzeno/special.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qzeno::kernel {

namespace {

std::string fmt_s(cdouble s) {
  std::ostringstream out;
  out << "s=(" << s.real() << "," << s.imag() << ")";
  return out.str();
}

}  // namespace

cdouble lorentzian_B(cdouble s, const model::LorentzianDensity& d) {
  const cdouble denom = s + cdouble{0.5 * d.gamma, d.delta_c};
  const double scale = std::max({1.0, std::abs(s), 0.5 * d.gamma, std::abs(d.delta_c)});
  if (std::abs(denom) < 1e-14 * scale)
    throw PoleHitError("Lorentzian transform evaluated at its pole, " + fmt_s(s));
  return d.g * d.g / denom;
}

cdouble ohmic_B(cdouble s, const model::OhmicDensity& d) {
  if (d.g == 0.0) return {0.0, 0.0};
  const cdouble zz = (cdouble{0.0, -1.0} * s - d.omega_eg) / d.omega_c;
  // The incomplete gamma's cut along zz <= 0 maps to s on i*(-inf, omega_eg].
  if (std::abs(zz.imag()) < 1e-14 * std::max(1.0, std::abs(zz.real())) && zz.real() < 1e-14)
    throw PoleHitError("Ohmic transform evaluated on its branch cut, " + fmt_s(s));
  const cdouble g_scaled = special::upper_incomplete_gamma_scaled(-d.S, zz);
  return cdouble{0.0, -1.0} * (d.g * d.g / d.omega_c) * std::pow(zz, cdouble{d.S, 0.0}) * g_scaled;
}

cdouble custom_B(cdouble s, const model::TabulatedDensity& d) {
  d.validate();
  if (s.real() <= 1e-12) {
    const double pole_omega = d.omega_eg_prime - s.imag();
    const double margin_lo = 0.5 * (d.omega[1] - d.omega[0]);
    const double margin_hi = 0.5 * (d.omega.back() - d.omega[d.omega.size() - 2]);
    if (pole_omega >= d.omega.front() - margin_lo && pole_omega <= d.omega.back() + margin_hi)
      throw NearSingularError("tabulated transform nearly singular: integrand pole at omega=" +
                              std::to_string(pole_omega) + " inside the tabulated support for " +
                              fmt_s(s));
  }
  cdouble acc{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < d.omega.size(); ++i) {
    const double m = (d.j[i + 1] - d.j[i]) / (d.omega[i + 1] - d.omega[i]);
    const cdouble u1 = s + cdouble{0.0, 1.0} * (d.omega[i] - d.omega_eg_prime);
    const cdouble u2 = s + cdouble{0.0, 1.0} * (d.omega[i + 1] - d.omega_eg_prime);
    if (std::abs(u1) < 1e-300 || std::abs(u2) < 1e-300)
      throw PoleHitError("tabulated transform evaluated at an integrand pole, " + fmt_s(s));
    // J restricted to the segment, written in u = s + i(omega - omega_ref):
    // J = -i m u + A, so the integral is -i A Log(u2/u1) - m (u2 - u1). A straight
    // segment subtends less than pi as seen from the origin, so the principal log of
    // the endpoint quotient equals the continuous branch along the segment.
    const cdouble A = d.j[i] + m * (d.omega_eg_prime - d.omega[i]) + cdouble{0.0, 1.0} * m * s;
    acc += cdouble{0.0, -1.0} * A * std::log(u2 / u1) - m * (u2 - u1);
  }
  return acc;
}

namespace {

cdouble tabulated_R(double t, const model::TabulatedDensity& d) {
  cdouble acc{0.0, 0.0};
  double phi_scale = std::max(std::abs(d.omega.front() - d.omega_eg_prime),
                              std::abs(d.omega.back() - d.omega_eg_prime));
  for (std::size_t i = 0; i + 1 < d.omega.size(); ++i) {
    const double phi1 = d.omega[i] - d.omega_eg_prime;
    const double phi2 = d.omega[i + 1] - d.omega_eg_prime;
    const double m = (d.j[i + 1] - d.j[i]) / (phi2 - phi1);
    const double alpha = d.j[i] - m * phi1;  // J(phi) = alpha + m phi on the segment
    if (std::abs(t) * phi_scale < 1e-4) {
      // Small-phase expansion of e^{-i phi t}: moments of J(phi) phi^k up to k = 3.
      double mom[4];
      for (int k = 0; k < 4; ++k) {
        const double p1k = std::pow(phi1, k + 1), p2k = std::pow(phi2, k + 1);
        mom[k] = alpha * (p2k - p1k) / (k + 1) +
                 m * (p2k * phi2 - p1k * phi1) / (k + 2);
      }
      acc += cdouble{mom[0] - 0.5 * t * t * mom[2], -t * mom[1] + t * t * t * mom[3] / 6.0};
    } else {
      // Exact antiderivative (a + b phi) e^{-i phi t} with b = i m / t, a = m/t^2 + i alpha/t.
      const cdouble b{0.0, m / t};
      const cdouble a{m / (t * t), alpha / t};
      const cdouble e1 = std::exp(cdouble{0.0, -phi1 * t});
      const cdouble e2 = std::exp(cdouble{0.0, -phi2 * t});
      acc += (a + b * phi2) * e2 - (a + b * phi1) * e1;
    }
  }
  return acc;
}

}  // namespace

cdouble kernel_R(double t, const model::SpectralDensity& density) {
  return std::visit(
      [t](const auto& d) -> cdouble {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, model::MarkovianDensity>) {
          throw UnsupportedOperationError(
              "the Markovian kernel is a delta distribution; use the local-damping equations "
              "instead of sampling R(t)");
        } else if constexpr (std::is_same_v<T, model::LorentzianDensity>) {
          return d.g * d.g * std::exp(-cdouble{0.5 * d.gamma, d.delta_c} * t);
        } else if constexpr (std::is_same_v<T, model::OhmicDensity>) {
          const cdouble phase = std::exp(cdouble{0.0, d.omega_eg * t});
          return d.g * d.g * phase / std::pow(cdouble{1.0, d.omega_c * t}, d.S + 1.0);
        } else {
          return tabulated_R(t, d);
        }
      },
      density);
}

KernelTransform make_transform(const model::SpectralDensity& density) {
  model::validate(density);
  KernelTransform k;
  k.variant = model::density_type_name(density);
  std::visit(
      [&k](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, model::MarkovianDensity>) {
          const double half_rate = 0.5 * d.gamma_tilde;
          k.B = [half_rate](cdouble) { return cdouble{half_rate, 0.0}; };
          k.rational = true;
          k.point_mass = true;
          k.total_weight = 0.0;
          k.sigma_min = -1e300;
        } else if constexpr (std::is_same_v<T, model::LorentzianDensity>) {
          k.B = [d](cdouble s) { return lorentzian_B(s, d); };
          k.rational = true;
          k.total_weight = d.g * d.g;
          k.sigma_min = -1e300;
          k.b_poles = {cdouble{-0.5 * d.gamma, -d.delta_c}};
        } else if constexpr (std::is_same_v<T, model::OhmicDensity>) {
          k.B = [d](cdouble s) { return ohmic_B(s, d); };
          k.total_weight = d.g * d.g;
          k.sigma_min = 0.0;
          k.has_cut = true;
          k.cut_top = d.omega_eg;
          k.cut_bottom = -1e300;
        } else {
          k.B = [d](cdouble s) { return custom_B(s, d); };
          k.total_weight = d.integral();
          k.sigma_min = 0.0;
          k.has_cut = true;
          k.cut_top = d.omega_eg_prime - d.omega.front();
          k.cut_bottom = d.omega_eg_prime - d.omega.back();
        }
      },
      density);
  return k;
}

bool contour_jump_detected(const std::function<cdouble(cdouble)>& B,
                           const std::vector<cdouble>& contour_samples) {
  const std::size_t n = contour_samples.size();
  if (n < 8) return false;
  std::vector<cdouble> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    try {
      values[i] = B(contour_samples[i]);
    } catch (const NumericalFailureError&) {
      return true;  // a sample landed on (or hugged) a singular set
    }
    if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag())) return true;
  }
  double max_abs = 0.0;
  for (const auto& v : values) max_abs = std::max(max_abs, std::abs(v));
  std::vector<double> jumps(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) jumps[i] = std::abs(values[i + 1] - values[i]);
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    if (jumps[i] <= 1e-9 * max_abs) continue;  // below significance, never a cut crossing
    std::vector<double> neighbors;
    for (std::size_t j = (i >= 4 ? i - 4 : 0); j < std::min(jumps.size(), i + 5); ++j)
      if (j != i) neighbors.push_back(jumps[j]);
    if (neighbors.empty()) continue;
    std::nth_element(neighbors.begin(), neighbors.begin() + neighbors.size() / 2, neighbors.end());
    const double local = neighbors[neighbors.size() / 2];
    if (jumps[i] > 10.0 * std::max(local, 1e-300)) return true;
  }
  return false;
}

}  // namespace qzeno::kernel
