// markovian.cpp — closed-form reference dynamics and eigensystem for local damping.
#include "qzeno/markovian.hpp"

#include <cmath>

namespace qzeno::markovian {

cdouble c1_closed_form(double t, double gamma_tilde, double J) {
  if (!(J > 0.0)) throw ConfigError("closed form requires J > 0");
  if (gamma_tilde < 0.0) throw ConfigError("closed form requires gamma_tilde >= 0");
  const double fourJ = 4.0 * J;
  if (std::abs(gamma_tilde - fourJ) < 1e-8 * J)
    return {std::exp(-J * t) * (1.0 + J * t), 0.0};
  if (gamma_tilde < fourJ) {
    const double omega = std::sqrt(fourJ * fourJ - gamma_tilde * gamma_tilde);
    const double phase = 0.25 * omega * t;
    return {std::exp(-0.25 * gamma_tilde * t) *
                (std::cos(phase) + (gamma_tilde / omega) * std::sin(phase)),
            0.0};
  }
  const double omega = std::sqrt(gamma_tilde * gamma_tilde - fourJ * fourJ);
  // cosh + (gamma/omega) sinh, written through exponentials of nonpositive argument so
  // the overdamped branch never overflows at late times.
  const double ep = std::exp(0.25 * (omega - gamma_tilde) * t);
  const double em = std::exp(0.25 * (-omega - gamma_tilde) * t);
  return {0.5 * (ep + em) + (gamma_tilde / omega) * 0.5 * (ep - em), 0.0};
}

EigenSystem eigensystem(const model::SystemConfig& sys, double gamma_tilde) {
  sys.validate();
  if (gamma_tilde < 0.0) throw ConfigError("eigensystem requires gamma_tilde >= 0");
  const double J = sys.coupling_J;
  const double eps = sys.epsilon;
  const auto& en = sys.energies;

  EigenSystem out;
  out.lambda1 = {en.omega_g + en.omega_g_prime, 0.0};
  out.lambda2 = cdouble{en.omega_e + en.omega_e_prime, -0.5 * gamma_tilde};

  const cdouble avg = 0.5 * (cdouble{en.total(), -0.5 * gamma_tilde});
  const cdouble inner = cdouble{gamma_tilde, 2.0 * eps};  // gamma + 2 i eps
  const cdouble root = 0.25 * std::sqrt(cdouble{16.0 * J * J, 0.0} - inner * inner);
  out.lambda3 = avg - root;
  out.lambda4 = avg + root;

  const cdouble A{en.omega_e + en.omega_g_prime, 0.0};  // |e g> diagonal entry
  out.phi3 = {cdouble{J, 0.0}, out.lambda3 - A};
  out.phi4 = {cdouble{J, 0.0}, out.lambda4 - A};
  const cdouble dot = std::conj(out.phi3[0]) * out.phi4[0] + std::conj(out.phi3[1]) * out.phi4[1];
  const double n3 = std::sqrt(std::norm(out.phi3[0]) + std::norm(out.phi3[1]));
  const double n4 = std::sqrt(std::norm(out.phi4[0]) + std::norm(out.phi4[1]));
  out.overlap = std::abs(dot) / (n3 * n4);
  return out;
}

std::optional<double> markovian_ep_condition(double epsilon, double J) {
  if (!(J > 0.0)) throw ConfigError("the exceptional-point condition requires J > 0");
  if (std::abs(epsilon) < 1e-10 * J) return 4.0 * J;
  return std::nullopt;
}

}  // namespace qzeno::markovian
