// laplace.cpp — F1(s) assembly, exact pole algebra for rational kernels, and the two
// independent numerical inversion engines (pole-aware modified Talbot and a
// Fourier-series expansion with a continued-fraction-accelerated tail).
#include "qzeno/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qzeno::laplace {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cdouble kI{0.0, 1.0};

// --- polynomial helpers (ascending coefficients) -----------------------------------

cdouble poly_eval(const std::vector<cdouble>& c, cdouble s) {
  cdouble acc{0.0, 0.0};
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * s + c[i];
  return acc;
}

std::vector<cdouble> poly_derivative(const std::vector<cdouble>& c) {
  if (c.size() <= 1) return {cdouble{0.0, 0.0}};
  std::vector<cdouble> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
  return d;
}

std::vector<cdouble> poly_mul(const std::vector<cdouble>& u, const std::vector<cdouble>& v) {
  std::vector<cdouble> out(u.size() + v.size() - 1, cdouble{0.0, 0.0});
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i + j] += u[i] * v[j];
  return out;
}

std::vector<cdouble>& poly_add_inplace(std::vector<cdouble>& u, const std::vector<cdouble>& v) {
  if (v.size() > u.size()) u.resize(v.size(), cdouble{0.0, 0.0});
  for (std::size_t i = 0; i < v.size(); ++i) u[i] += v[i];
  return u;
}

std::vector<cdouble> poly_scale(std::vector<cdouble> u, cdouble a) {
  for (auto& c : u) c *= a;
  return u;
}

// --- root finding ------------------------------------------------------------------

std::vector<cdouble> quadratic_roots(cdouble a0, cdouble a1, cdouble a2) {
  const cdouble disc = a1 * a1 - 4.0 * a2 * a0;
  cdouble sq = std::sqrt(disc);
  if ((std::conj(a1) * sq).real() < 0.0) sq = -sq;
  const cdouble q = -0.5 * (a1 + sq);
  if (std::abs(q) > 1e-300) return {q / a2, a0 / q};
  return {(-a1 + sq) / (2.0 * a2), (-a1 - sq) / (2.0 * a2)};
}

std::vector<cdouble> cubic_roots(cdouble a0, cdouble a1, cdouble a2, cdouble a3) {
  const cdouble b2 = a2 / a3, b1 = a1 / a3, b0 = a0 / a3;
  const cdouble shift = b2 / 3.0;
  const cdouble p = b1 - b2 * b2 / 3.0;
  const cdouble q = 2.0 * b2 * b2 * b2 / 27.0 - b2 * b1 / 3.0 + b0;
  const cdouble root_term = std::sqrt(0.25 * q * q + p * p * p / 27.0);
  cdouble u3 = -0.5 * q + root_term;
  const cdouble alt = -0.5 * q - root_term;
  if (std::abs(alt) > std::abs(u3)) u3 = alt;
  if (std::abs(u3) < 1e-300) return {-shift, -shift, -shift};
  const cdouble C = std::pow(u3, 1.0 / 3.0);
  const cdouble omega{-0.5, 0.8660254037844386467637};
  std::vector<cdouble> roots(3);
  cdouble w = C;
  for (int k = 0; k < 3; ++k) {
    roots[static_cast<std::size_t>(k)] = w - p / (3.0 * w) - shift;
    w *= omega;
  }
  return roots;
}

void newton_polish(const std::vector<cdouble>& poly, const std::vector<cdouble>& dpoly,
                   cdouble& root) {
  for (int it = 0; it < 4; ++it) {
    const cdouble dp = poly_eval(dpoly, root);
    if (std::abs(dp) < 1e-300) return;
    root -= poly_eval(poly, root) / dp;
  }
}

// Roots plus residues, detecting a coalesced pair (tolerance 1e-7 on the root scale).
// A coalesced pair (a, a) in a cubic with third root b contributes (A1 + A2 t) e^{a t},
//   A2 = N(a) / (lead (a - b)),   A1 = [N'(a)(a - b) - N(a)] / (lead (a - b)^2),
// and the simple root contributes C e^{b t}, C = N(b) / (lead (b - a)^2).
void attach_poles(LaplaceAmplitude& F) {
  const auto& D = F.denom;
  const auto& N = F.numer;
  std::vector<cdouble> roots;
  if (D.size() == 3)
    roots = quadratic_roots(D[0], D[1], D[2]);
  else if (D.size() == 4)
    roots = cubic_roots(D[0], D[1], D[2], D[3]);
  else
    throw NumericalFailureError("rational transform has unexpected denominator degree " +
                                std::to_string(D.size() - 1));
  const auto dD = poly_derivative(D);
  for (auto& r : roots) newton_polish(D, dD, r);

  double scale = 1.0;
  for (const auto& r : roots) scale = std::max(scale, std::abs(r));
  const double tol = 1e-7 * scale;
  int pair_i = -1, pair_j = -1;
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < tol) {
        if (pair_i >= 0)
          throw NumericalFailureError(
              "three denominator roots coalesced; the residue algebra handles at most a "
              "double root");
        pair_i = static_cast<int>(i);
        pair_j = static_cast<int>(j);
      }

  const cdouble lead = D.back();
  F.poles.clear();
  if (pair_i < 0) {
    for (const auto& r : roots) {
      PoleInfo p;
      p.s = r;
      p.residue = poly_eval(N, r) / poly_eval(dD, r);
      F.poles.push_back(p);
    }
  } else {
    F.has_double_root = true;
    const cdouble a = 0.5 * (roots[static_cast<std::size_t>(pair_i)] +
                             roots[static_cast<std::size_t>(pair_j)]);
    const auto dN = poly_derivative(N);
    PoleInfo dbl;
    dbl.s = a;
    dbl.multiplicity = 2;
    if (roots.size() == 2) {
      dbl.residue_t = poly_eval(N, a) / lead;
      dbl.residue = poly_eval(dN, a) / lead;
      F.poles = {dbl};
    } else {
      cdouble b{};
      for (std::size_t k = 0; k < roots.size(); ++k)
        if (static_cast<int>(k) != pair_i && static_cast<int>(k) != pair_j) b = roots[k];
      const cdouble ab = a - b;
      dbl.residue_t = poly_eval(N, a) / (lead * ab);
      dbl.residue = (poly_eval(dN, a) * ab - poly_eval(N, a)) / (lead * ab * ab);
      PoleInfo simple;
      simple.s = b;
      simple.residue = poly_eval(N, b) / (lead * ab * ab);
      F.poles = {dbl, simple};
    }
  }

  // Initial-value consistency: the residue constants must sum to c1(0). Near a root
  // collision the individual residues grow like 1/gap while their sum stays O(1), and
  // the discriminant's roundoff amplifies the sum error by up to (sum |residue|)^3.
  cdouble sum{0.0, 0.0};
  double res_mag = 0.0;
  for (const auto& p : F.poles) {
    sum += p.residue;
    res_mag += std::abs(p.residue) + std::abs(p.residue_t);
  }
  const double ivt_tol = 1e-8 * std::max(1.0, std::abs(F.c1_initial)) +
                         2e-16 * res_mag * res_mag * res_mag;
  if (std::abs(sum - F.c1_initial) > ivt_tol)
    throw NumericalFailureError("pole residues violate the initial-value theorem (sum=" +
                                std::to_string(std::abs(sum)) + ")");
}

void finish_rational(LaplaceAmplitude& F) {
  F.rational = true;
  attach_poles(F);
  const auto numer = F.numer;
  const auto denom = F.denom;
  F.F = [numer, denom](cdouble s) { return poly_eval(numer, s) / poly_eval(denom, s); };
  double im_max = 0.0, re_max = -1e300;
  for (const auto& p : F.poles) {
    im_max = std::max(im_max, std::abs(p.s.imag()));
    re_max = std::max(re_max, p.s.real());
  }
  F.feature_extent = std::max(3.0, im_max + 2.5);
  F.sigma0 = re_max + 0.1;
}

void finish_composed(LaplaceAmplitude& F, const kernel::KernelTransform& k, double eps_shift) {
  F.rational = false;
  if (k.variant == "ohmic") {
    F.feature_extent = std::max(3.0, std::abs(k.cut_top - eps_shift) + 2.5);
  } else if (k.has_cut) {
    F.feature_extent = std::max(3.0, std::max(std::abs(k.cut_top - eps_shift),
                                              std::abs(k.cut_bottom - eps_shift)) +
                                         2.5);
  }
  F.sigma0 = 0.5;
}

// --- Talbot engine -------------------------------------------------------------------

// Midpoint discretization of the cotangent contour s = sigma0 + r theta (cot theta + i).
cdouble talbot_sum(const std::function<cdouble(cdouble)>& Ffun, double t, int M, double sigma0,
                   double r) {
  cdouble acc{0.0, 0.0};
  for (int k = 0; k < M; ++k) {
    const double theta = -kPi + (k + 0.5) * 2.0 * kPi / M;
    cdouble s, ds;
    if (std::abs(theta) < 1e-8) {
      // Contour vertex: theta*cot(theta) -> 1 and cot - theta/sin^2 -> -2*theta/3.
      s = {sigma0 + r * (1.0 - theta * theta / 3.0), r * theta};
      ds = {r * (-2.0 * theta / 3.0), r};
    } else {
      const double cot = std::cos(theta) / std::sin(theta);
      s = {sigma0 + r * theta * cot, r * theta};
      ds = {r * (cot - theta / (std::sin(theta) * std::sin(theta))), r};
    }
    acc += Ffun(s) * std::exp(s * t) * ds;
  }
  return acc / (kI * static_cast<double>(M));
}

// --- Fourier-series engine -----------------------------------------------------------

// Rutishauser quotient-difference recurrence turning power-series coefficients into
// continued-fraction coefficients, with rolling rows and tiny-denominator substitution.
std::vector<cdouble> qd_coefficients(const std::vector<cdouble>& a) {
  const std::size_t n = a.size();
  std::vector<cdouble> d(n, cdouble{0.0, 0.0});
  bool all_zero = true;
  for (const auto& v : a)
    if (std::abs(v) > 1e-300) all_zero = false;
  if (all_zero) return d;  // a zero tail contributes nothing

  auto safe = [](cdouble v) { return std::abs(v) < 1e-300 ? cdouble{1e-300, 0.0} : v; };
  d[0] = a[0];
  std::vector<cdouble> q_prev(n - 1), e_prev(n - 1, cdouble{0.0, 0.0});
  for (std::size_t j = 0; j + 1 < n; ++j) q_prev[j] = a[j + 1] / safe(a[j]);
  if (n >= 2) d[1] = -q_prev[0];
  for (std::size_t r = 1; 2 * r < n; ++r) {
    const std::size_t e_len = q_prev.size() - 1;
    std::vector<cdouble> e_cur(e_len);
    for (std::size_t j = 0; j < e_len; ++j) e_cur[j] = e_prev[j + 1] + q_prev[j + 1] - q_prev[j];
    d[2 * r] = -e_cur[0];
    if (2 * r + 1 >= n) break;
    if (e_len < 2) break;
    std::vector<cdouble> q_cur(e_len - 1);
    for (std::size_t j = 0; j + 1 < e_len; ++j)
      q_cur[j] = q_prev[j + 1] * e_cur[j + 1] / safe(e_cur[j]);
    d[2 * r + 1] = -q_cur[0];
    q_prev = std::move(q_cur);
    e_prev = std::move(e_cur);
  }
  return d;
}

// Evaluates the continued fraction d[0]/(1 + d[1] z/(1 + d[2] z/(...))) by the forward
// A/B recurrence, with magnitude rescaling and the improved last-term remainder.
cdouble cf_eval(const std::vector<cdouble>& d, cdouble z) {
  const std::size_t n = d.size();
  if (n == 0) return {0.0, 0.0};
  if (n == 1) return d[0];
  cdouble Am2{0.0, 0.0}, Bm2{1.0, 0.0}, Am1 = d[0], Bm1{1.0, 0.0};
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const cdouble A = Am1 + d[k] * z * Am2;
    const cdouble B = Bm1 + d[k] * z * Bm2;
    const double sc = 1.0 / (std::abs(B) + 1e-300);
    Am2 = Am1 * sc;
    Bm2 = Bm1 * sc;
    Am1 = A * sc;
    Bm1 = B * sc;
  }
  const cdouble h2m = 0.5 * (1.0 + z * (d[n - 2] - d[n - 1]));
  cdouble R = -h2m;
  if (std::abs(h2m) > 1e-300) R = -h2m * (1.0 - std::sqrt(1.0 + z * d[n - 1] / (h2m * h2m)));
  const cdouble A = Am1 + R * Am2;
  const cdouble B = Bm1 + R * Bm2;
  return A / B;
}

// One Bromwich-line sampling shared by several evaluation times: samples at
// s = sigma + i k pi / T (and the mirrored line), a truncated power-series head of
// length K0 and a 2*depth+1 coefficient continued-fraction tail.
struct FourierLine {
  double T = 0.0;
  double sigma = 0.0;
  int K0 = 0;
  int depth = 40;
  std::vector<cdouble> a_plus, a_minus;  // a_plus[k] = F(sigma + i k pi/T), a[0] halved
};

FourierLine build_line(const LaplaceAmplitude& F, double T, int depth) {
  FourierLine line;
  line.T = T;
  line.sigma = -std::log(1e-13) / (2.0 * T);
  line.depth = depth;
  line.K0 = static_cast<int>(std::ceil(T * F.feature_extent / kPi));
  const int n = line.K0 + 2 * depth + 1;
  line.a_plus.resize(static_cast<std::size_t>(n));
  line.a_minus.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const cdouble s_up{line.sigma, k * kPi / T};
    const cdouble s_dn{line.sigma, -k * kPi / T};
    line.a_plus[static_cast<std::size_t>(k)] = F.F(s_up);
    line.a_minus[static_cast<std::size_t>(k)] = F.F(s_dn);
  }
  line.a_plus[0] *= 0.5;
  line.a_minus[0] *= 0.5;
  return line;
}

cdouble eval_side(const std::vector<cdouble>& a, const std::vector<cdouble>& d_tail, int K0,
                  cdouble z) {
  cdouble head{0.0, 0.0};
  cdouble zk{1.0, 0.0};
  for (int k = 0; k < K0; ++k) {
    head += a[static_cast<std::size_t>(k)] * zk;
    zk *= z;
  }
  return head + zk * cf_eval(d_tail, z);
}

cdouble eval_line(const FourierLine& line, const std::vector<cdouble>& d_plus,
                  const std::vector<cdouble>& d_minus, double t) {
  const cdouble zp = std::exp(cdouble{0.0, kPi * t / line.T});
  const cdouble zm = std::conj(zp);
  const cdouble plus = eval_side(line.a_plus, d_plus, line.K0, zp);
  const cdouble minus = eval_side(line.a_minus, d_minus, line.K0, zm);
  return std::exp(line.sigma * t) / (2.0 * line.T) * (plus + minus);
}

std::vector<cdouble> tail_slice(const std::vector<cdouble>& a, int K0, int n_tail) {
  return std::vector<cdouble>(a.begin() + K0, a.begin() + K0 + n_tail);
}

}  // namespace

// --- transform assembly ----------------------------------------------------------------

LaplaceAmplitude build_F1(const model::SystemConfig& sys, const kernel::KernelTransform& k) {
  sys.validate();
  const double J = sys.coupling_J;
  const double eps = sys.epsilon;
  const cdouble c1 = sys.initial_c1;
  const cdouble c2 = sys.initial_c2;

  LaplaceAmplitude F;
  F.topology = k.point_mass ? LaplaceAmplitude::Topology::MarkovianTwoQubit
                            : LaplaceAmplitude::Topology::TwoQubit;
  F.kernel_rational = k.rational;
  F.kernel_has_cut = k.has_cut;
  F.c1_initial = c1;
  const auto B = k.B;
  F.B_shifted = [B, eps](cdouble s) { return B(s + kI * eps); };

  if (k.rational && k.point_mass) {
    const cdouble p_t = kI * eps + k.B(cdouble{0.0, 0.0});  // i eps + gamma_tilde / 2
    F.denom = {cdouble{J * J, 0.0}, p_t, cdouble{1.0, 0.0}};
    F.numer = {c1 * p_t - kI * J * c2, c1};
    finish_rational(F);
  } else if (k.rational) {
    const cdouble bp = k.b_poles.at(0);  // pole of B itself: -gamma/2 - i delta_c
    const double g2 = k.total_weight;
    const cdouble q = kI * eps - bp;  // gamma/2 + i (delta_c + eps)
    const cdouble p = kI * eps;
    const std::vector<cdouble> sp{p, cdouble{1.0, 0.0}};
    const std::vector<cdouble> sq{q, cdouble{1.0, 0.0}};
    auto core = poly_mul(sp, sq);  // (s + p)(s + q)
    std::vector<cdouble> denom = poly_mul({cdouble{0.0, 0.0}, cdouble{1.0, 0.0}}, core);
    std::vector<cdouble> g2s{cdouble{0.0, 0.0}, cdouble{g2, 0.0}};
    poly_add_inplace(denom, g2s);
    poly_add_inplace(denom, poly_scale(sq, cdouble{J * J, 0.0}));
    std::vector<cdouble> numer = core;
    numer[0] += g2;
    numer = poly_scale(numer, c1);
    poly_add_inplace(numer, poly_scale(sq, -kI * J * c2));
    F.denom = std::move(denom);
    F.numer = std::move(numer);
    finish_rational(F);
  } else {
    F.F = [B, J, eps, c1, c2](cdouble s) {
      const cdouble u = s + kI * eps + B(s + kI * eps);
      return (c1 * u - kI * J * c2) / (s * u + J * J);
    };
    finish_composed(F, k, eps);
  }
  return F;
}

namespace {

void require_default_ic(const model::SystemConfig& sys, const char* what) {
  if (std::abs(sys.initial_c1 - cdouble{1.0, 0.0}) > 1e-12 ||
      std::abs(sys.initial_c2) > 1e-12)
    throw UnsupportedOperationError(std::string(what) +
                                    " requires the default initial condition c1(0)=1, c2(0)=0");
  if (std::abs(sys.epsilon) > 1e-12)
    throw UnsupportedOperationError(std::string(what) +
                                    " assumes identical resonant satellites (epsilon = 0)");
}

}  // namespace

LaplaceAmplitude build_F1_n_baths(const model::SystemConfig& sys,
                                  const kernel::KernelTransform& k) {
  sys.validate();
  require_default_ic(sys, "the N-separate-bath transform");
  const double J = sys.coupling_J;
  const double N = sys.n_qubits;

  LaplaceAmplitude F;
  F.topology = LaplaceAmplitude::Topology::NSeparateBaths;
  F.kernel_rational = k.rational;
  F.kernel_has_cut = k.has_cut;
  F.c1_initial = {1.0, 0.0};
  const auto B = k.B;
  F.B_shifted = B;

  if (k.rational && k.point_mass) {
    const cdouble half_rate = k.B(cdouble{0.0, 0.0});
    F.denom = {cdouble{N * J * J, 0.0}, half_rate, cdouble{1.0, 0.0}};
    F.numer = {half_rate, cdouble{1.0, 0.0}};
    finish_rational(F);
  } else if (k.rational) {
    const cdouble q0 = -k.b_poles.at(0);  // gamma/2 + i delta_c
    const double g2 = k.total_weight;
    // denom = s^2 (s + q0) + g^2 s + N J^2 (s + q0), numer = s (s + q0) + g^2
    F.denom = {N * J * J * q0, cdouble{g2 + N * J * J, 0.0}, q0, cdouble{1.0, 0.0}};
    F.numer = {cdouble{g2, 0.0}, q0, cdouble{1.0, 0.0}};
    finish_rational(F);
  } else {
    F.F = [B, J, N](cdouble s) { return 1.0 / (s + N * J * J / (s + B(s))); };
    finish_composed(F, k, 0.0);
  }
  return F;
}

LaplaceAmplitude build_F1_common_bath(const model::SystemConfig& sys,
                                      const kernel::KernelTransform& k) {
  sys.validate();
  require_default_ic(sys, "the N-common-bath transform");
  const double J = sys.coupling_J;
  const double N = sys.n_qubits;

  LaplaceAmplitude F;
  F.topology = LaplaceAmplitude::Topology::NCommonBath;
  F.kernel_rational = k.rational;
  F.kernel_has_cut = k.has_cut;
  F.c1_initial = {1.0, 0.0};
  const auto B = k.B;
  F.B_shifted = [B, N](cdouble s) { return N * B(s); };

  if (k.rational && k.point_mass) {
    const cdouble half_rate = N * k.B(cdouble{0.0, 0.0});
    F.denom = {cdouble{N * J * J, 0.0}, half_rate, cdouble{1.0, 0.0}};
    F.numer = {half_rate, cdouble{1.0, 0.0}};
    finish_rational(F);
  } else if (k.rational) {
    const cdouble q0 = -k.b_poles.at(0);
    const double g2 = N * k.total_weight;  // common bath: B -> N B
    F.denom = {N * J * J * q0, cdouble{g2 + N * J * J, 0.0}, q0, cdouble{1.0, 0.0}};
    F.numer = {cdouble{g2, 0.0}, q0, cdouble{1.0, 0.0}};
    finish_rational(F);
  } else {
    F.F = [B, J, N](cdouble s) { return 1.0 / (s + N * J * J / (s + N * B(s))); };
    finish_composed(F, k, 0.0);
  }
  return F;
}

LaplaceAmplitude build_for_config(const model::SystemConfig& sys,
                                  const kernel::KernelTransform& k) {
  if (sys.n_qubits <= 1) return build_F1(sys, k);
  if (sys.bath_topology == model::BathTopology::SeparateBaths) return build_F1_n_baths(sys, k);
  return build_F1_common_bath(sys, k);
}

// --- pole route ------------------------------------------------------------------------

std::vector<PoleInfo> rational_poles(const LaplaceAmplitude& F) {
  if (!F.rational)
    throw UnsupportedOperationError(
        "pole extraction requires a rational transform (Markovian or Lorentzian kernel)");
  return F.poles;
}

cdouble c1_pole_route(const LaplaceAmplitude& F, double t) {
  if (!F.rational)
    throw UnsupportedOperationError("the residue route requires a rational transform");
  cdouble acc{0.0, 0.0};
  for (const auto& p : F.poles) acc += (p.residue + p.residue_t * t) * std::exp(p.s * t);
  return acc;
}

double log_abs_c1_pole_route(const LaplaceAmplitude& F, double t) {
  if (!F.rational)
    throw UnsupportedOperationError("the residue route requires a rational transform");
  double re_dom = -1e300;
  for (const auto& p : F.poles) re_dom = std::max(re_dom, p.s.real());
  cdouble acc{0.0, 0.0};
  for (const auto& p : F.poles)
    acc += (p.residue + p.residue_t * t) * std::exp((p.s - re_dom) * t);
  return re_dom * t + std::log(std::max(std::abs(acc), 1e-300));
}

// --- inversion -------------------------------------------------------------------------

model::AmplitudeTrace invert(const LaplaceAmplitude& F, const model::TimeGrid& grid,
                             Engine engine) {
  grid.validate();
  const std::size_t n = grid.points.size();
  std::vector<cdouble> c1(n);
  std::vector<double> est(n, 0.0);

  if (engine == Engine::Talbot) {
    if (!F.rational) {
      // Continuity guard along a representative contour; the cotangent contour always
      // dips below any cut reaching down the imaginary axis, so declared cuts are fatal.
      double t_rep = 1.0;
      for (double t : grid.points)
        if (t > 0.0) t_rep = std::max(t_rep, t);
      const int Mg = 64;
      const double rg = 2.0 * Mg / (5.0 * t_rep);
      std::vector<cdouble> samples;
      samples.reserve(static_cast<std::size_t>(Mg));
      for (int k = 0; k < Mg; ++k) {
        const double theta = -kPi + (k + 0.5) * 2.0 * kPi / Mg;
        const double cot = std::cos(theta) / std::sin(theta);
        samples.push_back(cdouble{0.5 + rg * theta * cot, rg * theta});
      }
      const bool jump = kernel::contour_jump_detected(F.B_shifted, samples);
      if (jump || F.kernel_has_cut)
        throw ContourError(
            std::string("Talbot contour crosses a branch cut of the kernel transform") +
            (jump ? " (discontinuity detected along the contour)" : "") +
            "; use the Fourier-series engine for this kernel");
    }
    double im_max = 0.0;
    for (const auto& p : F.poles) im_max = std::max(im_max, std::abs(p.s.imag()));
    // For non-rational transforms the pole positions are unknown; the feature extent
    // bounds where denominator zeros can sit.
    const double breadth = F.rational ? im_max : std::max(0.0, F.feature_extent);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = grid.points[i];
      if (t == 0.0) {
        c1[i] = F.c1_initial;
        est[i] = 0.0;
        continue;
      }
      // Pole-aware parameterization: the contour must pass right of every pole,
      // which bounds r from below by ~Im_max * 2/pi; r t >= 5 keeps the vertex far
      // enough right that the trapezoid sum resolves smooth transforms.
      const double r = std::max(breadth / 1.34, 5.0 / t);
      const double floor_ = 2e-16 * std::max(1.0, r) * std::exp((F.sigma0 + r) * t);
      if (F.rational && (t > 50.0 || floor_ > 7e-7)) {
        c1[i] = c1_pole_route(F, t);
        est[i] = 1e-13;
        continue;
      }
      int M = static_cast<int>(std::ceil(6.2 * r * t + 36.0));
      M = std::min(std::max(M, 96), 400);
      M += M & 1;  // even counts keep the midpoint grid off the contour vertex
      int M2 = M + M / 5 + 2;
      M2 += M2 & 1;
      const cdouble v1 = talbot_sum(F.F, t, M, F.sigma0, r);
      const cdouble v2 = talbot_sum(F.F, t, M2, F.sigma0, r);
      c1[i] = v2;
      est[i] = std::abs(v1 - v2) + floor_;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = grid.points[i];
      if (t == 0.0) {
        c1[i] = F.c1_initial;
        est[i] = 0.0;
      } else if (F.rational && t > 50.0) {
        c1[i] = c1_pole_route(F, t);
        est[i] = 1e-13;
      } else {
        const FourierLine line = build_line(F, 2.0 * t, 40);
        const auto dp40 = qd_coefficients(tail_slice(line.a_plus, line.K0, 81));
        const auto dm40 = qd_coefficients(tail_slice(line.a_minus, line.K0, 81));
        const auto dp30 = qd_coefficients(tail_slice(line.a_plus, line.K0, 61));
        const auto dm30 = qd_coefficients(tail_slice(line.a_minus, line.K0, 61));
        const cdouble v40 = eval_line(line, dp40, dm40, t);
        const cdouble v30 = eval_line(line, dp30, dm30, t);
        c1[i] = v40;
        est[i] = std::abs(v40 - v30) + 1e-15 * std::exp(line.sigma * t);
      }
    }
  }

  auto trace = model::AmplitudeTrace::build(
      grid, std::move(c1), {},
      engine == Engine::Talbot ? model::MethodTag::LaplaceTalbot : model::MethodTag::LaplaceFourier,
      1e-6);
  trace.error_estimate = std::move(est);
  for (double e : trace.error_estimate)
    if (e > 1e-3) trace.accuracy_warning = true;
  return trace;
}

std::vector<cdouble> fourier_window_values(const LaplaceAmplitude& F,
                                           const std::vector<double>& ts) {
  if (ts.empty()) return {};
  double t_max = 0.0;
  for (double t : ts) {
    if (t <= 0.0)
      throw NumericalFailureError("window evaluation requires strictly positive times");
    t_max = std::max(t_max, t);
  }
  // Depth 60 (vs 40 for the paired-trace route): the window feeds log-amplitude
  // rate estimates that magnify small-amplitude errors by 1/(|c1| t), so the
  // continued-fraction tail gets extra headroom here.
  const FourierLine line = build_line(F, 2.0 * t_max, 60);
  const auto dp = qd_coefficients(tail_slice(line.a_plus, line.K0, 121));
  const auto dm = qd_coefficients(tail_slice(line.a_minus, line.K0, 121));
  std::vector<cdouble> out;
  out.reserve(ts.size());
  for (double t : ts) out.push_back(eval_line(line, dp, dm, t));
  return out;
}

}  // namespace qzeno::laplace
