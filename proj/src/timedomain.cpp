// timedomain.cpp — Volterra integro-differential solver and discretized-bath integrator.
#include "qzeno/timedomain.hpp"

#include "qzeno/kernel.hpp"
#include "qzeno/special.hpp"

#include <algorithm>
#include <cmath>

namespace qzeno::timedomain {

namespace {

const cdouble kI{0.0, 1.0};
constexpr double kPi = 3.14159265358979323846;

double coupling_scale(const model::SpectralDensity& density) {
  return model::density_coupling(density);
}

}  // namespace

model::AmplitudeTrace solve_volterra(const model::SystemConfig& sys,
                                     const model::SpectralDensity& density,
                                     const model::TimeGrid& grid) {
  sys.validate();
  model::validate(density);
  grid.validate();
  if (sys.n_qubits != 1)
    throw UnsupportedOperationError("the Volterra solver handles the two-qubit system only");
  if (grid.points.front() != 0.0)
    throw ConfigError("the Volterra solver needs a grid starting at t = 0");
  const double h = grid.step();
  const std::size_t n = grid.points.size();
  const double J = sys.coupling_J;
  const double eps = sys.epsilon;

  const double omega_scale = 2.0 * J + std::abs(eps) + coupling_scale(density);
  const double est = 2.0 * (h * omega_scale) * (h * omega_scale);
  if (est > 1e-3)
    throw RefinementRequiredError("Volterra step size h=" + std::to_string(h) +
                                  " too coarse (declared error " + std::to_string(est) +
                                  "); refine the grid");

  const bool local_damping = std::holds_alternative<model::MarkovianDensity>(density);
  double half_rate = 0.0;
  std::vector<cdouble> R;
  if (local_damping) {
    half_rate = 0.5 * std::get<model::MarkovianDensity>(density).gamma_tilde;
  } else {
    R.resize(n);
    for (std::size_t k = 0; k < n; ++k) R[k] = kernel::kernel_R(grid.points[k], density);
  }

  std::vector<cdouble> c1(n), c2(n);
  c1[0] = sys.initial_c1;
  c2[0] = sys.initial_c2;

  // Memory term at node m given history c2[0..m-1] plus the (variable) endpoint value.
  auto memory_base = [&](std::size_t m) {
    cdouble acc = 0.5 * R[m] * c2[0];
    for (std::size_t j = 1; j < m; ++j) acc += R[m - j] * c2[j];
    return h * acc;
  };

  for (std::size_t m = 0; m + 1 < n; ++m) {
    const double t0 = grid.points[m];
    const double t1 = grid.points[m + 1];
    const cdouble ph0 = std::exp(kI * (eps * t0));
    const cdouble ph1 = std::exp(kI * (eps * t1));

    cdouble mem0, base1;
    if (local_damping) {
      mem0 = half_rate * c2[m];
    } else {
      mem0 = memory_base(m) + 0.5 * h * R[0] * c2[m];
      base1 = memory_base(m + 1);
    }
    const cdouble f1_0 = -kI * J * c2[m] * std::conj(ph0);
    const cdouble f2_0 = -kI * J * c1[m] * ph0 - mem0;

    // Euler predictor, then two trapezoid corrector sweeps.
    cdouble c1n = c1[m] + h * f1_0;
    cdouble c2n = c2[m] + h * f2_0;
    for (int pass = 0; pass < 2; ++pass) {
      const cdouble mem1 =
          local_damping ? cdouble{half_rate * c2n} : cdouble{base1 + 0.5 * h * R[0] * c2n};
      const cdouble f1_1 = -kI * J * c2n * std::conj(ph1);
      const cdouble f2_1 = -kI * J * c1n * ph1 - mem1;
      c1n = c1[m] + 0.5 * h * (f1_0 + f1_1);
      c2n = c2[m] + 0.5 * h * (f2_0 + f2_1);
    }
    c1[m + 1] = c1n;
    c2[m + 1] = c2n;
  }

  auto trace = model::AmplitudeTrace::build(grid, std::move(c1), std::move(c2),
                                            model::MethodTag::Volterra,
                                            std::max(1e-6, 4.0 * est));
  trace.error_estimate.assign(n, est);
  return trace;
}

// --- bath discretization ---------------------------------------------------------------

namespace {

// Gauss–Legendre nodes/weights on [-1, 1] by Newton iteration on the recurrence.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      const double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = xi;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
    x[static_cast<std::size_t>(i)] = xi;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}

double lorentzian_j(double omega, const model::LorentzianDensity& d, double peak) {
  const double half = 0.5 * d.gamma;
  const double x = omega - peak;
  return d.g * d.g / kPi * half / (x * x + half * half);
}

}  // namespace

double BathDiscretization::recurrence_time() const {
  if (mode_frequencies.size() < 2) return 0.0;
  std::vector<double> gaps;
  gaps.reserve(mode_frequencies.size() - 1);
  for (std::size_t i = 0; i + 1 < mode_frequencies.size(); ++i)
    gaps.push_back(mode_frequencies[i + 1] - mode_frequencies[i]);
  std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
  const double median_gap = gaps[gaps.size() / 2];
  return median_gap > 0.0 ? 2.0 * kPi / median_gap : 0.0;
}

BathDiscretization discretize_bath(const model::SpectralDensity& density, int n_modes,
                                   double support_min, double support_max,
                                   BathDiscretization::Strategy strategy) {
  model::validate(density);
  if (n_modes < 2) throw ConfigError("bath discretization needs at least 2 modes");

  BathDiscretization out;
  out.strategy = strategy;

  std::function<double(double)> j_of;
  double covered_exact = 0.0;
  const bool want_default = support_min >= support_max;

  if (const auto* lor = std::get_if<model::LorentzianDensity>(&density)) {
    // Frequencies are measured from the damped qubit (omega_ref = 0); the peak then
    // sits at delta_c, and the idealized density extends over the whole real line.
    const double peak = lor->delta_c;
    if (want_default) {
      support_min = peak - 40.0 * lor->gamma;
      support_max = peak + 40.0 * lor->gamma;
    }
    out.omega_ref = 0.0;
    out.total_weight = lor->g * lor->g;
    const double half = 0.5 * lor->gamma;
    covered_exact = lor->g * lor->g / kPi *
                    (std::atan((support_max - peak) / half) - std::atan((support_min - peak) / half));
    j_of = [d = *lor, peak](double omega) { return lorentzian_j(omega, d, peak); };
  } else if (const auto* oh = std::get_if<model::OhmicDensity>(&density)) {
    if (want_default) {
      support_min = 0.0;
      support_max = 30.0 * oh->omega_c;
    }
    out.omega_ref = oh->omega_eg;
    out.total_weight = oh->g * oh->g;
    const double hi =
        special::upper_incomplete_gamma(oh->S + 1.0, cdouble{support_max / oh->omega_c, 0.0})
            .real() /
        std::tgamma(oh->S + 1.0);
    const double lo =
        support_min <= 0.0
            ? 1.0
            : special::upper_incomplete_gamma(oh->S + 1.0, cdouble{support_min / oh->omega_c, 0.0})
                      .real() /
                  std::tgamma(oh->S + 1.0);
    covered_exact = oh->g * oh->g * (lo - hi);
    j_of = [d = *oh](double omega) { return d.j_of_omega(omega); };
  } else if (const auto* tab = std::get_if<model::TabulatedDensity>(&density)) {
    if (want_default) {
      support_min = tab->omega.front();
      support_max = tab->omega.back();
    }
    out.omega_ref = tab->omega_eg_prime;
    out.total_weight = tab->integral();
    covered_exact = out.total_weight;  // default support covers the entire tabulation
    j_of = [d = *tab](double omega) { return d.j_of_omega(omega); };
  } else {
    throw UnsupportedOperationError(
        "the Markovian delta kernel has no spectral density to discretize");
  }

  if (!(support_max > support_min))
    throw ConfigError("bath discretization needs support_min < support_max");

  const std::size_t n = static_cast<std::size_t>(n_modes);
  out.mode_frequencies.resize(n);
  out.mode_couplings.resize(n);
  if (strategy == BathDiscretization::Strategy::UniformGrid) {
    const double dw = (support_max - support_min) / n_modes;
    for (std::size_t i = 0; i < n; ++i) {
      const double omega = support_min + (static_cast<double>(i) + 0.5) * dw;
      out.mode_frequencies[i] = omega;
      out.mode_couplings[i] = std::sqrt(std::max(0.0, j_of(omega) * dw));
    }
  } else {
    std::vector<double> x, w;
    gauss_legendre(n_modes, x, w);
    const double mid = 0.5 * (support_max + support_min);
    const double half_span = 0.5 * (support_max - support_min);
    for (std::size_t i = 0; i < n; ++i) {
      const double omega = mid + half_span * x[i];
      out.mode_frequencies[i] = omega;
      out.mode_couplings[i] = std::sqrt(std::max(0.0, j_of(omega) * w[i] * half_span));
    }
    // Newton ordering above yields descending nodes; store ascending.
    std::reverse(out.mode_frequencies.begin(), out.mode_frequencies.end());
    std::reverse(out.mode_couplings.begin(), out.mode_couplings.end());
  }

  out.captured_weight = 0.0;
  for (double g : out.mode_couplings) out.captured_weight += g * g;
  out.truncation_fraction =
      out.total_weight > 0.0 ? std::max(0.0, 1.0 - covered_exact / out.total_weight) : 0.0;
  out.truncation_report = out.truncation_fraction > 1e-3;
  return out;
}

// --- discretized-bath integration --------------------------------------------------------

namespace {

struct Dp5Stepper {
  // Dormand–Prince 5(4) coefficients.
  static constexpr double c[7] = {0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0};
  static constexpr double a2[1] = {0.2};
  static constexpr double a3[2] = {3.0 / 40.0, 9.0 / 40.0};
  static constexpr double a4[3] = {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0};
  static constexpr double a5[4] = {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0,
                                   -212.0 / 729.0};
  static constexpr double a6[5] = {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                                   49.0 / 176.0, -5103.0 / 18656.0};
  static constexpr double b5[7] = {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0,
                                   -2187.0 / 6784.0, 11.0 / 84.0, 0.0};
  static constexpr double b4[7] = {5179.0 / 57600.0, 0.0,           7571.0 / 16695.0,
                                   393.0 / 640.0,    -92097.0 / 339200.0, 187.0 / 2100.0,
                                   1.0 / 40.0};
};

using State = std::vector<cdouble>;

}  // namespace

model::AmplitudeTrace solve_discretized(const model::SystemConfig& sys,
                                        const BathDiscretization& bath,
                                        const model::TimeGrid& grid) {
  sys.validate();
  grid.validate();
  if (sys.n_qubits != 1)
    throw UnsupportedOperationError("the discretized-bath solver handles the two-qubit system only");
  if (bath.mode_frequencies.size() != bath.mode_couplings.size() || bath.mode_frequencies.empty())
    throw ConfigError("bath discretization is empty or inconsistent");

  const double J = sys.coupling_J;
  const double eps = sys.epsilon;
  const std::size_t n_modes = bath.mode_frequencies.size();
  std::vector<double> detuning(n_modes);
  for (std::size_t i = 0; i < n_modes; ++i)
    detuning[i] = bath.mode_frequencies[i] - bath.omega_ref;

  const std::size_t dim = 2 + n_modes;
  auto deriv = [&](double t, const State& y, State& dy) {
    const cdouble ph = std::exp(kI * (eps * t));
    dy[0] = -kI * J * y[1] * std::conj(ph);
    cdouble drive{0.0, 0.0};
    for (std::size_t m = 0; m < n_modes; ++m) {
      const cdouble em = std::exp(cdouble{0.0, -detuning[m] * t});
      drive += bath.mode_couplings[m] * em * y[2 + m];
      dy[2 + m] = -kI * bath.mode_couplings[m] * std::conj(em) * y[1];
    }
    dy[1] = -kI * J * y[0] * ph - kI * drive;
  };

  State y(dim, cdouble{0.0, 0.0});
  y[0] = sys.initial_c1;
  y[1] = sys.initial_c2;
  const double norm0 = std::norm(y[0]) + std::norm(y[1]);
  double norm_defect = 0.0;
  auto track_norm = [&]() {
    double total = 0.0;
    for (const auto& v : y) total += std::norm(v);
    norm_defect = std::max(norm_defect, std::abs(total - norm0));
  };

  const double tol = 1e-12;
  std::vector<cdouble> c1(grid.points.size()), c2(grid.points.size());
  std::size_t out_idx = 0;
  double t = 0.0;
  if (grid.points[0] == 0.0) {
    c1[0] = y[0];
    c2[0] = y[1];
    out_idx = 1;
  }

  std::array<State, 7> k;
  for (auto& st : k) st.assign(dim, cdouble{0.0, 0.0});
  State ytmp(dim), y5(dim), y4(dim);

  double h = 1e-3;
  deriv(t, y, k[0]);
  int rejected_in_a_row = 0;
  while (out_idx < grid.points.size()) {
    const double t_target = grid.points[out_idx];
    bool hit_target = false;
    double h_step = h;
    if (t + h_step >= t_target - 1e-14) {
      h_step = t_target - t;
      hit_target = true;
    }
    if (h_step <= 0.0) {  // grid point coincides with current time
      c1[out_idx] = y[0];
      c2[out_idx] = y[1];
      ++out_idx;
      continue;
    }

    // Stages 2..7 (stage 7 doubles as the FSAL derivative at the accepted point).
    auto stage = [&](int si, const double* arow) {
      for (std::size_t i = 0; i < dim; ++i) {
        cdouble acc = y[i];
        for (int j = 0; j < si - 1; ++j) acc += h_step * arow[j] * k[static_cast<std::size_t>(j)][i];
        ytmp[i] = acc;
      }
      deriv(t + Dp5Stepper::c[si - 1] * h_step, ytmp, k[static_cast<std::size_t>(si - 1)]);
    };
    stage(2, Dp5Stepper::a2);
    stage(3, Dp5Stepper::a3);
    stage(4, Dp5Stepper::a4);
    stage(5, Dp5Stepper::a5);
    stage(6, Dp5Stepper::a6);
    for (std::size_t i = 0; i < dim; ++i) {
      cdouble acc = y[i];
      for (int j = 0; j < 6; ++j) acc += h_step * Dp5Stepper::b5[j] * k[static_cast<std::size_t>(j)][i];
      y5[i] = acc;
    }
    deriv(t + h_step, y5, k[6]);
    double err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      cdouble acc = y[i];
      for (int j = 0; j < 7; ++j) acc += h_step * Dp5Stepper::b4[j] * k[static_cast<std::size_t>(j)][i];
      y4[i] = acc;
      const double sc = tol + tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      const double e = std::abs(y5[i] - y4[i]) / sc;
      err += e * e;
    }
    err = std::sqrt(err / static_cast<double>(dim));

    if (err <= 1.0 || h_step < 1e-12) {
      t += h_step;
      y = y5;
      k[0] = k[6];  // FSAL
      rejected_in_a_row = 0;
      if (hit_target) {
        c1[out_idx] = y[0];
        c2[out_idx] = y[1];
        track_norm();
        ++out_idx;
      } else {
        const double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h = h_step * std::min(5.0, std::max(0.2, grow));
      }
    } else {
      // k[0] still holds the derivative at (t, y); only the step size changes.
      ++rejected_in_a_row;
      if (rejected_in_a_row > 60)
        throw NumericalFailureError("discretized-bath stepper failed to meet tolerance");
      h = h_step * std::max(0.1, 0.9 * std::pow(err, -0.2));
    }
  }

  auto trace = model::AmplitudeTrace::build(grid, std::move(c1), std::move(c2),
                                            model::MethodTag::DiscretizedBath, 1e-6);
  trace.norm_defect = norm_defect;
  trace.recurrence_time = bath.recurrence_time();
  if (trace.recurrence_time > 0.0 && grid.points.back() > trace.recurrence_time)
    trace.accuracy_warning = true;
  return trace;
}

}  // namespace qzeno::timedomain
