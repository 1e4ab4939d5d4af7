// test_analysis.cpp — effective decay rate, long-time estimator, sweep machinery,
// peak classification, and exceptional-point tracing.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "qzeno/analysis.hpp"
#include "qzeno/kernel.hpp"
#include "qzeno/laplace.hpp"
#include "qzeno/model.hpp"

using namespace qzeno;
using namespace qzeno::analysis;

namespace {

model::SystemConfig make_sys(double epsilon = 0.0) {
  model::SystemConfig sys;
  sys.epsilon = epsilon;
  const double omega_eg = 1.0 + std::max(0.0, -epsilon);
  sys.energies = model::QubitEnergies::from_transitions(omega_eg, omega_eg + epsilon);
  return sys;
}

model::DecayCurve synthetic_curve(const std::vector<double>& xs,
                                  const std::function<double(double)>& f) {
  model::DecayCurve curve;
  curve.coupling_grid = xs;
  for (const double x : xs) curve.gamma_eff_tau.push_back(f(x));
  curve.tau_used = 100.0;
  curve.derivative.assign(xs.size(), 0.0);
  curve.point_converged.assign(xs.size(), true);
  curve.all_converged = true;
  return curve;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1);
  return xs;
}

}  // namespace

TEST_CASE("effective decay rate of a pure exponential is its rate") {
  const auto grid = model::TimeGrid::uniform(10.0, 21);
  std::vector<cdouble> c1;
  for (const double t : grid.points) c1.push_back(std::exp(-0.3 * t));
  const auto trace =
      model::AmplitudeTrace::build(grid, std::move(c1), {}, model::MethodTag::ClosedForm, 1e-12);
  const auto rate = effective_decay_rate(trace);
  CHECK(rate[0] == 0.0);  // defined limit at t = 0
  for (std::size_t i = 1; i < rate.size(); ++i) CHECK(rate[i] == doctest::Approx(0.6).epsilon(1e-10));
}

TEST_CASE("points below the accuracy floor are masked, not reported") {
  const auto grid = model::TimeGrid::uniform(3.0, 4);
  std::vector<cdouble> c1{{1.0, 0.0}, {0.5, 0.0}, {1e-15, 0.0}, {0.5, 0.0}};
  const auto trace =
      model::AmplitudeTrace::build(grid, std::move(c1), {}, model::MethodTag::ClosedForm, 1e-12);
  const auto rate = effective_decay_rate(trace);
  CHECK(std::isfinite(rate[1]));
  CHECK(std::isnan(rate[2]));  // P1 = 1e-30 is beneath any engine's floor
  CHECK(std::isfinite(rate[3]));

  std::vector<cdouble> dead{{1.0, 0.0}, {1e-8, 0.0}, {1e-8, 0.0}, {1e-8, 0.0}};
  const auto gone =
      model::AmplitudeTrace::build(grid, std::move(dead), {}, model::MethodTag::ClosedForm, 1e-12);
  CHECK_THROWS_AS(effective_decay_rate(gone), DegenerateTraceError);
}

TEST_CASE("long-time rate settles on the dominant-pole asymptote") {
  PeakClassifierConfig cfg;
  cfg.tau = 200.0;
  const auto rate =
      long_time_rate(make_sys(), model::SpectralDensity{model::MarkovianDensity{1.0}}, cfg);
  REQUIRE(rate.pole_asymptote.has_value());
  CHECK(*rate.pole_asymptote == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rate.value == doctest::Approx(0.5).epsilon(0.06));
  CHECK(rate.converged);
}

TEST_CASE("long-time rate through the inversion window (non-rational kernel)") {
  PeakClassifierConfig cfg;
  cfg.tau = 60.0;
  const model::OhmicDensity d{2.0, 2.0, 1.0, 6.0};
  auto sys = make_sys();
  sys.energies = model::QubitEnergies::from_transitions(6.0, 6.0);
  const auto rate = long_time_rate(sys, model::SpectralDensity{d}, cfg);
  CHECK(!rate.pole_asymptote.has_value());
  CHECK(rate.value > 0.02);
  CHECK(rate.value < 1.5);
}

TEST_CASE("classifier configuration is validated") {
  PeakClassifierConfig cfg;
  cfg.tau = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.window_fraction = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.jump_threshold = 0.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("classification of synthetic curves") {
  const auto xs = linspace(0.5, 4.5, 41);
  PeakClassifierConfig cfg;

  const auto tent = classify_peak(
      synthetic_curve(xs, [](double x) { return 1.0 - std::abs(x - 2.5); }), cfg);
  CHECK(tent.classification == model::PeakClass::SharpPeak);
  CHECK(tent.peak_coupling == doctest::Approx(2.5).epsilon(0.02));
  CHECK(tent.sharpness_ratio > cfg.jump_threshold);

  const auto dome = classify_peak(
      synthetic_curve(xs, [](double x) { return 1.0 - (x - 2.5) * (x - 2.5); }), cfg);
  CHECK(dome.classification == model::PeakClass::SmoothPeak);
  CHECK(dome.sharpness_ratio < cfg.jump_threshold);
  CHECK(dome.peak_coupling == doctest::Approx(2.5).epsilon(0.02));

  const auto falling = classify_peak(
      synthetic_curve(xs, [](double x) { return std::exp(-x); }), cfg);
  CHECK(falling.classification == model::PeakClass::MonotoneDecreasing);

  const auto rising = classify_peak(synthetic_curve(xs, [](double x) { return x; }), cfg);
  CHECK(rising.classification == model::PeakClass::NoPeak);
}

TEST_CASE("a cusp on a curved background still reads as sharp") {
  const auto xs = linspace(1.0, 4.0, 61);
  PeakClassifierConfig cfg;
  const auto report = classify_peak(
      synthetic_curve(xs,
                      [](double x) {
                        return 0.8 - 0.7 * std::abs(x - 2.2) + 0.05 * (x - 2.2) * (x - 2.2);
                      }),
      cfg);
  CHECK(report.classification == model::PeakClass::SharpPeak);
  CHECK(report.peak_coupling == doctest::Approx(2.2).epsilon(0.02));
}

TEST_CASE("Markovian sweep: sharp maximum at the coalescence rate") {
  PeakClassifierConfig cfg;
  cfg.tau = 200.0;
  const auto curve = sweep(make_sys(), model::SpectralDensity{model::MarkovianDensity{1.0}},
                           linspace(0.5, 8.0, 31), cfg);
  CHECK(curve.all_converged);
  CHECK(std::is_sorted(curve.coupling_grid.begin(), curve.coupling_grid.end()));
  CHECK(curve.coupling_grid.size() > 40);  // refinement inserted points near the peak
  const auto report = classify_peak(curve, cfg);
  CHECK(report.classification == model::PeakClass::SharpPeak);
  CHECK(std::abs(report.peak_coupling - 4.0) <= 0.05);
  // At critical damping c1 = (1 + t) e^{-J t}, so the windowed rate approaches
  // 2 J minus the 2 ln(1 + tau)/tau polynomial correction (about 1.95 at tau = 200).
  double peak_rate = 0.0;
  for (const double v : curve.gamma_eff_tau) peak_rate = std::max(peak_rate, v);
  CHECK(peak_rate == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("detuning smooths the Markovian peak") {
  PeakClassifierConfig cfg;
  cfg.tau = 200.0;
  const auto curve = sweep(make_sys(2.0), model::SpectralDensity{model::MarkovianDensity{1.0}},
                           linspace(0.5, 8.0, 31), cfg);
  const auto report = classify_peak(curve, cfg);
  CHECK(report.classification == model::PeakClass::SmoothPeak);
}

TEST_CASE("Lorentzian sweep finds the structured-reservoir coalescence") {
  PeakClassifierConfig cfg;
  cfg.tau = 6000.0;
  const auto curve = sweep(make_sys(), model::SpectralDensity{model::LorentzianDensity{1.0, 0.5, 0.0}},
                           linspace(0.2, 3.0, 29), cfg);
  const auto report = classify_peak(curve, cfg);
  CHECK(report.classification == model::PeakClass::SharpPeak);
  CHECK(std::abs(report.peak_coupling - 1.41) <= 0.05);
}

TEST_CASE("double-root search pins the same location") {
  const auto family = [](double g) {
    return laplace::build_F1(
        make_sys(),
        kernel::make_transform(model::SpectralDensity{model::LorentzianDensity{g, 0.5, 0.0}}));
  };
  const double g_star = nearest_double_root_coupling(family, 0.5, 3.0);
  CHECK(std::abs(g_star - 1.4191155304938667) < 1e-6);
}

TEST_CASE("exceptional-point locus moves with the reservoir width") {
  PeakClassifierConfig cfg;
  cfg.tau = 6000.0;
  const auto locus = trace_ep_locus(make_sys(), model::LorentzianDensity{1.0, 0.5, 0.0},
                                    LocusParameter::LorentzianWidth, {0.2, 1.0},
                                    linspace(0.2, 3.0, 29), cfg);
  REQUIRE(locus.size() == 2);
  REQUIRE(locus[0].g_ep.has_value());
  REQUIRE(locus[1].g_ep.has_value());
  CHECK(locus[0].classification == model::PeakClass::SharpPeak);
  CHECK(*locus[0].g_ep < *locus[1].g_ep);  // wider reservoir pushes the EP out
  CHECK(locus[0].error_bar > 0.0);
}

TEST_CASE("detuned slices push the coalescence to stronger coupling") {
  // Unlike the flat-reservoir case, a structured reservoir keeps the rate crossing
  // sharp under detuning; it just migrates outward along the coupling axis.
  PeakClassifierConfig cfg;
  cfg.tau = 6000.0;
  const auto locus = trace_ep_locus(make_sys(), model::LorentzianDensity{1.0, 0.5, 0.0},
                                    LocusParameter::Epsilon, {0.0, 2.0},
                                    linspace(0.2, 4.0, 39), cfg);
  REQUIRE(locus.size() == 2);
  REQUIRE(locus[0].g_ep.has_value());
  REQUIRE(locus[1].g_ep.has_value());
  CHECK(locus[0].classification == model::PeakClass::SharpPeak);
  CHECK(locus[1].classification == model::PeakClass::SharpPeak);
  CHECK(*locus[0].g_ep < *locus[1].g_ep);
}

TEST_CASE("eigenvalue surface: coalescence along the resonant slice only") {
  const auto samples = im_eigenvalue_surface(make_sys(), linspace(0.5, 3.5, 7), {-0.5, 0.0, 0.5});
  REQUIRE(samples.size() == 21);
  for (const auto& s : samples) {
    if (s.epsilon == 0.0) {
      CHECK(std::abs(s.lambda3.imag() - s.lambda4.imag()) < 1e-10);  // below 4J: locked
    } else {
      CHECK(std::abs(s.lambda3.imag() - s.lambda4.imag()) > 1e-4);  // detuned: split
    }
  }
}
