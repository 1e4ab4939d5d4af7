// analysis.hpp — effective decay rate, coupling sweeps, peak classification, and
// exceptional-point locus tracing.
//
// The long-time effective decay rate Gamma_eff(tau) = -(1/tau) ln P1(tau) develops a
// peak as a function of the bath coupling; a first-derivative discontinuity at the
// peak marks an exceptional point, a smooth peak marks a Zeno onset without one, and
// a curve decreasing from the left edge is Zeno-dominated everywhere.
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qzeno/laplace.hpp"
#include "qzeno/model.hpp"

namespace qzeno::analysis {

struct DegenerateTraceError : NumericalFailureError {
  using NumericalFailureError::NumericalFailureError;
};

struct PeakClassifierConfig {
  double tau = 200.0;            // long-time evaluation horizon, units 1/J
  double jump_threshold = 5.0;   // sharpness ratio above which a peak is Sharp
  double window_fraction = 0.5;  // rate sampled over [tau * fraction, tau]
  int window_points = 41;        // log-spaced samples in the window
  double amplitude_floor = 1e-10;  // inversion-route |c1| accuracy floor (masking)
  bool strict = false;           // escalate non-convergence to an error

  void validate() const;
};

// Gamma_eff(t) per grid point; t = 0 maps to the limit 0 and points with
// P1 < 1e-14 (or below the producing engine's accuracy floor) are masked as NaN.
// Throws DegenerateTraceError when every t > 0 point is masked.
std::vector<double> effective_decay_rate(const model::AmplitudeTrace& trace);

struct LongTimeRate {
  double value = 0.0;
  bool converged = true;               // doubling tau moved the value by < 2%
  std::optional<double> pole_asymptote;  // -2 max Re(pole), rational kernels
};

// Median of Gamma_eff over a log-spaced window [tau * window_fraction, tau] (a point
// sample can land on a log singularity near a P1 zero). Rational kernels evaluate
// through the residue representation (no amplitude floor, arbitrary tau); others use
// the Fourier-series engine with shared Bromwich samples and the amplitude-floor mask.
LongTimeRate long_time_rate(const model::SystemConfig& sys,
                            const model::SpectralDensity& density,
                            const PeakClassifierConfig& cfg);

// Gamma_eff(tau) versus coupling on the given grid, refined twice around the maximum
// (window of +/- 4 steps, step divided by 3 per pass) so the spacing near a suspected
// peak is a ninth of the coarse step. The derivative column holds centered differences.
model::DecayCurve sweep(const model::SystemConfig& sys, const model::SpectralDensity& base,
                        const std::vector<double>& coupling_grid,
                        const PeakClassifierConfig& cfg);

// Classifies the curve's maximum. SharpPeak requires the one-sided secant slopes at
// the maximum to jump by more than jump_threshold times the median slope-change of
// the neighboring intervals (span-normalized, so a smooth quadratic peak scores ~2
// independent of resolution); an interior maximum without such a jump is SmoothPeak;
// a maximum at the left grid edge is MonotoneDecreasing; at the right edge, NoPeak.
model::EpReport classify_peak(const model::DecayCurve& curve, const PeakClassifierConfig& cfg);

enum class LocusParameter { LorentzianWidth, Epsilon, DetuningDeltaC };

struct LocusPoint {
  double parameter = 0.0;
  std::optional<double> g_ep;  // empty = gap marker (slice did not classify SharpPeak)
  double error_bar = 0.0;      // refined grid resolution
  model::PeakClass classification = model::PeakClass::NoPeak;
};

// Traces the sharp-peak location across slices of the swept parameter. Slices that do
// not classify as SharpPeak appear as gap markers.
std::vector<LocusPoint> trace_ep_locus(const model::SystemConfig& sys,
                                       const model::LorentzianDensity& base,
                                       LocusParameter parameter,
                                       const std::vector<double>& parameter_grid,
                                       const std::vector<double>& coupling_grid,
                                       const PeakClassifierConfig& cfg);

// Coupling at which the two dominant denominator roots approach closest (golden-section
// minimization of the pole gap). At a true double root the gap reaches zero; for kernels
// whose discriminant never vanishes this is the decay-rate branch-crossing point, the
// quantity the sharp peak tracks. Used as the EpReport cross-check.
double nearest_double_root_coupling(
    const std::function<laplace::LaplaceAmplitude(double)>& family, double coupling_min,
    double coupling_max);

struct SurfaceSample {
  double gamma_tilde = 0.0;
  double epsilon = 0.0;
  cdouble lambda3{};
  cdouble lambda4{};
  double overlap = 0.0;
};

// Im lambda_{3,4} over a (gamma_tilde, epsilon) grid; the surfaces coalesce along
// epsilon = 0, gamma_tilde <= 4J. Markovian only.
std::vector<SurfaceSample> im_eigenvalue_surface(const model::SystemConfig& sys,
                                                 const std::vector<double>& gamma_grid,
                                                 const std::vector<double>& epsilon_grid);

}  // namespace qzeno::analysis
