// model.hpp — domain types, unit conventions, and configuration parsing shared by all modules.
//
// Conventions: all frequencies and rates are expressed in units of the inter-qubit
// coupling J (J = 1 internally; the loader rescales when a config carries a physical J),
// times in units of 1/J. The excitation starts on qubit 1 by default; qubit 2 is the
// damped one, with transition frequency omega_eg_prime and detuning
// epsilon = omega_eg_prime - omega_eg.
#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qzeno {

inline constexpr const char* kVersion = "1.0.0";

using cdouble = std::complex<double>;

// Error taxonomy. ConfigError and UnsupportedOperationError map to CLI usage errors
// (exit 1); NumericalFailureError and its subclasses map to numerical failures (exit 2).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct UnsupportedOperationError : Error {
  using Error::Error;
};
struct NumericalFailureError : Error {
  using Error::Error;
};

}  // namespace qzeno

namespace qzeno::model {

// Bare level energies of the two qubits. Only differences enter the dynamics; the
// absolute offsets matter solely for eigenvalue reporting.
struct QubitEnergies {
  double omega_g = 0.0;        // qubit-1 ground level
  double omega_e = 0.0;        // qubit-1 excited level
  double omega_g_prime = 0.0;  // qubit-2 ground level
  double omega_e_prime = 0.0;  // qubit-2 excited level

  double omega_eg() const { return omega_e - omega_g; }
  double omega_eg_prime() const { return omega_e_prime - omega_g_prime; }
  double epsilon() const { return omega_eg_prime() - omega_eg(); }
  double total() const { return omega_g + omega_e + omega_g_prime + omega_e_prime; }

  // Builds level energies with both ground levels at zero.
  static QubitEnergies from_transitions(double omega_eg, double omega_eg_prime);
  void validate() const;  // excited levels strictly above ground levels
};

enum class BathTopology { SeparateBaths, CommonBath };

struct SystemConfig {
  double coupling_J = 1.0;  // inter-qubit coupling J > 0
  double epsilon = 0.0;     // detuning of the damped qubit relative to qubit 1
  int n_qubits = 1;         // N satellite qubits (1 = the plain two-qubit case)
  BathTopology bath_topology = BathTopology::SeparateBaths;
  cdouble initial_c1{1.0, 0.0};
  cdouble initial_c2{0.0, 0.0};
  QubitEnergies energies{};

  void validate() const;
};

// --- spectral density variants -------------------------------------------------------

struct MarkovianDensity {
  double gamma_tilde = 0.0;  // phenomenological decay rate of qubit 2
};

struct LorentzianDensity {
  double g = 0.0;        // coupling strength
  double gamma = 0.5;    // full width of the peak
  double delta_c = 0.0;  // peak detuning from the damped qubit: omega_c - omega_eg_prime
};

struct OhmicDensity {
  double g = 0.0;       // coupling strength, integrated weight of J is g^2
  double S = 1.0;       // Ohmic exponent, S > 0
  double omega_c = 1.0; // cutoff frequency
  double omega_eg = 6.0;// transition frequency of the damped qubit entering the kernel

  // Normalization N = 1/(omega_c^2 * Gamma(1+S)), recomputed on demand so that the
  // integrated density equals g^2 exactly.
  double normalization() const;
  double j_of_omega(double omega) const;  // J(omega) = N g^2 omega_c (omega/omega_c)^S e^{-omega/omega_c}
};

struct TabulatedDensity {
  std::vector<double> omega;  // strictly increasing, nonnegative sample frequencies
  std::vector<double> j;      // J(omega) >= 0 at each sample; linear in between, zero outside
  double omega_eg_prime = 0.0;

  double integral() const;                 // trapezoid weight of the tabulated density
  double j_of_omega(double w) const;       // linear interpolation, zero outside the support
  void validate() const;
};

using SpectralDensity =
    std::variant<MarkovianDensity, LorentzianDensity, OhmicDensity, TabulatedDensity>;

// Coupling-strength knob shared by sweep code: gamma_tilde for Markovian, g otherwise.
double density_coupling(const SpectralDensity& d);
SpectralDensity with_coupling(const SpectralDensity& d, double coupling);
std::string density_type_name(const SpectralDensity& d);
void validate(const SpectralDensity& d);

// --- traces and analysis results -----------------------------------------------------

struct TimeGrid {
  std::vector<double> points;  // strictly increasing, nonnegative
  bool log_spaced = false;

  static TimeGrid uniform(double tmax, int n_points);               // includes t = 0
  static TimeGrid logarithmic(double tmin, double tmax, int n_points);
  double step() const;  // spacing of a uniform grid (throws if non-uniform)
  void validate() const;
};

enum class MethodTag { ClosedForm, LaplaceTalbot, LaplaceFourier, Volterra, DiscretizedBath };
std::string to_string(MethodTag tag);

struct AmplitudeTrace {
  TimeGrid grid;
  std::vector<cdouble> c1_tilde;
  std::vector<cdouble> c2_tilde;       // optional; empty when the method only yields c1
  std::vector<double> p1;              // |c1_tilde|^2 per point
  MethodTag method_tag = MethodTag::ClosedForm;
  double method_tolerance = 1e-6;      // declared accuracy of the producing engine
  std::vector<double> error_estimate;  // optional per-point estimate
  bool accuracy_warning = false;       // any per-point estimate above 1e-3
  double recurrence_time = 0.0;        // >0: trace invalid beyond this time (discrete bath)
  double norm_defect = 0.0;            // max |1 - total state norm| (full-system integrations)

  // Builds the trace, fills p1 and checks the population invariants
  // (p1 = |c1|^2, 0 <= p1 <= 1 + tolerance, p1[0] = |c1(0)|^2).
  static AmplitudeTrace build(TimeGrid grid, std::vector<cdouble> c1, std::vector<cdouble> c2,
                              MethodTag tag, double method_tolerance);
  void validate() const;
};

struct DecayCurve {
  std::vector<double> coupling_grid;   // increasing coupling values
  std::vector<double> gamma_eff_tau;   // long-time effective decay rate per point
  double tau_used = 0.0;
  std::vector<double> derivative;      // centered differences (one-sided at the edges)
  std::vector<bool> point_converged;   // tau-doubling check per point
  bool all_converged = true;
};

enum class PeakClass { SharpPeak, SmoothPeak, MonotoneDecreasing, NoPeak };
std::string to_string(PeakClass c);

struct EpReport {
  double peak_coupling = 0.0;
  PeakClass classification = PeakClass::NoPeak;
  double derivative_jump = 0.0;    // estimated first-derivative discontinuity at the peak
  double sharpness_ratio = 0.0;    // jump normalized by the neighboring curvature scale
  double grid_resolution = 0.0;    // refined grid spacing at the peak
  std::optional<double> cross_check;  // pole-based location when the kernel is rational
};

// --- configuration -------------------------------------------------------------------

struct RunDirectives {
  std::string engine = "fourier";  // fourier | talbot | volterra | bath | closed-form
  double tmax = 20.0;
  int points = 401;
  double tau = 200.0;
  double jump_threshold = 5.0;
  double window_fraction = 0.5;
  double coupling_min = 0.1;
  double coupling_max = 8.0;
  double coupling_step = 0.1;
  int modes = 2000;
  bool strict = false;
};

struct ParsedConfig {
  SystemConfig system;
  SpectralDensity bath = MarkovianDensity{};
  RunDirectives run;
};

// Parses the [system]/[bath]/[run] key-value document, applies defaults, validates all
// invariants and rescales to J = 1 units when the config carries a physical J.
// Throws ConfigError with a diagnostic naming the offending field.
ParsedConfig parse_config(const std::string& text);

// Canonical serialization; emit(parse(doc)) parses back to identical values.
std::string emit_config(const ParsedConfig& cfg);

}  // namespace qzeno::model
