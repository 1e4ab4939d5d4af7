// laplace.hpp — Laplace-domain amplitude F1(s) for every topology and its numerical
// inversion by two independent engines.
//
// For the two-qubit system with general initial amplitudes,
//   F1(s) = [c1(0) (s + i eps + B(s + i eps)) - i J c2(0)]
//           / [s (s + i eps + B(s + i eps)) + J^2],
// which reduces to 1 / (s + J^2 / (s + i eps + B(s + i eps))) for c1(0)=1, c2(0)=0.
// The N-satellite generalizations are 1/(s + N J^2/(s + B(s))) for separate baths and
// 1/(s + N J^2/(s + N B(s))) for a common bath.
#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "qzeno/kernel.hpp"
#include "qzeno/model.hpp"

namespace qzeno::laplace {

struct ContourError : NumericalFailureError {
  using NumericalFailureError::NumericalFailureError;
};

// One denominator root. A multiplicity-2 root contributes (c0 + c1 t) e^{st} to the
// time signal; a simple root contributes c0 e^{st}.
struct PoleInfo {
  cdouble s{};
  int multiplicity = 1;
  cdouble residue{};        // c0
  cdouble residue_t{};      // c1 (zero for simple poles)
};

struct LaplaceAmplitude {
  enum class Topology { TwoQubit, MarkovianTwoQubit, NSeparateBaths, NCommonBath };

  Topology topology = Topology::TwoQubit;
  std::function<cdouble(cdouble)> F;          // s -> F1(s)
  std::function<cdouble(cdouble)> B_shifted;  // s -> B(s + i eps) as seen by F1 (guard/diagnostics)
  bool rational = false;
  std::vector<cdouble> numer;  // polynomial coefficients, ascending (rational only)
  std::vector<cdouble> denom;
  std::vector<PoleInfo> poles;  // denominator roots with residues (rational only)
  bool has_double_root = false; // a root pair coalesced within tolerance (candidate EP)
  bool kernel_rational = false;
  bool kernel_has_cut = false;
  double feature_extent = 3.0;  // |Im s| range containing all singular structure
  double sigma0 = 0.5;          // recommended contour abscissa
  cdouble c1_initial{1.0, 0.0};
};

LaplaceAmplitude build_F1(const model::SystemConfig& sys, const kernel::KernelTransform& k);
// N identical satellites, each with its own reservoir (requires the default initial
// condition c1(0)=1, c2(0)=0 and the epsilon=0 identical-satellite reading).
LaplaceAmplitude build_F1_n_baths(const model::SystemConfig& sys, const kernel::KernelTransform& k);
// N identical satellites sharing one reservoir: B -> N B.
LaplaceAmplitude build_F1_common_bath(const model::SystemConfig& sys,
                                      const kernel::KernelTransform& k);

// Convenience dispatch on n_qubits and bath topology.
LaplaceAmplitude build_for_config(const model::SystemConfig& sys,
                                  const kernel::KernelTransform& k);

enum class Engine { Talbot, FourierSeries };

// Inverts F on the grid. t = 0 entries are filled from the initial condition. Each
// engine attaches a per-point error estimate; any estimate above 1e-3 sets the
// accuracy warning on the trace. Rational transforms switch to pole/residue summation
// beyond t = 50/J, or earlier whenever the contour's projected roundoff floor
// (e^{(sigma+r) t} * roundoff, grown by oscillatory poles that force a wide contour)
// exceeds the contour engine's accuracy bar.
// The Talbot engine runs the branch-cut continuity guard on non-rational kernels and
// throws ContourError when the contour crosses the cut (the Ohmic/tabulated case).
model::AmplitudeTrace invert(const LaplaceAmplitude& F, const model::TimeGrid& grid,
                             Engine engine);

// Denominator roots with multiplicity and residues (rational kernels only; throws
// UnsupportedOperationError otherwise). Also flags a candidate exceptional point when
// two roots coalesce. The long-time decay rate is -2 * max Re(pole).
std::vector<PoleInfo> rational_poles(const LaplaceAmplitude& F);

// ln |c1(t)| evaluated through the residue representation, factoring out the dominant
// exponential so arbitrarily late times never underflow. Rational only.
double log_abs_c1_pole_route(const LaplaceAmplitude& F, double t);

// Exact residue-route evaluation of c1(t) (rational only).
cdouble c1_pole_route(const LaplaceAmplitude& F, double t);

// Shared-sample Fourier-series (de Hoog style) evaluation of c1 at several times with
// one Bromwich-line sampling: T = kappa * max(ts). Used by the long-time estimator.
std::vector<cdouble> fourier_window_values(const LaplaceAmplitude& F,
                                           const std::vector<double>& ts);

}  // namespace qzeno::laplace
