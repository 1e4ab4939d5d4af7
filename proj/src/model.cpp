// model.cpp — domain-type validation and the [system]/[bath]/[run] config format.
#include "qzeno/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace qzeno::model {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(cdouble v) { return fmt(v.real()) + "," + fmt(v.imag()); }

}  // namespace

// --- QubitEnergies ---------------------------------------------------------------

QubitEnergies QubitEnergies::from_transitions(double omega_eg, double omega_eg_prime) {
  QubitEnergies e;
  e.omega_g = 0.0;
  e.omega_e = omega_eg;
  e.omega_g_prime = 0.0;
  e.omega_e_prime = omega_eg_prime;
  return e;
}

void QubitEnergies::validate() const {
  if (!(omega_e > omega_g))
    throw ConfigError("QubitEnergies: omega_e must exceed omega_g (got " + fmt(omega_e) +
                      " <= " + fmt(omega_g) + ")");
  if (!(omega_e_prime > omega_g_prime))
    throw ConfigError("QubitEnergies: omega_e_prime must exceed omega_g_prime (got " +
                      fmt(omega_e_prime) + " <= " + fmt(omega_g_prime) + ")");
}

// --- SystemConfig ----------------------------------------------------------------

void SystemConfig::validate() const {
  if (!(coupling_J > 0.0)) throw ConfigError("system.J must be positive, got " + fmt(coupling_J));
  if (n_qubits < 1) throw ConfigError("system.n_qubits must be >= 1, got " + std::to_string(n_qubits));
  const double norm = std::norm(initial_c1) + std::norm(initial_c2);
  if (std::abs(norm - 1.0) > 1e-12)
    throw ConfigError("system initial amplitudes must satisfy |c1|^2 + |c2|^2 = 1 within 1e-12, got " +
                      fmt(norm));
  const double eps_derived = energies.epsilon();
  const double scale = std::max({1.0, std::abs(epsilon), std::abs(eps_derived)});
  if (std::abs(eps_derived - epsilon) > 1e-12 * scale)
    throw ConfigError("system.epsilon (" + fmt(epsilon) +
                      ") inconsistent with the stored level energies (derived " + fmt(eps_derived) + ")");
}

// --- spectral densities ----------------------------------------------------------

double OhmicDensity::normalization() const {
  return 1.0 / (omega_c * omega_c * std::tgamma(1.0 + S));
}

double OhmicDensity::j_of_omega(double omega) const {
  if (omega <= 0.0) return 0.0;
  return normalization() * g * g * omega_c * std::pow(omega / omega_c, S) *
         std::exp(-omega / omega_c);
}

double TabulatedDensity::integral() const {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < omega.size(); ++i)
    acc += 0.5 * (j[i] + j[i + 1]) * (omega[i + 1] - omega[i]);
  return acc;
}

double TabulatedDensity::j_of_omega(double w) const {
  if (omega.empty() || w < omega.front() || w > omega.back()) return 0.0;
  auto it = std::upper_bound(omega.begin(), omega.end(), w);
  if (it == omega.begin()) return j.front();
  std::size_t hi = static_cast<std::size_t>(it - omega.begin());
  if (hi >= omega.size()) return j.back();
  std::size_t lo = hi - 1;
  const double f = (w - omega[lo]) / (omega[hi] - omega[lo]);
  return j[lo] + f * (j[hi] - j[lo]);
}

void TabulatedDensity::validate() const {
  if (omega.size() < 2) throw ConfigError("tabulated density needs at least two samples");
  if (omega.size() != j.size())
    throw ConfigError("tabulated density: omega and J sample counts differ");
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!std::isfinite(omega[i]) || !std::isfinite(j[i]))
      throw ConfigError("tabulated density: non-finite sample at index " + std::to_string(i));
    if (omega[i] < 0.0)
      throw ConfigError("tabulated density: negative frequency " + fmt(omega[i]));
    if (j[i] < 0.0) throw ConfigError("tabulated density: negative J at omega=" + fmt(omega[i]));
    if (i > 0 && !(omega[i] > omega[i - 1]))
      throw ConfigError("tabulated density: omega grid must be strictly increasing near index " +
                        std::to_string(i));
  }
  if (!std::isfinite(integral()))
    throw ConfigError("tabulated density: integrated weight is not finite");
}

void validate(const SpectralDensity& d) {
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MarkovianDensity>) {
          if (v.gamma_tilde < 0.0)
            throw ConfigError("bath.gamma_tilde must be >= 0, got " + fmt(v.gamma_tilde));
        } else if constexpr (std::is_same_v<T, LorentzianDensity>) {
          if (v.g < 0.0) throw ConfigError("bath.g must be >= 0, got " + fmt(v.g));
          if (!(v.gamma > 0.0)) throw ConfigError("bath.gamma must be > 0, got " + fmt(v.gamma));
        } else if constexpr (std::is_same_v<T, OhmicDensity>) {
          if (v.g < 0.0) throw ConfigError("bath.g must be >= 0, got " + fmt(v.g));
          if (!(v.S > 0.0)) throw ConfigError("bath.s must be > 0, got " + fmt(v.S));
          if (!(v.omega_c > 0.0))
            throw ConfigError("bath.omega_c must be > 0, got " + fmt(v.omega_c));
          if (!(v.omega_eg > 0.0))
            throw ConfigError("bath.omega_eg must be > 0, got " + fmt(v.omega_eg));
        } else {
          v.validate();
        }
      },
      d);
}

double density_coupling(const SpectralDensity& d) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MarkovianDensity>)
          return v.gamma_tilde;
        else if constexpr (std::is_same_v<T, TabulatedDensity>)
          return std::sqrt(std::max(0.0, v.integral()));
        else
          return v.g;
      },
      d);
}

SpectralDensity with_coupling(const SpectralDensity& d, double coupling) {
  SpectralDensity out = d;
  std::visit(
      [coupling](auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MarkovianDensity>)
          v.gamma_tilde = coupling;
        else if constexpr (std::is_same_v<T, TabulatedDensity>)
          throw UnsupportedOperationError("tabulated densities have no coupling knob to sweep");
        else
          v.g = coupling;
      },
      out);
  return out;
}

std::string density_type_name(const SpectralDensity& d) {
  switch (d.index()) {
    case 0: return "markovian";
    case 1: return "lorentzian";
    case 2: return "ohmic";
    default: return "tabulated";
  }
}

// --- TimeGrid --------------------------------------------------------------------

TimeGrid TimeGrid::uniform(double tmax, int n_points) {
  if (n_points < 2) throw ConfigError("time grid needs at least 2 points, got " + std::to_string(n_points));
  if (!(tmax > 0.0)) throw ConfigError("tmax must be positive, got " + fmt(tmax));
  TimeGrid g;
  g.points.resize(static_cast<std::size_t>(n_points));
  for (int k = 0; k < n_points; ++k)
    g.points[static_cast<std::size_t>(k)] = tmax * static_cast<double>(k) / (n_points - 1);
  g.log_spaced = false;
  return g;
}

TimeGrid TimeGrid::logarithmic(double tmin, double tmax, int n_points) {
  if (n_points < 2) throw ConfigError("time grid needs at least 2 points");
  if (!(tmin > 0.0) || !(tmax > tmin)) throw ConfigError("log grid requires 0 < tmin < tmax");
  TimeGrid g;
  g.points.resize(static_cast<std::size_t>(n_points));
  const double r = std::log(tmax / tmin) / (n_points - 1);
  for (int k = 0; k < n_points; ++k)
    g.points[static_cast<std::size_t>(k)] = tmin * std::exp(r * k);
  g.points.back() = tmax;
  g.log_spaced = true;
  return g;
}

double TimeGrid::step() const {
  if (points.size() < 2) throw Error("time grid too short for a step size");
  const double h = points[1] - points[0];
  for (std::size_t i = 1; i + 1 < points.size(); ++i)
    if (std::abs((points[i + 1] - points[i]) - h) > 1e-9 * std::max(1.0, h))
      throw Error("time grid is not uniform");
  return h;
}

void TimeGrid::validate() const {
  if (points.empty()) throw ConfigError("time grid is empty");
  if (points.front() < 0.0) throw ConfigError("time grid starts before t = 0");
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    if (!(points[i + 1] > points[i])) throw ConfigError("time grid must be strictly increasing");
  if (!std::isfinite(points.back())) throw ConfigError("time grid contains non-finite entries");
}

// --- AmplitudeTrace --------------------------------------------------------------

std::string to_string(MethodTag tag) {
  switch (tag) {
    case MethodTag::ClosedForm: return "ClosedForm";
    case MethodTag::LaplaceTalbot: return "LaplaceTalbot";
    case MethodTag::LaplaceFourier: return "LaplaceFourier";
    case MethodTag::Volterra: return "Volterra";
    default: return "DiscretizedBath";
  }
}

AmplitudeTrace AmplitudeTrace::build(TimeGrid grid, std::vector<cdouble> c1,
                                     std::vector<cdouble> c2, MethodTag tag,
                                     double method_tolerance) {
  grid.validate();
  if (c1.size() != grid.points.size())
    throw Error("amplitude trace: c1 length does not match the time grid");
  if (!c2.empty() && c2.size() != c1.size())
    throw Error("amplitude trace: c2 length does not match the time grid");
  AmplitudeTrace tr;
  tr.grid = std::move(grid);
  tr.c1_tilde = std::move(c1);
  tr.c2_tilde = std::move(c2);
  tr.method_tag = tag;
  tr.method_tolerance = method_tolerance;
  tr.p1.resize(tr.c1_tilde.size());
  for (std::size_t i = 0; i < tr.c1_tilde.size(); ++i) tr.p1[i] = std::norm(tr.c1_tilde[i]);
  tr.validate();
  return tr;
}

void AmplitudeTrace::validate() const {
  if (p1.size() != c1_tilde.size()) throw Error("amplitude trace: p1 length mismatch");
  for (std::size_t i = 0; i < p1.size(); ++i) {
    if (std::abs(p1[i] - std::norm(c1_tilde[i])) > 1e-12)
      throw Error("amplitude trace: p1 deviates from |c1|^2 at index " + std::to_string(i));
    if (p1[i] < 0.0 || p1[i] > 1.0 + method_tolerance)
      throw Error("amplitude trace: population out of [0, 1 + tol] at t=" +
                  fmt(grid.points[i]) + " (p1=" + fmt(p1[i]) + ")");
  }
}

std::string to_string(PeakClass c) {
  switch (c) {
    case PeakClass::SharpPeak: return "SharpPeak";
    case PeakClass::SmoothPeak: return "SmoothPeak";
    case PeakClass::MonotoneDecreasing: return "MonotoneDecreasing";
    default: return "NoPeak";
  }
}

// --- config parsing ---------------------------------------------------------------

namespace {

struct RawConfig {
  // section -> key -> value, with insertion order preserved for diagnostics
  std::map<std::string, std::map<std::string, std::string>> kv;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

RawConfig tokenize(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // '#' starts a comment anywhere; ';' only as a whole-line comment, because
    // it doubles as the pair separator in tabulated sample lists.
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
      section = lower(trim(line.substr(1, line.size() - 2)));
      if (section != "system" && section != "bath" && section != "run")
        throw ConfigError("config: unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": key outside any section");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    raw.kv[section][key] = val;
  }
  return raw;
}

double parse_double(const std::string& section, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config " + section + "." + key + ": cannot parse number from '" + v + "'");
  }
}

int parse_int(const std::string& section, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config " + section + "." + key + ": cannot parse integer from '" + v + "'");
  }
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& v) {
  const std::string s = lower(v);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("config " + section + "." + key + ": expected a boolean, got '" + v + "'");
}

cdouble parse_complex(const std::string& section, const std::string& key, const std::string& v) {
  const auto comma = v.find(',');
  if (comma == std::string::npos) return {parse_double(section, key, v), 0.0};
  return {parse_double(section, key, trim(v.substr(0, comma))),
          parse_double(section, key, trim(v.substr(comma + 1)))};
}

// Inline tabulated samples: "w0:j0; w1:j1; ..."
void parse_samples(const std::string& v, TabulatedDensity& d) {
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw ConfigError("config bath.samples: expected 'omega:J' pairs separated by ';'");
    d.omega.push_back(parse_double("bath", "samples", trim(item.substr(0, colon))));
    d.j.push_back(parse_double("bath", "samples", trim(item.substr(colon + 1))));
  }
}

const std::set<std::string> kSystemKeys = {"j",       "epsilon", "c1_0",    "c2_0",
                                           "n_qubits", "topology", "omega_eg"};
const std::set<std::string> kRunKeys = {"engine",       "tmax",         "points",
                                        "tau",          "jump_threshold", "window_fraction",
                                        "coupling_min", "coupling_max", "coupling_step",
                                        "modes",        "strict"};

}  // namespace

ParsedConfig parse_config(const std::string& text) {
  const RawConfig raw = tokenize(text);
  ParsedConfig cfg;

  // [system]
  double physical_J = 1.0;
  std::optional<double> sys_omega_eg;
  if (auto it = raw.kv.find("system"); it != raw.kv.end()) {
    for (const auto& [key, val] : it->second) {
      if (!kSystemKeys.count(key)) throw ConfigError("config: unknown key system." + key);
      if (key == "j") physical_J = parse_double("system", key, val);
      else if (key == "epsilon") cfg.system.epsilon = parse_double("system", key, val);
      else if (key == "c1_0") cfg.system.initial_c1 = parse_complex("system", key, val);
      else if (key == "c2_0") cfg.system.initial_c2 = parse_complex("system", key, val);
      else if (key == "n_qubits") cfg.system.n_qubits = parse_int("system", key, val);
      else if (key == "omega_eg") sys_omega_eg = parse_double("system", key, val);
      else {
        const std::string t = lower(val);
        if (t == "separate" || t == "separatebaths") cfg.system.bath_topology = BathTopology::SeparateBaths;
        else if (t == "common" || t == "commonbath") cfg.system.bath_topology = BathTopology::CommonBath;
        else throw ConfigError("config system.topology: expected 'separate' or 'common', got '" + val + "'");
      }
    }
  }
  if (!(physical_J > 0.0)) throw ConfigError("system.J must be positive, got " + fmt(physical_J));

  // [bath]
  std::string bath_type = "markovian";
  std::map<std::string, std::string> bath_kv;
  if (auto it = raw.kv.find("bath"); it != raw.kv.end()) {
    bath_kv = it->second;
    if (auto t = bath_kv.find("type"); t != bath_kv.end()) {
      bath_type = lower(t->second);
      bath_kv.erase(t);
    }
  }
  auto take = [&bath_kv](const char* key) -> std::optional<std::string> {
    auto it = bath_kv.find(key);
    if (it == bath_kv.end()) return std::nullopt;
    std::string v = it->second;
    bath_kv.erase(it);
    return v;
  };
  if (bath_type == "markovian") {
    MarkovianDensity d;
    if (auto v = take("gamma_tilde")) d.gamma_tilde = parse_double("bath", "gamma_tilde", *v);
    cfg.bath = d;
  } else if (bath_type == "lorentzian") {
    LorentzianDensity d;
    if (auto v = take("g")) d.g = parse_double("bath", "g", *v);
    if (auto v = take("gamma")) d.gamma = parse_double("bath", "gamma", *v);
    if (auto v = take("delta_c")) d.delta_c = parse_double("bath", "delta_c", *v);
    cfg.bath = d;
  } else if (bath_type == "ohmic") {
    OhmicDensity d;
    if (auto v = take("g")) d.g = parse_double("bath", "g", *v);
    if (auto v = take("s")) d.S = parse_double("bath", "s", *v);
    if (auto v = take("omega_c")) d.omega_c = parse_double("bath", "omega_c", *v);
    if (auto v = take("omega_eg")) d.omega_eg = parse_double("bath", "omega_eg", *v);
    cfg.bath = d;
  } else if (bath_type == "tabulated") {
    TabulatedDensity d;
    if (auto v = take("samples")) parse_samples(*v, d);
    if (auto v = take("omega_eg_prime")) d.omega_eg_prime = parse_double("bath", "omega_eg_prime", *v);
    cfg.bath = d;
  } else {
    throw ConfigError("config bath.type: unknown density '" + bath_type + "'");
  }
  if (!bath_kv.empty())
    throw ConfigError("config: unknown key bath." + bath_kv.begin()->first + " for type '" +
                      bath_type + "'");

  // [run]
  if (auto it = raw.kv.find("run"); it != raw.kv.end()) {
    for (const auto& [key, val] : it->second) {
      if (!kRunKeys.count(key)) throw ConfigError("config: unknown key run." + key);
      if (key == "engine") {
        const std::string e = lower(val);
        if (e != "fourier" && e != "talbot" && e != "volterra" && e != "bath" && e != "closed-form")
          throw ConfigError("config run.engine: unknown engine '" + val + "'");
        cfg.run.engine = e;
      } else if (key == "tmax") cfg.run.tmax = parse_double("run", key, val);
      else if (key == "points") cfg.run.points = parse_int("run", key, val);
      else if (key == "tau") cfg.run.tau = parse_double("run", key, val);
      else if (key == "jump_threshold") cfg.run.jump_threshold = parse_double("run", key, val);
      else if (key == "window_fraction") cfg.run.window_fraction = parse_double("run", key, val);
      else if (key == "coupling_min") cfg.run.coupling_min = parse_double("run", key, val);
      else if (key == "coupling_max") cfg.run.coupling_max = parse_double("run", key, val);
      else if (key == "coupling_step") cfg.run.coupling_step = parse_double("run", key, val);
      else if (key == "modes") cfg.run.modes = parse_int("run", key, val);
      else cfg.run.strict = parse_bool("run", key, val);
    }
  }

  // Rescale to J = 1 units when the config carries a physical J: frequencies and rates
  // divide by J, times multiply by it.
  if (physical_J != 1.0) {
    const double J = physical_J;
    cfg.system.epsilon /= J;
    std::visit(
        [J](auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, MarkovianDensity>) d.gamma_tilde /= J;
          else if constexpr (std::is_same_v<T, LorentzianDensity>) {
            d.g /= J; d.gamma /= J; d.delta_c /= J;
          } else if constexpr (std::is_same_v<T, OhmicDensity>) {
            d.g /= J; d.omega_c /= J; d.omega_eg /= J;
          } else {
            for (auto& w : d.omega) w /= J;
            for (auto& jj : d.j) jj /= J;  // J(omega) has units of frequency as well
            d.omega_eg_prime /= J;
          }
        },
        cfg.bath);
    if (sys_omega_eg) *sys_omega_eg /= J;
    cfg.run.tmax *= J;
    cfg.run.tau *= J;
    cfg.run.coupling_min /= J;
    cfg.run.coupling_max /= J;
    cfg.run.coupling_step /= J;
  }
  cfg.system.coupling_J = 1.0;

  // Level energies: the damped qubit's transition frequency comes from the bath when
  // the kernel carries one (Ohmic, Tabulated); otherwise from system.omega_eg (with
  // only the detuning mattering for the dynamics).
  double omega_eg_prime_ref = 0.0;
  bool have_ref = false;
  if (const auto* oh = std::get_if<OhmicDensity>(&cfg.bath)) {
    omega_eg_prime_ref = oh->omega_eg;
    have_ref = true;
  } else if (const auto* tab = std::get_if<TabulatedDensity>(&cfg.bath)) {
    omega_eg_prime_ref = tab->omega_eg_prime;
    have_ref = true;
  }
  double omega_eg_1;
  if (have_ref) {
    omega_eg_1 = omega_eg_prime_ref - cfg.system.epsilon;
    if (sys_omega_eg && std::abs(*sys_omega_eg - omega_eg_1) > 1e-9 * std::max(1.0, std::abs(omega_eg_1)))
      throw ConfigError("config system.omega_eg (" + fmt(*sys_omega_eg) +
                        ") conflicts with bath frequency minus epsilon (" + fmt(omega_eg_1) + ")");
  } else {
    omega_eg_1 = sys_omega_eg.value_or(std::max(1.0, 1.0 + std::abs(cfg.system.epsilon)));
  }
  const double omega_eg_2 = omega_eg_1 + cfg.system.epsilon;
  if (!(omega_eg_1 > 0.0) || !(omega_eg_2 > 0.0))
    throw ConfigError("config: level energies require positive transition frequencies (omega_eg=" +
                      fmt(omega_eg_1) + ", omega_eg'=" + fmt(omega_eg_2) +
                      "); set system.omega_eg explicitly");
  cfg.system.energies = QubitEnergies::from_transitions(omega_eg_1, omega_eg_2);

  cfg.system.energies.validate();
  cfg.system.validate();
  validate(cfg.bath);
  if (!(cfg.run.tmax > 0.0)) throw ConfigError("run.tmax must be positive, got " + fmt(cfg.run.tmax));
  if (cfg.run.points < 2) throw ConfigError("run.points must be >= 2, got " + std::to_string(cfg.run.points));
  if (!(cfg.run.tau > 0.0)) throw ConfigError("run.tau must be positive, got " + fmt(cfg.run.tau));
  if (!(cfg.run.jump_threshold > 1.0))
    throw ConfigError("run.jump_threshold must exceed 1, got " + fmt(cfg.run.jump_threshold));
  if (!(cfg.run.window_fraction > 0.0) || cfg.run.window_fraction >= 1.0)
    throw ConfigError("run.window_fraction must lie in (0, 1), got " + fmt(cfg.run.window_fraction));
  if (cfg.run.modes < 2) throw ConfigError("run.modes must be >= 2, got " + std::to_string(cfg.run.modes));
  return cfg;
}

std::string emit_config(const ParsedConfig& cfg) {
  std::ostringstream out;
  out << "[system]\n";
  out << "j = " << fmt(cfg.system.coupling_J) << "\n";
  out << "epsilon = " << fmt(cfg.system.epsilon) << "\n";
  out << "c1_0 = " << fmt(cfg.system.initial_c1) << "\n";
  out << "c2_0 = " << fmt(cfg.system.initial_c2) << "\n";
  out << "n_qubits = " << cfg.system.n_qubits << "\n";
  out << "topology = "
      << (cfg.system.bath_topology == BathTopology::SeparateBaths ? "separate" : "common") << "\n";
  out << "omega_eg = " << fmt(cfg.system.energies.omega_eg()) << "\n";
  out << "\n[bath]\n";
  out << "type = " << density_type_name(cfg.bath) << "\n";
  std::visit(
      [&out](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, MarkovianDensity>) {
          out << "gamma_tilde = " << fmt(d.gamma_tilde) << "\n";
        } else if constexpr (std::is_same_v<T, LorentzianDensity>) {
          out << "g = " << fmt(d.g) << "\n";
          out << "gamma = " << fmt(d.gamma) << "\n";
          out << "delta_c = " << fmt(d.delta_c) << "\n";
        } else if constexpr (std::is_same_v<T, OhmicDensity>) {
          out << "g = " << fmt(d.g) << "\n";
          out << "s = " << fmt(d.S) << "\n";
          out << "omega_c = " << fmt(d.omega_c) << "\n";
          out << "omega_eg = " << fmt(d.omega_eg) << "\n";
        } else {
          out << "samples = ";
          for (std::size_t i = 0; i < d.omega.size(); ++i) {
            if (i) out << "; ";
            out << fmt(d.omega[i]) << ":" << fmt(d.j[i]);
          }
          out << "\n";
          out << "omega_eg_prime = " << fmt(d.omega_eg_prime) << "\n";
        }
      },
      cfg.bath);
  out << "\n[run]\n";
  out << "engine = " << cfg.run.engine << "\n";
  out << "tmax = " << fmt(cfg.run.tmax) << "\n";
  out << "points = " << cfg.run.points << "\n";
  out << "tau = " << fmt(cfg.run.tau) << "\n";
  out << "jump_threshold = " << fmt(cfg.run.jump_threshold) << "\n";
  out << "window_fraction = " << fmt(cfg.run.window_fraction) << "\n";
  out << "coupling_min = " << fmt(cfg.run.coupling_min) << "\n";
  out << "coupling_max = " << fmt(cfg.run.coupling_max) << "\n";
  out << "coupling_step = " << fmt(cfg.run.coupling_step) << "\n";
  out << "modes = " << cfg.run.modes << "\n";
  out << "strict = " << (cfg.run.strict ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace qzeno::model
