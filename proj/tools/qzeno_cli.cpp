// qzeno_cli.cpp — command-line driver: simulate / sweep / ep-locus / eigen /
// oracle-check plus bundled figure presets, CSV serialization, and JSON manifests.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qzeno/analysis.hpp"
#include "qzeno/kernel.hpp"
#include "qzeno/laplace.hpp"
#include "qzeno/markovian.hpp"
#include "qzeno/model.hpp"
#include "qzeno/timedomain.hpp"

namespace {

using json = nlohmann::json;
using namespace qzeno;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

struct Manifest {
  std::string command;
  model::ParsedConfig config;
  json tolerances = json::object();
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void write(const std::string& path) const {
    json j;
    j["command"] = command;
    j["version"] = std::string("qzeno ") + kVersion;
    j["config"] = model::emit_config(config);
    j["tolerances"] = tolerances;
    j["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    j["outputs"] = outputs;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open manifest path '" + path + "' for writing");
    out << j.dump(2) << "\n";
  }
};

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output path '" + path + "' for writing");
  out << body;
}

std::string trace_csv(const model::AmplitudeTrace& trace) {
  const auto rate = analysis::effective_decay_rate(trace);
  std::string body = "t,re_c1,im_c1,p1,gamma_eff\n";
  for (std::size_t i = 0; i < trace.grid.points.size(); ++i) {
    body += fmt(trace.grid.points[i]) + "," + fmt(trace.c1_tilde[i].real()) + "," +
            fmt(trace.c1_tilde[i].imag()) + "," + fmt(trace.p1[i]) + "," + fmt(rate[i]) + "\n";
  }
  return body;
}

std::string curve_csv(const model::DecayCurve& curve) {
  std::string body = "coupling,gamma_eff_tau,derivative\n";
  for (std::size_t i = 0; i < curve.coupling_grid.size(); ++i)
    body += fmt(curve.coupling_grid[i]) + "," + fmt(curve.gamma_eff_tau[i]) + "," +
            fmt(curve.derivative[i]) + "\n";
  return body;
}

std::string locus_csv(const std::vector<analysis::LocusPoint>& locus) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::string body = "param,g_ep,err\n";
  for (const auto& pt : locus)
    body += fmt(pt.parameter) + "," + fmt(pt.g_ep.value_or(nan)) + "," +
            fmt(pt.g_ep ? pt.error_bar : nan) + "\n";
  return body;
}

json report_json(const model::EpReport& report, const analysis::PeakClassifierConfig& cfg,
                 bool all_converged) {
  json j;
  j["peak_coupling"] = report.peak_coupling;
  j["classification"] = model::to_string(report.classification);
  j["derivative_jump"] = report.derivative_jump;
  j["sharpness_ratio"] = report.sharpness_ratio;
  j["grid_resolution"] = report.grid_resolution;
  if (report.cross_check)
    j["cross_check"] = *report.cross_check;
  else
    j["cross_check"] = nullptr;
  j["tau"] = cfg.tau;
  j["all_converged"] = all_converged;
  return j;
}

model::ParsedConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return model::parse_config(ss.str());
}

std::vector<double> parse_range(const std::string& spec) {
  // "min:max:step" inclusive of both ends (within half a step).
  double lo, hi, step;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3)
    throw ConfigError("range '" + spec + "' must be min:max:step");
  if (!(step > 0.0) || !(hi >= lo)) throw ConfigError("range '" + spec + "' is empty");
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double v = lo + k * step;
    if (v > hi + 0.5 * step) break;
    out.push_back(std::min(v, hi));
    if (out.size() > 100000) throw ConfigError("range '" + spec + "' has too many points");
  }
  return out;
}

analysis::PeakClassifierConfig classifier_from(const model::RunDirectives& run) {
  analysis::PeakClassifierConfig cfg;
  cfg.tau = run.tau;
  cfg.jump_threshold = run.jump_threshold;
  cfg.window_fraction = run.window_fraction;
  cfg.strict = run.strict;
  cfg.validate();
  return cfg;
}

std::vector<double> coupling_grid_from(const model::RunDirectives& run) {
  std::ostringstream spec;
  spec << fmt(run.coupling_min) << ":" << fmt(run.coupling_max) << ":" << fmt(run.coupling_step);
  return parse_range(spec.str());
}

// --- command: simulate ------------------------------------------------------------------

model::AmplitudeTrace run_engine(const model::ParsedConfig& cfg, const std::string& engine,
                                 const model::TimeGrid& grid) {
  const auto& density = cfg.bath;
  if (engine == "closed-form") {
    const auto* mk = std::get_if<model::MarkovianDensity>(&density);
    if (!mk || std::abs(cfg.system.epsilon) > 1e-12 ||
        std::abs(cfg.system.initial_c1 - cdouble{1.0, 0.0}) > 1e-12)
      throw ConfigError(
          "the closed-form engine needs a Markovian bath with epsilon = 0 and the default "
          "initial state; use --engine fourier instead");
    std::vector<cdouble> c1(grid.points.size());
    for (std::size_t i = 0; i < grid.points.size(); ++i)
      c1[i] = markovian::c1_closed_form(grid.points[i], mk->gamma_tilde, cfg.system.coupling_J);
    return model::AmplitudeTrace::build(grid, std::move(c1), {}, model::MethodTag::ClosedForm,
                                        1e-12);
  }
  if (engine == "volterra") {
    if (std::holds_alternative<model::TabulatedDensity>(density) &&
        std::get<model::TabulatedDensity>(density).omega.size() > 20000)
      throw ConfigError("the Volterra engine is impractical for very fine tabulations; "
                        "use --engine fourier");
    return timedomain::solve_volterra(cfg.system, density, grid);
  }
  if (engine == "bath") {
    if (std::holds_alternative<model::MarkovianDensity>(density))
      throw ConfigError(
          "the Markovian kernel has no spectral density to discretize; use --engine "
          "closed-form or fourier");
    const auto bath = timedomain::discretize_bath(density, cfg.run.modes);
    return timedomain::solve_discretized(cfg.system, bath, grid);
  }
  if (engine == "talbot" || engine == "fourier") {
    const auto k = kernel::make_transform(density);
    const auto F = laplace::build_for_config(cfg.system, k);
    return laplace::invert(
        F, grid, engine == "talbot" ? laplace::Engine::Talbot : laplace::Engine::FourierSeries);
  }
  throw ConfigError("unknown engine '" + engine + "'");
}

int cmd_simulate(const model::ParsedConfig& cfg, const std::string& engine,
                 const std::string& out_path, const std::string& manifest_path) {
  Manifest man;
  man.command = "simulate";
  man.config = cfg;
  const auto grid = model::TimeGrid::uniform(cfg.run.tmax, cfg.run.points);
  const auto trace = run_engine(cfg, engine, grid);
  write_file(out_path, trace_csv(trace));
  man.outputs.push_back(out_path);
  double max_est = 0.0;
  for (double e : trace.error_estimate) max_est = std::max(max_est, e);
  man.tolerances = {{"engine", engine},
                    {"method_tolerance", trace.method_tolerance},
                    {"max_error_estimate", max_est},
                    {"accuracy_warning", trace.accuracy_warning}};
  if (trace.recurrence_time > 0.0) man.tolerances["recurrence_time"] = trace.recurrence_time;
  if (!manifest_path.empty()) man.write(manifest_path);
  std::cout << "wrote " << out_path << " (" << trace.grid.points.size() << " points, engine "
            << engine << ")\n";
  return 0;
}

// --- command: sweep ---------------------------------------------------------------------

int cmd_sweep(const model::ParsedConfig& cfg, const std::string& param,
              const std::string& out_path, const std::string& report_path,
              const std::string& manifest_path) {
  const bool markovian_bath = std::holds_alternative<model::MarkovianDensity>(cfg.bath);
  if (param == "gtilde" && !markovian_bath)
    throw ConfigError("--param gtilde applies to Markovian baths only");
  if (param == "g" && markovian_bath)
    throw ConfigError("--param g applies to structured baths; this config is Markovian");

  Manifest man;
  man.command = "sweep";
  man.config = cfg;
  const auto classifier = classifier_from(cfg.run);
  const auto grid = coupling_grid_from(cfg.run);
  const auto curve = analysis::sweep(cfg.system, cfg.bath, grid, classifier);
  auto report = analysis::classify_peak(curve, classifier);

  const auto ktest = kernel::make_transform(cfg.bath);
  if (ktest.rational && report.classification != model::PeakClass::NoPeak) {
    const auto sys = cfg.system;
    const auto base = cfg.bath;
    report.cross_check = analysis::nearest_double_root_coupling(
        [&sys, &base](double g) {
          return laplace::build_for_config(sys, kernel::make_transform(model::with_coupling(base, g)));
        },
        grid.front(), grid.back());
  }

  write_file(out_path, curve_csv(curve));
  man.outputs.push_back(out_path);
  const json rep = report_json(report, classifier, curve.all_converged);
  if (!report_path.empty()) {
    write_file(report_path, rep.dump(2) + "\n");
    man.outputs.push_back(report_path);
  }
  man.tolerances = {{"tau", classifier.tau},
                    {"jump_threshold", classifier.jump_threshold},
                    {"window_fraction", classifier.window_fraction}};
  if (!manifest_path.empty()) man.write(manifest_path);
  std::cout << "peak " << model::to_string(report.classification) << " at coupling "
            << fmt(report.peak_coupling) << " (sharpness " << fmt(report.sharpness_ratio)
            << ")\n";
  return 0;
}

// --- command: ep-locus ------------------------------------------------------------------

int cmd_ep_locus(const model::ParsedConfig& cfg, const std::string& over,
                 const std::string& range, const std::string& out_path,
                 const std::string& manifest_path) {
  const auto* lor = std::get_if<model::LorentzianDensity>(&cfg.bath);
  if (!lor) throw ConfigError("ep-locus requires a Lorentzian bath");
  analysis::LocusParameter parameter;
  if (over == "gamma") parameter = analysis::LocusParameter::LorentzianWidth;
  else if (over == "epsilon") parameter = analysis::LocusParameter::Epsilon;
  else if (over == "deltac") parameter = analysis::LocusParameter::DetuningDeltaC;
  else throw ConfigError("--over must be gamma, epsilon, or deltac");

  Manifest man;
  man.command = "ep-locus";
  man.config = cfg;
  const auto params = parse_range(range);
  const auto classifier = classifier_from(cfg.run);
  const auto grid = coupling_grid_from(cfg.run);
  const auto locus =
      analysis::trace_ep_locus(cfg.system, *lor, parameter, params, grid, classifier);
  write_file(out_path, locus_csv(locus));
  man.outputs.push_back(out_path);
  man.tolerances = {{"tau", classifier.tau}, {"parameter", over}};
  if (!manifest_path.empty()) man.write(manifest_path);
  std::cout << "wrote " << out_path << " (" << locus.size() << " slices over " << over << ")\n";
  return 0;
}

// --- command: eigen ---------------------------------------------------------------------

int cmd_eigen(const model::ParsedConfig& cfg, const std::string& grid_spec,
              const std::string& out_path, const std::string& manifest_path) {
  if (!std::holds_alternative<model::MarkovianDensity>(cfg.bath))
    throw ConfigError("the eigenvalue surface is defined for the Markovian bath only");
  double g0, g1, e0, e1;
  int ng, ne;
  if (std::sscanf(grid_spec.c_str(), "%lf:%lf:%d,%lf:%lf:%d", &g0, &g1, &ng, &e0, &e1, &ne) != 6)
    throw ConfigError("--grid must be gmin:gmax:n,emin:emax:n");
  if (ng < 1 || ne < 1 || g0 < 0.0 || g1 < g0 || e1 < e0)
    throw ConfigError("--grid values out of order");
  std::vector<double> gammas, epsilons;
  for (int i = 0; i < ng; ++i)
    gammas.push_back(ng == 1 ? g0 : g0 + (g1 - g0) * i / (ng - 1));
  for (int i = 0; i < ne; ++i)
    epsilons.push_back(ne == 1 ? e0 : e0 + (e1 - e0) * i / (ne - 1));

  Manifest man;
  man.command = "eigen";
  man.config = cfg;
  const auto samples = analysis::im_eigenvalue_surface(cfg.system, gammas, epsilons);
  std::string body = "gamma_tilde,epsilon,re_lambda3,im_lambda3,re_lambda4,im_lambda4,overlap\n";
  for (const auto& s : samples)
    body += fmt(s.gamma_tilde) + "," + fmt(s.epsilon) + "," + fmt(s.lambda3.real()) + "," +
            fmt(s.lambda3.imag()) + "," + fmt(s.lambda4.real()) + "," + fmt(s.lambda4.imag()) +
            "," + fmt(s.overlap) + "\n";
  write_file(out_path, body);
  man.outputs.push_back(out_path);
  if (!manifest_path.empty()) man.write(manifest_path);
  std::cout << "wrote " << out_path << " (" << samples.size() << " samples)\n";
  return 0;
}

// --- command: oracle-check --------------------------------------------------------------

int cmd_oracle_check(const model::ParsedConfig& cfg) {
  const auto grid = model::TimeGrid::uniform(cfg.run.tmax, cfg.run.points);
  const bool markovian_bath = std::holds_alternative<model::MarkovianDensity>(cfg.bath);
  const bool tabulated = std::holds_alternative<model::TabulatedDensity>(cfg.bath);
  const auto k = kernel::make_transform(cfg.bath);

  struct Entry {
    std::string name;
    model::AmplitudeTrace trace;
  };
  std::vector<Entry> traces;
  traces.push_back({"fourier", run_engine(cfg, "fourier", grid)});
  if (k.rational) traces.push_back({"talbot", run_engine(cfg, "talbot", grid)});
  if (markovian_bath && std::abs(cfg.system.epsilon) < 1e-12 &&
      std::abs(cfg.system.initial_c1 - cdouble{1.0, 0.0}) < 1e-12 && cfg.system.n_qubits == 1)
    traces.push_back({"closed-form", run_engine(cfg, "closed-form", grid)});
  if (cfg.system.n_qubits == 1) {
    // Volterra needs a fine uniform grid that contains the run grid.
    const double h_coarse = cfg.run.tmax / (cfg.run.points - 1);
    const int refine = std::max(1, static_cast<int>(std::ceil(h_coarse / 0.002)));
    const int fine_points = (cfg.run.points - 1) * refine + 1;
    const auto fine = model::TimeGrid::uniform(cfg.run.tmax, fine_points);
    auto full = timedomain::solve_volterra(cfg.system, cfg.bath, fine);
    std::vector<cdouble> sub(grid.points.size());
    for (std::size_t i = 0; i < grid.points.size(); ++i)
      sub[i] = full.c1_tilde[i * static_cast<std::size_t>(refine)];
    auto tr = model::AmplitudeTrace::build(grid, std::move(sub), {}, model::MethodTag::Volterra,
                                           full.method_tolerance);
    tr.error_estimate = full.error_estimate;
    traces.push_back({"volterra", std::move(tr)});
  }
  bool bath_has_recurrence = false;
  double recurrence = 0.0;
  if (!markovian_bath && !tabulated && cfg.system.n_qubits == 1) {
    auto tr = run_engine(cfg, "bath", grid);
    recurrence = tr.recurrence_time;
    bath_has_recurrence = recurrence > 0.0 && recurrence < grid.points.back();
    traces.push_back({"bath", std::move(tr)});
  }

  auto tol_for = [](const std::string& a, const std::string& b) {
    if (a == "bath" || b == "bath") return 1e-2;
    if (a == "volterra" || b == "volterra") return 1e-5;
    if (a == "closed-form" || b == "closed-form") return 1e-8;
    return 1e-6;
  };
  bool all_pass = true;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    for (std::size_t j = i + 1; j < traces.size(); ++j) {
      double sup = 0.0;
      for (std::size_t p = 0; p < grid.points.size(); ++p)
        sup = std::max(sup, std::abs(traces[i].trace.p1[p] - traces[j].trace.p1[p]));
      const double tol = tol_for(traces[i].name, traces[j].name);
      const bool pass = sup <= tol;
      all_pass = all_pass && pass;
      std::cout << traces[i].name << " vs " << traces[j].name << ": "
                << (pass ? "PASS" : "FAIL") << " (sup |dP1| = " << fmt(sup) << ", tol "
                << fmt(tol) << ")";
      if (!pass && (traces[i].name == "bath" || traces[j].name == "bath") && bath_has_recurrence)
        std::cout << " -- note: discretization recurrence time " << fmt(recurrence)
                  << " lies inside the horizon " << fmt(grid.points.back())
                  << "; increase run.modes";
      std::cout << "\n";
    }
  }
  std::cout << (all_pass ? "oracle check: all engines agree\n"
                         : "oracle check: disagreement detected\n");
  return all_pass ? 0 : 2;
}

// --- figure presets ----------------------------------------------------------------------

model::ParsedConfig preset_base() {
  model::ParsedConfig cfg;
  cfg.system.energies = model::QubitEnergies::from_transitions(1.0, 1.0);
  return cfg;
}

model::ParsedConfig preset_markovian(double gamma_tilde) {
  auto cfg = preset_base();
  cfg.bath = model::MarkovianDensity{gamma_tilde};
  return cfg;
}

model::ParsedConfig preset_lorentzian(double g, double gamma, double eps) {
  auto cfg = preset_base();
  cfg.bath = model::LorentzianDensity{g, gamma, 0.0};
  cfg.system.epsilon = eps;
  const double omega_eg = 1.0 + std::max(0.0, -eps);
  cfg.system.energies = model::QubitEnergies::from_transitions(omega_eg, omega_eg + eps);
  cfg.run.tau = 6000.0;
  cfg.run.coupling_min = 0.2;
  cfg.run.coupling_max = 6.0;
  cfg.run.coupling_step = 0.1;
  return cfg;
}

model::ParsedConfig preset_ohmic(double g, double S, double omega_c, double eps) {
  auto cfg = preset_base();
  const double omega_eg_prime = 6.0;
  cfg.bath = model::OhmicDensity{g, S, omega_c, omega_eg_prime};
  cfg.system.epsilon = eps;
  cfg.system.energies = model::QubitEnergies::from_transitions(omega_eg_prime - eps, omega_eg_prime);
  cfg.run.tau = 60.0;
  cfg.run.coupling_min = 0.2;
  cfg.run.coupling_max = 5.0;
  cfg.run.coupling_step = 0.15;
  return cfg;
}

int run_figure(const std::string& name, const std::string& dir) {
  auto path = [&dir](const std::string& file) { return dir + "/" + file; };
  if (name == "2") {
    auto cfg = preset_markovian(1.0);
    return cmd_eigen(cfg, "0:8:161,-2:0:2", path("fig2_surface.csv"), path("fig2_manifest.json"));
  }
  if (name == "3a") {
    int rc = 0;
    for (double gt : {0.2, 2.0, 4.0, 8.0}) {
      auto cfg = preset_markovian(gt);
      std::ostringstream file;
      file << "fig3a_gamma_" << fmt(gt) << ".csv";
      rc |= cmd_simulate(cfg, "fourier", path(file.str()), "");
    }
    return rc;
  }
  if (name == "4a") {
    auto cfg = preset_markovian(1.0);
    cfg.run.tau = 200.0;
    cfg.run.coupling_min = 0.2;
    cfg.run.coupling_max = 8.0;
    cfg.run.coupling_step = 0.1;
    return cmd_sweep(cfg, "gtilde", path("fig4a_curve.csv"), path("fig4a_report.json"),
                     path("fig4a_manifest.json"));
  }
  if (name == "5d") {
    auto cfg = preset_lorentzian(1.0, 0.5, 0.0);
    return cmd_sweep(cfg, "g", path("fig5d_curve.csv"), path("fig5d_report.json"),
                     path("fig5d_manifest.json"));
  }
  if (name == "5e") {
    auto cfg = preset_lorentzian(1.0, 0.5, 0.0);
    cfg.run.coupling_max = 4.0;
    return cmd_ep_locus(cfg, "gamma", "0.1:2:0.1", path("fig5e_locus.csv"),
                        path("fig5e_manifest.json"));
  }
  if (name == "5f") {
    int rc = 0;
    for (double gamma : {0.25, 0.5, 1.0, 2.0}) {
      auto cfg = preset_lorentzian(1.0, gamma, 0.0);
      std::ostringstream file;
      file << "fig5f_gamma_" << fmt(gamma);
      rc |= cmd_sweep(cfg, "g", path(file.str() + "_curve.csv"), path(file.str() + "_report.json"),
                      "");
    }
    return rc;
  }
  if (name == "6a") {
    int rc = 0;
    for (double eps : {0.0, 1.0, 3.0, 5.0}) {
      auto cfg = preset_lorentzian(1.0, 0.5, eps);
      std::ostringstream file;
      file << "fig6a_eps_" << fmt(eps);
      rc |= cmd_sweep(cfg, "g", path(file.str() + "_curve.csv"), path(file.str() + "_report.json"),
                      "");
    }
    return rc;
  }
  if (name == "7a") {
    int rc = 0;
    for (double S : {1.0, 2.0, 3.0}) {
      auto cfg = preset_ohmic(1.0, S, 1.0, 0.0);
      std::ostringstream file;
      file << "fig7a_S_" << fmt(S);
      rc |= cmd_sweep(cfg, "g", path(file.str() + "_curve.csv"), path(file.str() + "_report.json"),
                      "");
    }
    return rc;
  }
  if (name == "7b") {
    int rc = 0;
    for (double wc : {1.0, 1.3, 1.8}) {
      auto cfg = preset_ohmic(1.0, 2.0, wc, 0.0);
      std::ostringstream file;
      file << "fig7b_wc_" << fmt(wc);
      rc |= cmd_sweep(cfg, "g", path(file.str() + "_curve.csv"), path(file.str() + "_report.json"),
                      "");
    }
    return rc;
  }
  if (name == "7c") {
    int rc = 0;
    for (double eps : {0.0, 1.5}) {
      auto cfg = preset_ohmic(1.0, 1.0, 1.0, eps);
      std::ostringstream file;
      file << "fig7c_eps_" << fmt(eps);
      rc |= cmd_sweep(cfg, "g", path(file.str() + "_curve.csv"), path(file.str() + "_report.json"),
                      "");
    }
    return rc;
  }
  throw ConfigError("unknown figure preset '" + name +
                    "' (available: 2, 3a, 4a, 5d, 5e, 5f, 6a, 7a, 7b, 7c)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled-qubit decay dynamics: exceptional points and Zeno onsets"};
  app.require_subcommand(0, 1);

  std::string figure, figure_dir = ".";
  app.add_option("--figure", figure, "run a bundled figure preset (2, 3a, 4a, 5d, 5e, 5f, 6a, 7a, 7b, 7c)");
  app.add_option("--out-dir", figure_dir, "output directory for figure presets");

  std::string config_path, out_path, manifest_path, report_path;
  std::string engine_override, param = "g", over, range, grid_spec = "0:8:161,-2:2:5";
  double tmax_override = -1.0, tau_override = -1.0;
  int points_override = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "config file ([system]/[bath]/[run])")->required();
    cmd->add_option("--manifest", manifest_path, "write a JSON run manifest here");
  };

  auto* sim = app.add_subcommand("simulate", "time-domain trace of the excited population");
  add_common(sim);
  sim->add_option("--engine", engine_override, "talbot | fourier | volterra | bath | closed-form");
  sim->add_option("--tmax", tmax_override, "time horizon override");
  sim->add_option("--points", points_override, "grid point override");
  sim->add_option("--out", out_path, "trace CSV path");

  auto* swp = app.add_subcommand("sweep", "decay rate versus coupling, with peak classification");
  add_common(swp);
  swp->add_option("--param", param, "gtilde (Markovian) | g (structured)");
  swp->add_option("--range", range, "coupling range min:max:step (overrides [run])");
  swp->add_option("--tau", tau_override, "long-time horizon override");
  swp->add_option("--out", out_path, "curve CSV path");
  swp->add_option("--report", report_path, "peak report JSON path");

  auto* loc = app.add_subcommand("ep-locus", "trace the sharp-peak position across a parameter");
  add_common(loc);
  loc->add_option("--over", over, "gamma | epsilon | deltac")->required();
  loc->add_option("--range", range, "parameter range min:max:step");
  loc->add_option("--out", out_path, "locus CSV path");

  auto* eig = app.add_subcommand("eigen", "non-Hermitian eigenvalue surface (Markovian)");
  add_common(eig);
  eig->add_option("--grid", grid_spec, "gamma and epsilon grids: gmin:gmax:n,emin:emax:n");
  eig->add_option("--out", out_path, "surface CSV path");

  auto* orc = app.add_subcommand("oracle-check", "cross-validate every applicable engine pair");
  add_common(orc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help/error text
    return code == 0 ? 0 : 1;     // usage problems exit 1; --help/--version exit 0
  }

  try {
    if (!figure.empty()) return run_figure(figure, figure_dir);
    if (app.get_subcommands().empty()) {
      std::cerr << "error: a subcommand or --figure is required (see --help)\n";
      return 1;
    }
    auto cfg = load_config(config_path);
    if (tmax_override > 0.0) cfg.run.tmax = tmax_override;
    if (points_override >= 0) {
      if (points_override < 2) throw ConfigError("--points must be at least 2");
      cfg.run.points = points_override;
    }
    if (tau_override > 0.0) cfg.run.tau = tau_override;
    if (sim->parsed()) {
      const std::string engine = engine_override.empty() ? cfg.run.engine : engine_override;
      return cmd_simulate(cfg, engine, out_path.empty() ? "trace.csv" : out_path, manifest_path);
    }
    if (swp->parsed()) {
      if (!range.empty()) {
        const auto grid = parse_range(range);
        if (grid.size() < 2) throw ConfigError("sweep range needs at least two points");
        cfg.run.coupling_min = grid.front();
        cfg.run.coupling_max = grid.back();
        cfg.run.coupling_step = grid[1] - grid[0];
      }
      return cmd_sweep(cfg, param, out_path.empty() ? "curve.csv" : out_path,
                       report_path.empty() ? "report.json" : report_path, manifest_path);
    }
    if (loc->parsed())
      return cmd_ep_locus(cfg, over, range.empty() ? "0.1:2:0.1" : range,
                          out_path.empty() ? "locus.csv" : out_path, manifest_path);
    if (eig->parsed())
      return cmd_eigen(cfg, grid_spec, out_path.empty() ? "surface.csv" : out_path,
                       manifest_path);
    if (orc->parsed()) return cmd_oracle_check(cfg);
    std::cerr << "error: no command selected\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const UnsupportedOperationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalFailureError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}
