// Copyright 2026 The UDOG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// udog: synthesize, solve and analyze doubly geometric composite pulses.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "udog/udog.hpp"

namespace {

using namespace udog;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitAssert = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(what + ": '" + item + "' is not a number");
    }
  }
  return out;
}

std::vector<int> parse_parity(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_list(text, "--parity")) {
    if (v != 0.0 && v != 1.0) throw UsageError("--parity entries must be 0 or 1");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

PulseShape parse_shape(const std::string& s) {
  if (s == "square") return PulseShape::square();
  if (s == "sine-squared") return PulseShape::sine_squared();
  throw UsageError("unknown --shape '" + s + "' (square, sine-squared)");
}

std::vector<Channel> parse_channels(const std::string& s) {
  if (s == "both") return {Channel::rabi, Channel::detuning};
  std::vector<Channel> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_channel(item));
  if (out.empty()) throw UsageError("no channel given");
  return out;
}

std::string in_dir(const RunConfig& cfg, const std::string& explicit_path, const std::string& fallback) {
  if (!explicit_path.empty()) return explicit_path;
  return (std::filesystem::path(cfg.output_dir) / fallback).string();
}

// --gate / --target pair shared by synth and solve
struct TargetArgs {
  std::string gate;
  std::string triple;

  void attach(CLI::App* app) {
    auto* g = app->add_option("--gate", gate, "named gate: S, T, Z, X, H");
    auto* t = app->add_option("--target", triple, "theta0,phi0,gamma_g in radians");
    g->excludes(t);
  }
  GateTarget resolve() const {
    if (!gate.empty()) {
      if (auto t = named_gate(gate)) return *t;
      throw UsageError("unknown gate '" + gate + "'");
    }
    if (triple.empty()) throw UsageError("one of --gate or --target is required");
    const auto v = parse_list(triple, "--target");
    if (v.size() != 3) throw UsageError("--target takes theta0,phi0,gamma_g");
    if (v[0] < 0.0 || v[0] > kPi) throw UsageError("--target theta0 must lie in [0, pi]");
    return {v[0], v[1], v[2]};
  }
  std::string label() const { return gate.empty() ? "target" : gate; }
};

void print_candidate_report(const XiSolution& sol) {
  std::fprintf(stderr, "no start converged; best candidate xi =");
  for (double x : sol.xi) std::fprintf(stderr, " %s", fmt_double(x).c_str());
  std::fprintf(stderr, "  residual_norm = %s\n", fmt_double(sol.residual_norm).c_str());
}

SolverOptions solver_options(const RunConfig& cfg, const std::string& parity) {
  SolverOptions opt = cfg.solver_options();
  if (!parity.empty()) opt.level5_parity = parse_parity(parity);
  if (opt.level5_parity.size() != 5) throw UsageError("--parity needs 5 entries");
  return opt;
}

// ---- synth ----

struct SynthArgs {
  TargetArgs target;
  int level = 3;
  std::string xi = "solve";
  std::string parity;
  std::string shape = "square";
  std::string out;
};

int cmd_synth(const SynthArgs& a, const RunConfig& cfg) {
  const GateTarget target = a.target.resolve();
  const PulseShape shape = parse_shape(a.shape);
  LevelSpec spec;
  if (a.level == 1) {
    spec = LevelSpec::level1();
  } else if (a.level == 3 || a.level == 5) {
    const SolverOptions opt = solver_options(cfg, a.parity);
    std::vector<double> free;
    if (a.xi == "solve") {
      const XiSolution sol = solve_xi(target, a.level, opt);
      if (!sol.converged) {
        print_candidate_report(sol);
        return kExitNoConvergence;
      }
      free = sol.xi;
      std::printf("solved xi:");
      for (double x : free) std::printf(" %s", fmt_double(x).c_str());
      std::printf("  (residual_norm %.3g, %zu distinct solutions)\n", sol.residual_norm, sol.candidates.size());
    } else {
      free = parse_list(a.xi, "--xi");
    }
    spec = make_level(a.level, free, opt);
  } else {
    throw UsageError("--level must be 1, 3 or 5");
  }
  const PulseSequence seq = build_geometric(target, spec, shape);
  const std::string path = in_dir(cfg, a.out, a.target.label() + "_" + seq.scheme + ".json");
  save_sequence(path, seq);

  std::printf("scheme %s, %zu segments, total area %.10g, duration %.10g\n", seq.scheme.c_str(),
              seq.segments.size(), seq.total_area(), seq.total_duration());
  std::printf("%4s %14s %14s %14s  %s\n", "#", "area", "phase", "duration", "shape");
  for (std::size_t i = 0; i < seq.segments.size(); ++i) {
    const Segment& s = seq.segments[i];
    std::printf("%4zu %14.10f %14.10f %14.10f  %s\n", i, s.area, s.phase, s.duration,
                to_string(s.shape.tag()).c_str());
  }
  std::printf("wrote %s\n", path.c_str());
  return kExitOk;
}

// ---- solve ----

struct SolveArgs {
  TargetArgs target;
  int level = 3;
  std::string parity;
  std::string out;
};

int cmd_solve(const SolveArgs& a, const RunConfig& cfg) {
  const GateTarget target = a.target.resolve();
  if (a.level != 3 && a.level != 5) throw UsageError("solve supports --level 3 or 5");
  const SolverOptions opt = solver_options(cfg, a.parity);
  const XiSolution sol = solve_xi(target, a.level, opt);
  const PulseSequence seq = build_geometric(target, sol.level_spec(opt));
  const json j = {{"level", sol.level},
                  {"xi", sol.xi},
                  {"residual_norm", sol.residual_norm},
                  {"converged", sol.converged},
                  {"distances",
                   {{"rabi", error_curve_direct(seq, Channel::rabi, cfg.grid).distance()},
                    {"detuning", error_curve_direct(seq, Channel::detuning, cfg.grid).distance()}}}};
  const std::string text = j.dump(2) + "\n";
  if (!a.out.empty()) write_file(a.out, text);
  std::fputs(text.c_str(), stdout);
  if (!sol.converged) {
    print_candidate_report(sol);
    return kExitNoConvergence;
  }
  return kExitOk;
}

// ---- curve ----

struct CurveArgs {
  std::string in;
  std::string channel = "detuning";
  std::string method = "direct";
  std::string frame = "dressed";
  std::string out;
  std::string summary;
};

int cmd_curve(const CurveArgs& a, const RunConfig& cfg) {
  const PulseSequence seq = load_sequence(a.in);
  const Channel ch = parse_channel(a.channel);
  if (a.frame != "dressed" && a.frame != "lab") throw UsageError("--frame must be dressed or lab");
  const Mat2 w = seq.target.dressed_frame();
  ErrorCurve curve;
  if (a.method == "direct") {
    curve = a.frame == "dressed" ? error_curve_dressed(seq, ch, cfg.curve_grid)
                                 : error_curve_direct(seq, ch, cfg.curve_grid);
  } else if (a.method == "path") {
    curve = error_curve_path(bloch_path(propagate(seq, 1.0, 0.0, cfg.curve_grid), w), seq, ch);
    if (a.frame == "lab")
      for (auto& r : curve.r) r = in_frame(r, w.adjoint());
  } else {
    throw UsageError("--method must be direct or path");
  }
  const std::string path = in_dir(cfg, a.out, "curve_" + a.channel + ".csv");
  write_file(path, curve_csv(curve));
  const std::string text = curve_summary(curve).dump(2) + "\n";
  if (!a.summary.empty()) write_file(a.summary, text);
  std::fputs(text.c_str(), stdout);
  return kExitOk;
}

// ---- sweep / fit ----

struct SweepArgs {
  std::string in;
  std::string channel = "detuning";
  std::optional<double> min, max;
  std::optional<int> points;
  std::string out;
};

int cmd_sweep(const SweepArgs& a, const RunConfig& cfg) {
  const PulseSequence seq = load_sequence(a.in);
  const Channel ch = parse_channel(a.channel);
  const auto grid = log_grid(a.min.value_or(cfg.fit_window.min), a.max.value_or(cfg.fit_window.max),
                             a.points.value_or(cfg.fit_window.points));
  const SweepFit fit = sweep_and_fit(seq, ch, grid, cfg.infidelity_floor);
  const std::string path = in_dir(cfg, a.out, "sweep_" + a.channel + ".csv");
  write_file(path, sweep_csv(fit));
  std::fputs((fit_json(fit).dump(2) + "\n").c_str(), stdout);
  return kExitOk;
}

struct FitArgs {
  std::string in;
  std::string channel = "detuning";
  std::string out;
};

int cmd_fit(const FitArgs& a, const RunConfig& cfg) {
  SweepFit fit = sweep_from_csv(read_file(a.in), parse_channel(a.channel));
  fit_power_law(fit, cfg.infidelity_floor);
  const std::string text = fit_json(fit).dump(2) + "\n";
  if (!a.out.empty()) write_file(a.out, text);
  std::fputs(text.c_str(), stdout);
  return kExitOk;
}

// ---- filter ----

struct FilterArgs {
  std::string in;
  std::string channel = "detuning";
  double omega_max = 10.0;
  int points = 201;
  std::string out;
};

int cmd_filter(const FilterArgs& a, const RunConfig& cfg) {
  const PulseSequence seq = load_sequence(a.in);
  if (a.points < 2 || !(a.omega_max > 0.0)) throw UsageError("filter needs --points >= 2 and --omega-max > 0");
  std::vector<double> omegas(static_cast<std::size_t>(a.points));
  for (int i = 0; i < a.points; ++i) omegas[static_cast<std::size_t>(i)] = a.omega_max * i / (a.points - 1);
  SampleSpec spec = cfg.grid;
  const FilterFunction ff = filter_function(seq, parse_channel(a.channel), omegas, spec);
  const std::string path = in_dir(cfg, a.out, "filter_" + a.channel + ".csv");
  write_file(path, filter_csv(ff));
  std::printf("F(0) = %s, wrote %s\n", fmt_double(ff.value.front()).c_str(), path.c_str());
  return kExitOk;
}

// ---- report ----

struct ReportArgs {
  std::vector<std::string> files;
  std::string channels = "both";
  bool assert_mode = false;
  std::string out;
};

struct Expectation {
  double slope;
  double slope_tol;
  bool closed;  // both error distances vanish
};

std::optional<Expectation> expectation_for(const std::string& scheme) {
  if (scheme == "ngqc-level1") return Expectation{2.0, 0.05, false};
  if (scheme == "udog-level3") return Expectation{4.0, 0.05, true};
  if (scheme == "udog-level5") return Expectation{6.0, 0.1, true};
  return std::nullopt;
}

// The X gate is exp(i pi/2 sx) up to global phase: axis +x, gamma_g = pi/2.
json x_gate_section() {
  const GateTarget x = *named_gate("X");
  const ResidualVector r = closure_conditions_level3(x, -5.0 / 3.0, 5.0 / 3.0);
  json res = json::object();
  for (std::size_t i = 0; i < r.size(); ++i) res[r.names[i]] = r.values[i];
  return {{"target", {{"theta0", x.theta0}, {"phi0", x.phi0}, {"gamma_g", x.gamma_g}}},
          {"xi", {-5.0 / 3.0, 5.0 / 3.0}},
          {"residuals", res},
          {"residual_norm", r.norm()},
          {"closes", r.norm() < 1e-10}};
}

int cmd_report(const ReportArgs& a, const RunConfig& cfg) {
  if (a.files.empty()) throw UsageError("report needs at least one sequence file");
  const auto channels = parse_channels(a.channels);
  std::vector<PulseSequence> seqs;
  for (const auto& f : a.files) seqs.push_back(load_sequence(f));
  const auto grid = log_grid(cfg.fit_window.min, cfg.fit_window.max, cfg.fit_window.points);

  json entries = json::array();
  json checks = json::array();
  bool all_ok = true;
  std::printf("%-24s %-16s %-9s %14s %9s %14s %14s\n", "file", "scheme", "channel", "distance", "slope",
              "coefficient", "F(0)");
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const PulseSequence& seq = seqs[i];
    for (Channel ch : channels) {
      const double dist = error_curve_direct(seq, ch, cfg.grid).distance();
      const double f0 = filter_function(seq, ch, {0.0}, cfg.grid).value.front();
      json e = {{"file", a.files[i]}, {"scheme", seq.scheme}, {"channel", to_string(ch)},
                {"distance_bloch", dist}, {"F0", f0}};
      std::optional<SweepFit> fit;
      try {
        fit = sweep_and_fit(seq, ch, grid, cfg.infidelity_floor);
        e["slope"] = fit->slope;
        e["order"] = fit->order;
        e["coefficient"] = fit->coefficient;
        e["r_squared"] = fit->r_squared;
      } catch (const FitUndefined&) {
        e["slope"] = nullptr;
        e["coefficient"] = nullptr;
      }
      std::printf("%-24s %-16s %-9s %14.6e %9s %14s %14.6e\n",
                  std::filesystem::path(a.files[i]).filename().string().c_str(), seq.scheme.c_str(),
                  to_string(ch).c_str(), dist, fit ? fmt_double(std::round(fit->slope * 1e4) / 1e4).c_str() : "n/a",
                  fit ? fmt_double(std::round(fit->coefficient * 1e6) / 1e6).c_str() : "n/a", f0);
      if (a.assert_mode) {
        if (const auto ex = expectation_for(seq.scheme)) {
          const bool slope_ok = fit && std::abs(fit->slope - ex->slope) <= ex->slope_tol;
          const bool dist_ok = !ex->closed || dist < 1e-7;
          checks.push_back({{"file", a.files[i]}, {"channel", to_string(ch)}, {"slope_ok", slope_ok},
                            {"distance_ok", dist_ok}});
          all_ok = all_ok && slope_ok && dist_ok;
        }
      }
      entries.push_back(std::move(e));
    }
  }
  const json xg = x_gate_section();
  std::printf("\nX gate triple (theta0, phi0, gamma_g) = (pi/2, 0, pi/2); level-3 xi = (-5/3, 5/3) "
              "residual_norm = %.6g (%s)\n",
              xg.at("residual_norm").get<double>(), xg.at("closes").get<bool>() ? "closes" : "does not close");

  json report = {{"entries", entries}, {"x_gate", xg}};
  if (a.assert_mode) {
    report["checks"] = checks;
    report["passed"] = all_ok;
  }
  const std::string path = in_dir(cfg, a.out, "report.json");
  write_file(path, report.dump(2) + "\n");
  std::printf("wrote %s\n", path.c_str());
  if (a.assert_mode && !all_ok) {
    std::fprintf(stderr, "report --assert: expectation check failed\n");
    return kExitAssert;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"udog: doubly geometric composite pulse toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "RunConfig JSON file");

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "build a pulse sequence and write it as JSON");
  synth.target.attach(s);
  s->add_option("--level", synth.level, "1, 3 or 5");
  s->add_option("--xi", synth.xi, "'solve' or comma-separated free parameters");
  s->add_option("--parity", synth.parity, "level-5 parity pattern, e.g. 0,1,0,0,1");
  s->add_option("--shape", synth.shape, "square or sine-squared");
  s->add_option("--out", synth.out, "output file");

  SolveArgs solve;
  auto* so = app.add_subcommand("solve", "solve the closure conditions for the free phases");
  solve.target.attach(so);
  so->add_option("--level", solve.level, "3 or 5");
  so->add_option("--parity", solve.parity, "level-5 parity pattern");
  so->add_option("--out", solve.out, "also write the JSON here");

  CurveArgs curve;
  auto* c = app.add_subcommand("curve", "export the error curve r(t)");
  c->add_option("--in", curve.in, "sequence JSON")->required();
  c->add_option("--channel", curve.channel, "rabi or detuning");
  c->add_option("--method", curve.method, "direct or path");
  c->add_option("--frame", curve.frame, "dressed or lab");
  c->add_option("--out", curve.out, "CSV file");
  c->add_option("--summary", curve.summary, "summary JSON file");

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "infidelity sweep over the error strength");
  sw->add_option("--in", sweep.in, "sequence JSON")->required();
  sw->add_option("--channel", sweep.channel, "rabi or detuning");
  sw->add_option("--min", sweep.min, "smallest beta");
  sw->add_option("--max", sweep.max, "largest beta");
  sw->add_option("--points", sweep.points, "grid points");
  sw->add_option("--out", sweep.out, "CSV file");

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "power-law fit of a sweep CSV");
  f->add_option("--in", fit.in, "sweep CSV")->required();
  f->add_option("--channel", fit.channel, "channel label");
  f->add_option("--out", fit.out, "JSON file");

  FilterArgs filter;
  auto* fl = app.add_subcommand("filter", "first-order filter function F(omega)");
  fl->add_option("--in", filter.in, "sequence JSON")->required();
  fl->add_option("--channel", filter.channel, "rabi or detuning");
  fl->add_option("--omega-max", filter.omega_max, "largest frequency");
  fl->add_option("--points", filter.points, "grid points from 0");
  fl->add_option("--out", filter.out, "CSV file");

  ReportArgs report;
  auto* r = app.add_subcommand("report", "compare sequences across channels");
  r->add_option("files", report.files, "sequence JSON files");
  r->add_option("--channels", report.channels, "both, rabi, detuning or a comma list");
  r->add_flag("--assert", report.assert_mode, "exit 4 unless every expectation holds");
  r->add_option("--out", report.out, "report JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    cfg.apply();
    if (s->parsed()) return cmd_synth(synth, cfg);
    if (so->parsed()) return cmd_solve(solve, cfg);
    if (c->parsed()) return cmd_curve(curve, cfg);
    if (sw->parsed()) return cmd_sweep(sweep, cfg);
    if (f->parsed()) return cmd_fit(fit, cfg);
    if (fl->parsed()) return cmd_filter(filter, cfg);
    if (r->parsed()) return cmd_report(report, cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "udog: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
