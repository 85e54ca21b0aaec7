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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "udog/closure.hpp"
#include "udog/io.hpp"
#include "udog/pulse.hpp"
#include "udog/su2.hpp"

namespace udog {

struct FitWindow {
  double min = 1e-4;
  double max = 3e-3;
  int points = 25;
};

/// Everything a CLI run depends on. Equal configs and inputs give
/// byte-identical outputs.
struct RunConfig {
  NumericSettings tolerances;
  SampleSpec grid{1, 16};
  SampleSpec curve_grid{32, 8};  // exported curves: denser boundaries
  FitWindow fit_window;
  std::string output_dir = ".";
  std::uint64_t seed = 0;
  int level5_starts = 200;
  double a2_weight = 0.3;
  int max_iterations = 200;
  double infidelity_floor = kInfidelityFloor;

  SolverOptions solver_options() const {
    SolverOptions opt;
    opt.seed = seed;
    opt.level5_starts = level5_starts;
    opt.a2_weight = a2_weight;
    opt.max_iterations = max_iterations;
    return opt;
  }

  void apply() const { numeric_settings() = tolerances; }
};

inline void validate(const RunConfig& cfg) {
  const auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string("config: ") + what + " must be > 0");
  };
  positive(cfg.tolerances.unitary_tol, "tolerances.unitary");
  positive(cfg.tolerances.hermitian_tol, "tolerances.hermitian");
  positive(cfg.tolerances.axis_tol, "tolerances.axis");
  positive(cfg.tolerances.pole_tol, "tolerances.pole");
  positive(cfg.infidelity_floor, "infidelity_floor");
  positive(cfg.fit_window.min, "fit_window.min");
  if (!(cfg.fit_window.max > cfg.fit_window.min)) throw std::invalid_argument("config: empty fit window");
  if (cfg.fit_window.points < 10) throw std::invalid_argument("config: fit window needs >= 10 points");
  if (cfg.level5_starts < 1) throw std::invalid_argument("config: level5_starts must be >= 1");
  validate(cfg.grid);
  validate(cfg.curve_grid);
}

inline RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  try {
    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      cfg.tolerances.unitary_tol = t.value("unitary", cfg.tolerances.unitary_tol);
      cfg.tolerances.hermitian_tol = t.value("hermitian", cfg.tolerances.hermitian_tol);
      cfg.tolerances.axis_tol = t.value("axis", cfg.tolerances.axis_tol);
      cfg.tolerances.pole_tol = t.value("pole", cfg.tolerances.pole_tol);
    }
    if (j.contains("grid")) {
      cfg.grid.substeps = j.at("grid").value("substeps", cfg.grid.substeps);
      cfg.grid.nodes = j.at("grid").value("nodes", cfg.grid.nodes);
    }
    if (j.contains("curve_grid")) {
      cfg.curve_grid.substeps = j.at("curve_grid").value("substeps", cfg.curve_grid.substeps);
      cfg.curve_grid.nodes = j.at("curve_grid").value("nodes", cfg.curve_grid.nodes);
    }
    if (j.contains("fit_window")) {
      const json& w = j.at("fit_window");
      cfg.fit_window.min = w.value("min", cfg.fit_window.min);
      cfg.fit_window.max = w.value("max", cfg.fit_window.max);
      cfg.fit_window.points = w.value("points", cfg.fit_window.points);
    }
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.level5_starts = j.value("level5_starts", cfg.level5_starts);
    cfg.a2_weight = j.value("a2_weight", cfg.a2_weight);
    cfg.max_iterations = j.value("max_iterations", cfg.max_iterations);
    cfg.infidelity_floor = j.value("infidelity_floor", cfg.infidelity_floor);
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  return config_from_json(parse_json(read_file(path), "malformed JSON in '" + path + "'"));
}

}  // namespace udog
