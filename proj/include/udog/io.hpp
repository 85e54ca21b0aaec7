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

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "udog/error_geometry.hpp"
#include "udog/pulse.hpp"
#include "udog/robustness.hpp"

namespace udog {

using json = nlohmann::json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json shape_to_json(const PulseShape& shape) {
  if (shape.tag() != ShapeTag::sampled_table) return to_string(shape.tag());
  json pts = json::array();
  for (const auto& [u, a] : shape.table()) pts.push_back({u, a});
  return json{{"sampled-table", pts}};
}

inline PulseShape shape_from_json(const json& j) {
  if (j.is_string()) {
    const std::string tag = j.get<std::string>();
    if (tag == "square") return PulseShape::square();
    if (tag == "sine-squared") return PulseShape::sine_squared();
    throw IoError("unknown pulse shape '" + tag + "'");
  }
  if (j.is_object() && j.contains("sampled-table")) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : j.at("sampled-table")) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    return PulseShape::sampled_table(std::move(pts));
  }
  throw IoError("malformed pulse shape");
}

inline json to_json(const PulseSequence& seq) {
  json segs = json::array();
  for (const auto& s : seq.segments)
    segs.push_back({{"area", s.area}, {"phase", s.phase}, {"duration", s.duration}, {"shape", shape_to_json(s.shape)}});
  return {{"scheme", seq.scheme},
          {"target", {{"theta0", seq.target.theta0}, {"phi0", seq.target.phi0}, {"gamma_g", seq.target.gamma_g}}},
          {"segments", segs}};
}

inline PulseSequence sequence_from_json(const json& j) {
  try {
    PulseSequence seq;
    seq.scheme = j.at("scheme").get<std::string>();
    const json& t = j.at("target");
    seq.target = {t.at("theta0").get<double>(), t.at("phi0").get<double>(), t.at("gamma_g").get<double>()};
    for (const auto& s : j.at("segments")) {
      seq.segments.push_back({s.at("area").get<double>(), s.at("phase").get<double>(),
                              s.at("duration").get<double>(), shape_from_json(s.at("shape"))});
    }
    validate(seq);
    return seq;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed pulse sequence: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("invalid pulse sequence: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(what + ": " + e.what());
  }
}

inline PulseSequence load_sequence(const std::string& path) {
  return sequence_from_json(parse_json(read_file(path), "malformed JSON in '" + path + "'"));
}

inline void save_sequence(const std::string& path, const PulseSequence& seq) {
  write_file(path, to_json(seq).dump(2) + "\n");
}

/// Shortest round-trip decimal form.
inline std::string fmt_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline std::string curve_csv(const ErrorCurve& curve) {
  std::string out = "t,x,y,z\n";
  for (std::size_t i = 0; i < curve.t.size(); ++i) {
    out += fmt_double(curve.t[i]) + "," + fmt_double(curve.r[i].x) + "," + fmt_double(curve.r[i].y) + "," +
           fmt_double(curve.r[i].z) + "\n";
  }
  return out;
}

inline json curve_summary(const ErrorCurve& curve) {
  const Vec3 e = curve.endpoint();
  return {{"channel", to_string(curve.channel)}, {"endpoint", {e.x, e.y, e.z}}, {"distance_bloch", curve.distance()}};
}

inline std::string sweep_csv(const SweepFit& fit) {
  std::string out = "beta,infidelity\n";
  for (std::size_t i = 0; i < fit.beta.size(); ++i)
    out += fmt_double(fit.beta[i]) + "," + fmt_double(fit.infidelity[i]) + "\n";
  return out;
}

inline SweepFit sweep_from_csv(const std::string& text, Channel channel) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("beta,infidelity", 0) != 0)
    throw IoError("sweep CSV must start with header 'beta,infidelity'");
  SweepFit fit;
  fit.channel = channel;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("malformed sweep CSV row '" + line + "'");
    try {
      fit.beta.push_back(std::stod(line.substr(0, comma)));
      fit.infidelity.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw IoError("malformed sweep CSV row '" + line + "'");
    }
  }
  return fit;
}

inline json fit_json(const SweepFit& fit) {
  double lo = 0.0, hi = 0.0;
  if (!fit.beta.empty()) {
    lo = *std::min_element(fit.beta.begin(), fit.beta.end());
    hi = *std::max_element(fit.beta.begin(), fit.beta.end());
  }
  return {{"channel", to_string(fit.channel)},
          {"slope", fit.slope},
          {"coefficient", fit.coefficient},
          {"r_squared", fit.r_squared},
          {"window", {lo, hi}}};
}

inline std::string filter_csv(const FilterFunction& ff) {
  std::string out = "omega,F\n";
  for (std::size_t i = 0; i < ff.omega.size(); ++i) out += fmt_double(ff.omega[i]) + "," + fmt_double(ff.value[i]) + "\n";
  return out;
}

}  // namespace udog
