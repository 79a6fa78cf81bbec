// Copyright 2026 The hypwarp Authors.
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

#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hypwarp/comparison.hpp"
#include "hypwarp/developing.hpp"
#include "hypwarp/distribution.hpp"
#include "hypwarp/hyperboloid.hpp"
#include "hypwarp/region.hpp"
#include "hypwarp/warped.hpp"

// JSON reading and writing for the command-line tool and tests.
namespace hypwarp::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Malformed or inconsistent input file.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

inline json to_json(const MinkowskiVec& v) { return v.to_std(); }
inline json to_json(const HPoint& p) { return to_json(p.vec()); }

inline MinkowskiVec vec_from_json(const json& j, std::size_t ambient) {
  if (!j.is_array() || j.size() != ambient) {
    throw InputError("expected an array of " + std::to_string(ambient) + " numbers");
  }
  Vec v(static_cast<Eigen::Index>(ambient));
  for (std::size_t i = 0; i < ambient; ++i) {
    if (!j[i].is_number()) throw InputError("expected a number");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return MinkowskiVec(v);
}

inline std::size_t dim_from_json(const json& j) {
  if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<long>() < 2) {
    throw InputError("missing or invalid dimension \"n\"");
  }
  return j["n"].get<std::size_t>();
}

/// Runs f, turning geometry errors on input data into InputError.
template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const GeometryError& e) {
    throw InputError(std::string(what) + ": " + e.what());
  } catch (const json::exception& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

// {"n": 3, "faces": [[u0..u3] x 2n], "vertices": [[x0..x3] x 2^n] (optional)}
inline json to_json(const HCube& c) {
  json faces = json::array(), verts = json::array();
  for (const auto& f : c.faces()) faces.push_back(to_json(f.normal()));
  for (const auto& v : c.vertices()) verts.push_back(to_json(v));
  return {{"n", c.dim()}, {"faces", faces}, {"vertices", verts}};
}

inline HCube cube_from_json(const json& j) {
  return guarded("cube", [&] {
    const std::size_t n = dim_from_json(j);
    if (!j.contains("faces") || !j["faces"].is_array()) throw InputError("cube: missing \"faces\"");
    std::vector<Hyperplane> faces;
    for (const auto& f : j["faces"]) faces.push_back(Hyperplane::from_spacelike(vec_from_json(f, n + 1)));
    if (j.contains("vertices") && !j["vertices"].empty()) {
      std::vector<HPoint> verts;
      for (const auto& v : j["vertices"]) verts.push_back(HPoint::from_vec(vec_from_json(v, n + 1), 1e-8));
      return HCube::from_parts(n, std::move(faces), std::move(verts));
    }
    return HCube::from_faces(n, std::move(faces));
  });
}

// {"sides": [...], "angles": [...]}
inline json to_json(const comparison::ComparisonPolygon& p) { return {{"sides", p.sides}, {"angles", p.angles}}; }

inline comparison::ComparisonPolygon polygon_from_json(const json& j) {
  return guarded("polygon", [&] {
    if (!j.contains("sides") || !j.contains("angles")) throw InputError("polygon: need \"sides\" and \"angles\"");
    comparison::ComparisonPolygon p{j["sides"].get<std::vector<double>>(), j["angles"].get<std::vector<double>>()};
    p.validate();
    return p;
  });
}

// {"n": 3, "normals": [[u0..u3], ...]}
inline json to_json(const Arrangement& a) {
  json normals = json::array();
  for (const auto& h : a.planes()) normals.push_back(to_json(h.normal()));
  return {{"n", a.dim()}, {"normals", normals}};
}

inline Arrangement arrangement_from_json(const json& j) {
  return guarded("arrangement", [&] {
    const std::size_t n = dim_from_json(j);
    if (!j.contains("normals") || !j["normals"].is_array()) throw InputError("arrangement: missing \"normals\"");
    std::vector<Hyperplane> hs;
    for (const auto& u : j["normals"]) hs.push_back(Hyperplane::from_spacelike(vec_from_json(u, n + 1)));
    return Arrangement(std::move(hs));
  });
}

// {"n": 3, "samples": [{"base": [...], "frame": [[...], [...]]}, ...]}
inline json to_json(std::span<const PlaneSample> samples) {
  json arr = json::array();
  for (const auto& s : samples) {
    json frame = json::array();
    for (const auto& t : s.frame) frame.push_back(to_json(t.dir()));
    arr.push_back({{"base", to_json(s.base)}, {"frame", frame}});
  }
  return {{"n", samples.empty() ? 0 : samples.front().base.dim()}, {"samples", arr}};
}

inline std::vector<PlaneSample> samples_from_json(const json& j) {
  return guarded("samples", [&] {
    const std::size_t n = dim_from_json(j);
    if (!j.contains("samples") || !j["samples"].is_array()) throw InputError("samples: missing \"samples\"");
    std::vector<PlaneSample> out;
    for (const auto& s : j["samples"]) {
      const HPoint base = HPoint::from_vec(vec_from_json(s.at("base"), n + 1), 1e-8);
      std::vector<HTangent> frame;
      for (const auto& t : s.at("frame")) frame.emplace_back(base, vec_from_json(t, n + 1), 1e-8);
      out.emplace_back(base, std::move(frame));
    }
    return out;
  });
}

inline json to_json(const warped::GridCell& c) {
  return {{"t", c.t}, {"mix", c.mix}, {"K", c.K}, {"margin", c.margin}};
}

inline json to_json(const warped::CertificateReport& r) {
  json worst = json::array();
  for (const auto& c : r.worst) worst.push_back(to_json(c));
  json out = {
      {"params", {{"ell", r.ell}, {"t0", r.t0}, {"M", r.M}, {"derivative_bound", r.derivative_bound}}},
      {"grid", {{"t_lo", r.t_lo}, {"t_hi", r.t_hi}, {"t_intervals", r.t_intervals}, {"mix_intervals", r.mix_intervals}}},
      {"margin_min", r.worst.empty() ? 0.0 : r.worst.front().margin},
      {"argmin", r.worst.empty() ? json() : json{{"t", r.worst.front().t}, {"mix", r.worst.front().mix}}},
      {"violations", r.violations},
      {"plateau_pass", r.plateau_pass},
      {"cutoff_pass", r.cutoff_pass},
      {"worst_cells", worst},
  };
  if (r.plateau_max > -std::numeric_limits<double>::infinity()) out["plateau_max"] = r.plateau_max;
  if (r.cutoff_min < std::numeric_limits<double>::infinity()) out["cutoff_min"] = r.cutoff_min;
  return out;
}

inline json to_json(const DevelopmentResult& r) {
  return {{"holonomy_defect", r.holonomy_defect},
          {"opposite_face_gap", r.opposite_face_gap},
          {"face_distortion", r.face_distortion},
          {"paths_checked", r.paths_checked},
          {"embedded", r.embedded()}};
}

inline json to_json(const comparison::ComparisonVerdict& v) {
  json chords = json::array();
  for (const auto& c : v.chords) {
    chords.push_back({{"i", c.i}, {"j", c.j}, {"span", c.span}, {"model", c.model_length}, {"test", c.test_length},
                      {"equality", c.equality}});
  }
  return {{"chords", chords},
          {"all_equal", v.all_equal()},
          {"first_strict", v.first_strict ? json(*v.first_strict) : json()}};
}

inline json to_json(const EnclosingCube& c) {
  return {{"cube", to_json(c.cube)},
          {"planes", c.planes},
          {"s_bottom", c.s_bottom},
          {"s_top", c.s_top},
          {"angle_bottom", c.angle_bottom},
          {"angle_top", c.angle_top},
          {"shape_delta", c.shape_delta}};
}

inline json to_json(const ChainReport& r) {
  json cubes = json::array(), coverage = json::array();
  for (const auto& c : r.cubes) {
    cubes.push_back(to_json(c));
    coverage.push_back({c.s_bottom, c.s_top});
  }
  json out = {{"success", r.success}, {"cubes", cubes}, {"interlocking", r.interlocked}, {"coverage", coverage}};
  if (r.failure_param) out["failure"] = {{"param", *r.failure_param}, {"reason", r.failure_reason}};
  return out;
}

/// Report envelope shared by all commands.
inline json envelope(const std::string& command, json config, json result, bool pass) {
  return {{"schema_version", kSchemaVersion},
          {"metadata", {{"tool", "hypwarp"}, {"command", command}}},
          {"config", std::move(config)},
          {"result", std::move(result)},
          {"pass", pass}};
}

}  // namespace hypwarp::io
