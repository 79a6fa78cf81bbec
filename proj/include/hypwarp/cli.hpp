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

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hypwarp/io.hpp"
#include "hypwarp/parallel.hpp"

// Verification commands behind the hypwarp executable. Each command returns
// its report; run() parses arguments and handles output and exit codes.
namespace hypwarp::cli {

using json = nlohmann::json;

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

struct CommandResult {
  int exit_code = kPass;
  json report;
  std::string csv;  // optional sweep
};

// ---------------------------------------------------------------- curvature

struct CurvatureConfig {
  double ell = 2.0;
  double t0 = 0.5;
  std::optional<double> M;  // unset: smallest M with derivative bound <= 0.01
  std::size_t t_intervals = 2000;
  std::size_t mix_intervals = 200;
  std::size_t fd_samples = 200;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool want_csv = false;
};

inline constexpr double kAutoDerivativeBound = 0.01;

inline warped::WarpedMetric metric_for(const CurvatureConfig& c) {
  const auto cutoff = c.M ? warped::CutoffSpec::smoothstep(c.t0, *c.M)
                          : warped::CutoffSpec::with_bound(c.t0, kAutoDerivativeBound);
  return warped::WarpedMetric(c.ell, cutoff);
}

/// Random chart-coordinate 2-planes at heights drawn equally from the
/// plateau, the transition and the tail out to 2M.
inline json fd_cross_check(const warped::WarpedMetric& m, std::size_t samples, std::uint64_t seed, double& worst) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0), coord(-1.0, 1.0);
  const double t0 = m.cutoff.t0, M = m.cutoff.M;
  json out = json::array();
  worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double u = unit(rng);
    double a = 0.0;
    switch (i % 3) {
      case 0: a = u * t0; break;
      case 1: a = t0 + u * (M - t0); break;
      default: a = M + u * M; break;
    }
    const double t = unit(rng) < 0.5 ? -a : a;
    warped::Point3 X, Y;
    do {
      X = warped::Point3(coord(rng), coord(rng), coord(rng));
      Y = warped::Point3(coord(rng), coord(rng), coord(rng));
    } while (X.cross(Y).norm() < 0.1);
    const double fd = warped::fd_riemann_oracle(m, t, X, Y);
    const double mix = warped::plane_mix(m, t, X, Y);
    const double cf = warped::sectional_curvature(m, {t, mix});
    const double rel = std::abs(fd - cf) / std::abs(cf);
    worst = std::max(worst, rel);
    out.push_back({{"t", t}, {"mix", mix}, {"closed_form", cf}, {"finite_difference", fd}, {"relative_error", rel}});
  }
  return out;
}

inline CommandResult cmd_curvature_verify(const CurvatureConfig& c) {
  const warped::WarpedMetric m = metric_for(c);
  const double M = m.cutoff.M;
  const auto rep = warped::verify_bound(m, -2.0 * M, 2.0 * M, c.t_intervals, c.mix_intervals, c.threads);
  double fd_worst = 0.0;
  const json samples = fd_cross_check(m, c.fd_samples, c.seed, fd_worst);
  const double tg = warped::totally_geodesic_check(m);

  json result = io::to_json(rep);
  result["samples"] = samples;
  result["fd_max_relative_error"] = fd_worst;
  result["totally_geodesic"] = tg;
  result["tail_curvature"] = warped::radial_curvature(m, 2.0 * M);
  const bool margin_ok = rep.violations == 0;
  const bool fd_ok = fd_worst <= warped::kFdTol;
  const bool tg_ok = tg <= kPointTol;
  result["checks"] = {{"margin", margin_ok},
                      {"plateau", rep.plateau_pass},
                      {"cutoff", rep.cutoff_pass},
                      {"fd_oracle", fd_ok},
                      {"totally_geodesic", tg_ok}};
  const bool pass = margin_ok && rep.plateau_pass && rep.cutoff_pass && fd_ok && tg_ok;

  json cfg = {{"ell", c.ell},        {"t0", c.t0},
              {"M", M},              {"auto_M", !c.M.has_value()},
              {"grid", {c.t_intervals, c.mix_intervals}},
              {"fd_samples", c.fd_samples},
              {"seed", c.seed}};
  CommandResult out{pass ? kPass : kFail, io::envelope("curvature-verify", cfg, result, pass), {}};
  if (c.want_csv) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "t,mix,K\n";
    for (std::size_t i = 0; i <= c.t_intervals; ++i) {
      const double t = (i * 2 == c.t_intervals)
                           ? 0.0
                           : -2.0 * M + 4.0 * M * static_cast<double>(i) / static_cast<double>(c.t_intervals);
      for (double mix : {0.0, 0.5, 1.0}) csv << t << ',' << mix << ',' << warped::sectional_curvature(m, {t, mix}) << '\n';
    }
    out.csv = csv.str();
  }
  return out;
}

// ------------------------------------------------------------------ develop

struct DevelopConfig {
  std::optional<std::string> cube_file;
  double eps = 0.1;
  std::size_t dim = 3;
  std::size_t seed_face = 0;
};

inline CommandResult cmd_develop(const DevelopConfig& c) {
  const HCube cube = c.cube_file ? io::cube_from_json(io::read_json_file(*c.cube_file))
                                 : io::guarded("box model", [&] { return box_model(c.dim, c.eps); });
  if (c.seed_face >= cube.num_faces()) throw io::InputError("seed face out of range");
  const auto r = develop_boundary(cube, c.seed_face, Isometry::identity(cube.dim()));
  const bool pass = r.holonomy_defect <= kDevTol && r.embedded();
  json cfg = {{"seed_face", c.seed_face}};
  if (c.cube_file) {
    cfg["cube_file"] = *c.cube_file;
  } else {
    cfg["eps"] = c.eps;
    cfg["dim"] = c.dim;
  }
  return {pass ? kPass : kFail, io::envelope("develop", cfg, io::to_json(r), pass), {}};
}

// ------------------------------------------------------------------ compare

struct CompareConfig {
  std::string polygon_file;
  double k = 4.0;
};

inline CommandResult cmd_compare(const CompareConfig& c) {
  using namespace comparison;
  const ComparisonPolygon p = io::polygon_from_json(io::read_json_file(c.polygon_file));
  const ModelSpace space = io::guarded("k", [&] { return ModelSpace(c.k); });
  const ChordProvider self = io::guarded("polygon", [&] { return realized_provider(p); });
  json result;
  bool pass = true;
  const auto self_verdict = polygon_chord_induction(p, self);
  result["self"] = io::to_json(self_verdict);
  pass = pass && self_verdict.all_equal();
  try {
    const auto kv = polygon_chord_induction(p, space_form_provider(p, space));
    result["space_form"] = io::to_json(kv);
  } catch (const ComparisonViolation& e) {
    result["space_form"] = {{"violation", e.what()}};
    pass = false;
  }
  json cfg = {{"polygon_file", c.polygon_file}, {"k", c.k}};
  return {pass ? kPass : kFail, io::envelope("compare", cfg, result, pass), {}};
}

// ----------------------------------------------------------------- boxmodel

struct BoxModelConfig {
  std::size_t dim = 3;
  double eps = 0.1;
  std::optional<double> compare_eps;
};

inline CommandResult cmd_boxmodel(const BoxModelConfig& c) {
  const HCube cube = io::guarded("box model", [&] { return box_model(c.dim, c.eps); });
  const double expected = -std::sinh(c.eps) * std::sinh(c.eps);
  double normal_err = 0.0;
  for (std::size_t a = 0; a < cube.num_faces(); ++a)
    for (std::size_t b = a + 1; b < cube.num_faces(); ++b)
      if (cube.faces_adjacent(a, b)) {
        normal_err =
            std::max(normal_err, std::abs(mink_inner(cube.face(a).normal(), cube.face(b).normal()) - expected));
      }
  const CubeShape shape = cube_shape(cube);
  const auto edges = shape.all_edge_lengths();
  const auto angles = shape.all_vertex_angles();
  const auto [emin, emax] = std::minmax_element(edges.begin(), edges.end());
  const auto [amin, amax] = std::minmax_element(angles.begin(), angles.end());
  json result = {{"eps_max", box_model_eps_max(c.dim)},
                 {"adjacent_normal_inner", expected},
                 {"adjacent_normal_error", normal_err},
                 {"edge_length", *emax},
                 {"edge_spread", *emax - *emin},
                 {"vertex_angle", *amax},
                 {"vertex_angle_spread", *amax - *amin},
                 {"cube", io::to_json(cube)}};
  if (c.compare_eps) {
    const HCube other = io::guarded("box model", [&] { return box_model(c.dim, *c.compare_eps); });
    result["delta_close"] = delta_close(cube, other);
  }
  const bool pass = normal_err <= 1e-12 && (*emax - *emin) <= 1e-9;
  json cfg = {{"dim", c.dim}, {"eps", c.eps}};
  if (c.compare_eps) cfg["compare_eps"] = *c.compare_eps;
  return {pass ? kPass : kFail, io::envelope("boxmodel", cfg, result, pass), {}};
}

// ------------------------------------------------------------------ density

struct DensityConfig {
  std::string samples_file;
  std::optional<std::string> probes_file;
  double radius = 1.0;
  std::size_t per_axis = 5;
  std::size_t directions = 20;
  std::uint64_t seed = 1;
  std::optional<double> max_eps;
};

inline CommandResult cmd_density(const DensityConfig& c) {
  const auto samples = io::samples_from_json(io::read_json_file(c.samples_file));
  if (samples.empty()) throw io::InputError("samples: empty list");
  const std::size_t n = samples.front().base.dim();
  const auto probes = c.probes_file ? io::samples_from_json(io::read_json_file(*c.probes_file))
                                    : probe_grid(n, c.radius, c.per_axis, c.directions, c.seed);
  const double eps = eps_density(samples, probes);
  const bool pass = !c.max_eps || eps <= *c.max_eps;
  json cfg = {{"samples_file", c.samples_file}, {"seed", c.seed}};
  if (c.probes_file) {
    cfg["probes_file"] = *c.probes_file;
  } else {
    cfg["probe_grid"] = {{"radius", c.radius}, {"per_axis", c.per_axis}, {"directions", c.directions}};
  }
  if (c.max_eps) cfg["max_eps"] = *c.max_eps;
  json result = {{"eps", eps}, {"samples", samples.size()}, {"probes", probes.size()}};
  return {pass ? kPass : kFail, io::envelope("density", cfg, result, pass), {}};
}

// ------------------------------------------------------------------ enclose

struct EncloseConfig {
  std::string arrangement_file;
  std::vector<double> gamma_origin;  // empty: basepoint
  std::vector<double> gamma_dir;     // empty: e_1
  double eps = 0.3;
  double delta = 0.1;
  std::optional<double> point;
  std::optional<std::pair<double, double>> chain;
  unsigned threads = 1;
};

inline Geodesic geodesic_from(const EncloseConfig& c, std::size_t n) {
  return io::guarded("geodesic", [&] {
    const HPoint o = c.gamma_origin.empty() ? HPoint::origin(n)
                                            : HPoint::from_vec(io::vec_from_json(c.gamma_origin, n + 1), 1e-8);
    const MinkowskiVec d = c.gamma_dir.empty() ? MinkowskiVec::basis(n + 1, 1) : io::vec_from_json(c.gamma_dir, n + 1);
    return Geodesic::through(HTangent::project(o, d).normalized());
  });
}

inline CommandResult cmd_enclose(const EncloseConfig& c) {
  if (c.point.has_value() == c.chain.has_value()) throw io::InputError("give exactly one of --point and --chain");
  const Arrangement arr = io::arrangement_from_json(io::read_json_file(c.arrangement_file));
  const Geodesic g = geodesic_from(c, arr.dim());
  const EnclosureParams p{c.eps, c.delta};
  json cfg = {{"arrangement_file", c.arrangement_file}, {"eps", c.eps}, {"delta", c.delta},
              {"gamma_origin", io::to_json(g.origin)}, {"gamma_dir", io::to_json(g.direction)}};
  json result;
  bool pass = false;
  if (c.point) {
    cfg["point"] = *c.point;
    const auto found = io::guarded("search", [&] { return enclosing_cube_search(arr, g, p, *c.point, {}, c.threads); });
    result["found"] = found.has_value();
    if (found) result["enclosing_cube"] = io::to_json(*found);
    pass = found.has_value();
  } else {
    cfg["chain"] = {c.chain->first, c.chain->second};
    const auto rep = io::guarded("chain", [&] { return chain_cover(arr, g, c.chain->first, c.chain->second, p, c.threads); });
    result = io::to_json(rep);
    if (rep.success) {
      const auto why = verify_chain(rep, g, c.chain->first, c.chain->second, p);
      result["recheck"] = why ? json(*why) : json("ok");
      pass = !why;
    }
  }
  return {pass ? kPass : kFail, io::envelope("enclose", cfg, result, pass), {}};
}

// ---------------------------------------------------------------- front end

namespace detail {

inline std::pair<std::size_t, std::size_t> parse_grid(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw CLI::ValidationError("--grid", "expected NxM");
  try {
    return {std::stoul(s.substr(0, x)), std::stoul(s.substr(x + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--grid", "expected NxM");
  }
}

}  // namespace detail

/// Parses arguments, runs one command, writes the report and returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Verification tools for hyperbolic geometry constructions"};
  app.require_subcommand(1);
  std::string json_path, csv_path;
  unsigned threads = default_threads();
  app.add_option("--json", json_path, "Write the JSON report here instead of stdout");
  app.add_option("--threads", threads, "Worker threads (default: HYPWARP_THREADS or 1)")->check(CLI::Range(1u, 256u));

  CurvatureConfig cc;
  std::string grid = "2000x200";
  bool auto_m = false;
  double m_value = 0.0;
  auto* cv = app.add_subcommand("curvature-verify", "Certify K <= -1 for the warped metric");
  cv->add_option("--ell", cc.ell, "Warping exponent")->check(CLI::PositiveNumber);
  cv->add_option("--t0", cc.t0, "Plateau half-width")->check(CLI::PositiveNumber);
  auto* m_opt = cv->add_option("--M", m_value, "Cutoff support end");
  cv->add_flag("--auto-M", auto_m, "Smallest M with cutoff derivatives <= 0.01 (default)");
  cv->add_option("--grid", grid, "Grid intervals, t x mix");
  cv->add_option("--fd-samples", cc.fd_samples, "Finite-difference cross-check samples");
  cv->add_option("--seed", cc.seed, "Seed for the sampled cross-check");
  cv->add_option("--csv", csv_path, "Write the (t, mix, K) sweep as CSV");
  m_opt->excludes(cv->get_option("--auto-M"));

  DevelopConfig dc;
  std::string cube_file;
  auto* dv = app.add_subcommand("develop", "Develop a hypercube boundary and measure holonomy");
  dv->add_option("--cube", cube_file, "Cube JSON file")->check(CLI::ExistingFile);
  dv->add_option("--eps", dc.eps, "Box model size when no file is given");
  dv->add_option("--dim", dc.dim, "Box model dimension when no file is given");
  dv->add_option("--seed-face", dc.seed_face, "Face whose chart is the identity");

  CompareConfig pc;
  auto* cp = app.add_subcommand("compare", "Chord comparison of a polygon against curvature -1");
  cp->add_option("--polygon", pc.polygon_file, "Polygon JSON file")->required()->check(CLI::ExistingFile);
  cp->add_option("--k", pc.k, "Comparison curvature -k, k >= 1");

  BoxModelConfig bc;
  double compare_eps = 0.0;
  auto* bx = app.add_subcommand("boxmodel", "Box model cube and its shape");
  bx->add_option("--dim", bc.dim, "Dimension");
  bx->add_option("--eps", bc.eps, "Half-width")->required();
  auto* ce_opt = bx->add_option("--compare-eps", compare_eps, "Also report delta_close to this box model");

  DensityConfig yc;
  std::string probes_file;
  double max_eps = 0.0;
  auto* dn = app.add_subcommand("density", "Density of tangent-plane samples");
  dn->add_option("--samples", yc.samples_file, "Samples JSON file")->required()->check(CLI::ExistingFile);
  dn->add_option("--probes", probes_file, "Probe samples JSON file (default: probe grid)")->check(CLI::ExistingFile);
  dn->add_option("--radius", yc.radius, "Probe grid radius");
  dn->add_option("--per-axis", yc.per_axis, "Probe grid points per axis");
  dn->add_option("--directions", yc.directions, "Probe directions per point");
  dn->add_option("--seed", yc.seed, "Seed for probe directions when n != 3");
  auto* me_opt = dn->add_option("--max-eps", max_eps, "Fail if the density exceeds this");

  EncloseConfig ec;
  double point = 0.0;
  std::vector<double> chain;
  auto* en = app.add_subcommand("enclose", "Enclosing cubes and interlocking chains along a geodesic");
  en->add_option("--arrangement", ec.arrangement_file, "Arrangement JSON file")->required()->check(CLI::ExistingFile);
  en->add_option("--gamma-origin", ec.gamma_origin, "Point of the geodesic (hyperboloid coordinates)");
  en->add_option("--gamma-dir", ec.gamma_dir, "Direction at that point");
  en->add_option("--eps", ec.eps, "Box model size");
  en->add_option("--delta", ec.delta, "Closeness tolerance");
  auto* pt_opt = en->add_option("--point", point, "Arc-length parameter to enclose");
  auto* ch_opt = en->add_option("--chain", chain, "Arc to cover: s0 s1")->expected(2);
  pt_opt->excludes(ch_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    CommandResult res;
    if (*cv) {
      const auto [nt, nm] = detail::parse_grid(grid);
      cc.t_intervals = nt;
      cc.mix_intervals = nm;
      if (m_opt->count() > 0) cc.M = m_value;
      cc.threads = threads;
      cc.want_csv = !csv_path.empty();
      res = io::guarded("curvature-verify", [&] {
        try {
          return cmd_curvature_verify(cc);
        } catch (const std::invalid_argument& e) {
          throw io::InputError(e.what());
        }
      });
    } else if (*dv) {
      if (!cube_file.empty()) dc.cube_file = cube_file;
      res = cmd_develop(dc);
    } else if (*cp) {
      res = cmd_compare(pc);
    } else if (*bx) {
      if (ce_opt->count() > 0) bc.compare_eps = compare_eps;
      res = cmd_boxmodel(bc);
    } else if (*dn) {
      if (!probes_file.empty()) yc.probes_file = probes_file;
      if (me_opt->count() > 0) yc.max_eps = max_eps;
      res = cmd_density(yc);
    } else if (*en) {
      if (pt_opt->count() > 0) ec.point = point;
      if (ch_opt->count() > 0) ec.chain = std::pair{chain[0], chain[1]};
      ec.threads = threads;
      res = cmd_enclose(ec);
    }
    const std::string text = res.report.dump(2) + "\n";
    if (json_path.empty()) {
      out << text;
    } else {
      io::write_text_file(json_path, text);
    }
    if (!csv_path.empty() && !res.csv.empty()) io::write_text_file(csv_path, res.csv);
    return res.exit_code;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const io::InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const GeometryError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace hypwarp::cli
