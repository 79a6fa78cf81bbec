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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hypwarp/hyperboloid.hpp"
#include "hypwarp/region.hpp"

/**
 * Developing the boundary of a hypercube into H^n.
 *
 * Each face gets a chart: an isometry of H^n placing the face's ambient data
 * in the target. Charts are propagated across ridges using only the ridge
 * data and the dihedral angle measured in the source cube. A cube whose faces
 * are genuinely totally geodesic develops with trivial holonomy: every closed
 * path in the face-adjacency graph returns the chart it started from.
 */
namespace hypwarp {

/// Development tolerance.
inline constexpr double kDevTol = 1e-8;

struct DevelopedChart {
  std::size_t source_face;
  Isometry placement;
};

struct DevelopmentResult {
  std::vector<DevelopedChart> charts;  // indexed by face
  double holonomy_defect = 0.0;
  std::vector<double> opposite_face_gap;  // per axis
  double face_distortion = 0.0;           // sampled distance error on faces
  std::size_t paths_checked = 0;

  bool embedded() const {
    return std::all_of(opposite_face_gap.begin(), opposite_face_gap.end(), [](double g) { return g > 0.0; });
  }
};

namespace detail {

/// Deterministic interior sample points of a face or ridge: normalized
/// convex combinations of its vertices.
inline std::vector<HPoint> sample_points(const HCube& c, std::span<const std::size_t> verts, std::size_t count) {
  std::vector<HPoint> out;
  for (std::size_t k = 0; k < count; ++k) {
    MinkowskiVec s = MinkowskiVec::zeros(c.dim() + 1);
    for (std::size_t i = 0; i < verts.size(); ++i) {
      // Weights from a low-discrepancy sequence; always strictly positive.
      const double w = 0.25 + std::fmod(0.6180339887498949 * static_cast<double>((k + 1) * (i + 3)), 1.0);
      s += w * c.vertex(verts[i]).vec();
    }
    out.push_back(HPoint::normalize_timelike(s));
  }
  return out;
}

/// Orthonormal basis of the ridge tangent space at r (r on both faces).
inline std::vector<HTangent> ridge_basis(const HCube& c, std::size_t a, std::size_t b, const HPoint& r) {
  std::vector<MinkowskiVec> vs = {c.face(a).normal(), c.face(b).normal()};
  const auto normals = orthonormalize(r, vs);
  if (normals.size() != 2) throw GeometryError("ridge: faces are parallel at the ridge");
  auto frame = complete_frame(r, normals);
  return {frame.begin() + 2, frame.end()};
}

/// Unit tangent at r lying in face `in`, orthogonal to the ridge with face
/// `other`, pointing into face `in`.
inline HTangent in_face_direction(const HCube& c, std::size_t in, std::size_t other, const HPoint& r) {
  const MinkowskiVec& ui = c.face(in).normal();
  const MinkowskiVec& uo = c.face(other).normal();
  const MinkowskiVec w = uo - mink_inner(uo, ui) * ui;
  // Moving into face `in` decreases <x, u_other>.
  return HTangent::project(r, -1.0 * w).normalized();
}

/// Same direction, measured from face geometry rather than normals: the part
/// of log_r(face centroid) orthogonal to the ridge.
inline HTangent sampled_in_face_direction(const HCube& c, std::size_t in, std::span<const HTangent> ridge,
                                          const HPoint& r) {
  MinkowskiVec w = log_map(r, c.face_centroid(in)).dir();
  for (const auto& t : ridge) w -= mink_inner(w, t.dir()) * t.dir();
  return HTangent::project(r, w).normalized();
}

inline double max_vertex_displacement(const HCube& c, std::size_t face, const Isometry& p, const Isometry& q) {
  double d = 0.0;
  for (auto m : c.face_vertices(face)) d = std::max(d, dist(p.apply(c.vertex(m)), q.apply(c.vertex(m))));
  return d;
}

}  // namespace detail

/// Interior dihedral angle between adjacent faces, measured at 5 sampled
/// ridge points from the face geometry. Throws if the faces are not adjacent
/// or the angle varies along the ridge by more than kDevTol.
inline double dihedral_angle(const HCube& c, std::size_t face_a, std::size_t face_b) {
  if (face_a >= c.num_faces() || face_b >= c.num_faces() || !c.faces_adjacent(face_a, face_b)) {
    throw GeometryError("dihedral_angle: faces " + std::to_string(face_a) + " and " + std::to_string(face_b) +
                        " are not adjacent");
  }
  const auto rv = c.ridge_vertices(face_a, face_b);
  double first = 0.0;
  const auto samples = detail::sample_points(c, rv, 5);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const HPoint& r = samples[k];
    const auto ridge = detail::ridge_basis(c, face_a, face_b, r);
    const double theta = angle(detail::sampled_in_face_direction(c, face_a, ridge, r),
                               detail::sampled_in_face_direction(c, face_b, ridge, r));
    if (k == 0) {
      first = theta;
    } else if (std::abs(theta - first) > kDevTol) {
      throw GeometryError("dihedral_angle: angle is not constant along the ridge (faces not totally geodesic)");
    }
  }
  return first;
}

/// Places `to_face` next to the chart `from` so that the two agree along
/// their shared ridge and meet at the given interior dihedral angle.
inline DevelopedChart chart_extension(const HCube& c, const DevelopedChart& from, std::size_t to_face,
                                      double dihedral) {
  const std::size_t a = from.source_face, b = to_face;
  if (b >= c.num_faces() || !c.faces_adjacent(a, b)) throw GeometryError("chart_extension: faces are not adjacent");
  if (!(dihedral > 0.0 && dihedral < std::numbers::pi)) {
    throw GeometryError("chart_extension: dihedral angle must lie in (0, pi)");
  }
  const auto rv = c.ridge_vertices(a, b);
  std::vector<HPoint> rpts;
  for (auto m : rv) rpts.push_back(c.vertex(m));
  const HPoint r = HCube::centroid_of(rpts);
  const auto ridge = detail::ridge_basis(c, a, b, r);
  const HTangent w_a = detail::in_face_direction(c, a, b, r);
  const HTangent w_b = detail::in_face_direction(c, b, a, r);
  const HTangent u_b(r, c.face(b).normal(), 1e-8);

  const Isometry& pa = from.placement;
  const HPoint r_img = pa.apply(r);
  const MinkowskiVec e1 = pa.apply(w_a.dir());
  const MinkowskiVec e2 = -1.0 * pa.apply(c.face(a).normal());
  const double cs = std::cos(dihedral), sn = std::sin(dihedral);

  std::vector<HTangent> src = ridge, dst;
  src.push_back(w_b);
  src.push_back(u_b);
  for (const auto& t : ridge) dst.push_back(pa.apply(t));
  dst.push_back(HTangent::project(r_img, cs * e1 + sn * e2));
  dst.push_back(HTangent::project(r_img, -sn * e1 + cs * e2));

  DevelopedChart out{b, isometry_from_frames(r, src, r_img, dst)};
  for (auto m : rv) {
    if (dist(pa.apply(c.vertex(m)), out.placement.apply(c.vertex(m))) > kDevTol) {
      throw GeometryError("chart_extension: ridge data inconsistent between the two charts");
    }
  }
  return out;
}

/**
 * Develops the whole boundary from a seed chart. Charts are first assigned
 * along a breadth-first spanning tree of the face-adjacency graph; then every
 * simple path from the seed (length <= 2n) is re-developed and compared with
 * the tree chart at its endpoint. The largest vertex displacement found is
 * the holonomy defect.
 */
inline DevelopmentResult develop_boundary(const HCube& c, std::size_t seed_face, const Isometry& seed_placement) {
  const std::size_t nf = c.num_faces();
  if (seed_face >= nf) throw GeometryError("develop_boundary: seed face out of range");
  if (seed_placement.dim() != c.dim()) throw GeometryError("develop_boundary: seed placement dimension mismatch");

  std::vector<std::vector<double>> dihedral(nf, std::vector<double>(nf, 0.0));
  for (std::size_t a = 0; a < nf; ++a)
    for (std::size_t b = a + 1; b < nf; ++b)
      if (c.faces_adjacent(a, b)) dihedral[a][b] = dihedral[b][a] = dihedral_angle(c, a, b);

  std::vector<std::optional<DevelopedChart>> tree(nf);
  tree[seed_face] = DevelopedChart{seed_face, seed_placement};
  std::deque<std::size_t> queue{seed_face};
  while (!queue.empty()) {
    const std::size_t a = queue.front();
    queue.pop_front();
    for (std::size_t b = 0; b < nf; ++b) {
      if (tree[b] || !c.faces_adjacent(a, b)) continue;
      tree[b] = chart_extension(c, *tree[a], b, dihedral[a][b]);
      queue.push_back(b);
    }
  }

  DevelopmentResult res;
  for (auto& t : tree) res.charts.push_back(*t);

  std::vector<bool> on_path(nf, false);
  on_path[seed_face] = true;
  const std::function<void(const DevelopedChart&, std::size_t)> walk = [&](const DevelopedChart& cur,
                                                                          std::size_t depth) {
    if (depth >= nf) return;
    for (std::size_t b = 0; b < nf; ++b) {
      if (on_path[b] || !c.faces_adjacent(cur.source_face, b)) continue;
      const DevelopedChart next = chart_extension(c, cur, b, dihedral[cur.source_face][b]);
      res.holonomy_defect = std::max(
          res.holonomy_defect, detail::max_vertex_displacement(c, b, next.placement, res.charts[b].placement));
      ++res.paths_checked;
      on_path[b] = true;
      walk(next, depth + 1);
      on_path[b] = false;
    }
  };
  walk(res.charts[seed_face], 1);

  for (std::size_t axis = 0; axis < c.dim(); ++axis) {
    const std::size_t fp = HCube::face_index(axis, true), fm = HCube::face_index(axis, false);
    res.opposite_face_gap.push_back(hyperplane_gap(c.face(fp).transformed(res.charts[fp].placement),
                                                   c.face(fm).transformed(res.charts[fm].placement)));
  }

  for (std::size_t f = 0; f < nf; ++f) {
    const auto fv = c.face_vertices(f);
    const auto pts = detail::sample_points(c, fv, 10);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double before = dist(pts[i], pts[j]);
        const double after = dist(res.charts[f].placement.apply(pts[i]), res.charts[f].placement.apply(pts[j]));
        res.face_distortion = std::max(res.face_distortion, std::abs(before - after));
      }
  }
  return res;
}

/// Develops the chart sequence along an explicit face path starting at path[0].
inline DevelopedChart develop_along(const HCube& c, std::span<const std::size_t> path, const Isometry& seed) {
  if (path.empty()) throw GeometryError("develop_along: empty path");
  DevelopedChart cur{path[0], seed};
  for (std::size_t i = 1; i < path.size(); ++i)
    cur = chart_extension(c, cur, path[i], dihedral_angle(c, path[i - 1], path[i]));
  return cur;
}

}  // namespace hypwarp
