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
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SVD>

#include "hypwarp/hyperboloid.hpp"

namespace hypwarp {

/// Totally geodesic hyperplane {x : <x,u> = 0} with unit spacelike normal u.
/// The sign of u is a co-orientation; <x,u> > 0 is the positive side.
class Hyperplane {
 public:
  explicit Hyperplane(MinkowskiVec normal, double tol = kPointTol) : u_(std::move(normal)) {
    const double q = mink_inner(u_, u_);
    const double scale = std::max(1.0, u_.coords().squaredNorm());
    if (!(std::abs(q - 1.0) <= tol * scale)) {
      throw GeometryError("Hyperplane: normal must be unit spacelike, <u,u> = " + std::to_string(q));
    }
  }

  /// Rescales any spacelike vector to a unit normal.
  static Hyperplane from_spacelike(const MinkowskiVec& v) {
    const double q = mink_inner(v, v);
    if (!(q > 0.0)) throw GeometryError("Hyperplane: normal vector is not spacelike");
    return Hyperplane((1.0 / std::sqrt(q)) * v, 1e300);
  }

  const MinkowskiVec& normal() const { return u_; }
  std::size_t dim() const { return u_.size() - 1; }
  Hyperplane flipped() const { return Hyperplane(-u_, 1e300); }
  double pairing(const HPoint& p) const { return mink_inner(p.vec(), u_); }
  Hyperplane transformed(const Isometry& g) const { return from_spacelike(g.apply(u_)); }

 private:
  MinkowskiVec u_;
};

/// Hyperplane through p orthogonal to the unit tangent normal_dir.
inline Hyperplane hyperplane_through(const HPoint& p, const HTangent& normal_dir) {
  detail::require_same_base(normal_dir.base(), p, "hyperplane_through");
  if (!normal_dir.is_unit()) throw GeometryError("hyperplane_through: normal direction must be unit");
  return Hyperplane(normal_dir.dir(), 1e-8);
}

/// Signed distance from p to H, positive on the side u points to.
inline double signed_dist(const HPoint& p, const Hyperplane& h) { return std::asinh(h.pairing(p)); }

/// Two hyperplanes are disjoint in H^n (ultraparallel) iff |<u,w>| > 1.
inline bool hyperplanes_disjoint(const Hyperplane& a, const Hyperplane& b) {
  return std::abs(mink_inner(a.normal(), b.normal())) > 1.0;
}

/// Distance between ultraparallel hyperplanes, 0 if they meet or are asymptotic.
inline double hyperplane_gap(const Hyperplane& a, const Hyperplane& b) {
  const double c = std::abs(mink_inner(a.normal(), b.normal()));
  return c > 1.0 ? std::acosh(c) : 0.0;
}

/// Feet of the common perpendicular of two ultraparallel hyperplanes:
/// the point of a closest to b and the point of b closest to a.
inline std::pair<HPoint, HPoint> common_perpendicular(const Hyperplane& a, const Hyperplane& b) {
  const double c = mink_inner(a.normal(), b.normal());
  if (std::abs(c) <= 1.0) throw GeometryError("common_perpendicular: hyperplanes intersect");
  return {HPoint::normalize_timelike(b.normal() - c * a.normal()),
          HPoint::normalize_timelike(a.normal() - c * b.normal())};
}

/**
 * Combinatorial hypercube with totally geodesic faces.
 *
 * Faces are indexed 2*axis + (sign < 0); face normals are outward, so the
 * solid cube is {x : <x,u_f> <= 0 for all f}. Vertices are indexed by a
 * bit mask whose bit `axis` is set when the vertex lies on the negative face
 * of that axis. Edges join masks differing in one bit.
 */
class HCube {
 public:
  static constexpr std::size_t face_index(std::size_t axis, bool positive) {
    return 2 * axis + (positive ? 0 : 1);
  }
  static constexpr std::size_t face_axis(std::size_t face) { return face / 2; }
  static constexpr bool face_positive(std::size_t face) { return face % 2 == 0; }
  static constexpr std::size_t opposite_face(std::size_t face) { return face ^ 1u; }

  /// Builds the cube bounded by the given 2n hyperplanes (face order as
  /// above; co-orientation is ignored and recomputed). Throws if the faces do
  /// not bound an embedded solid hypercube.
  static HCube from_faces(std::size_t n, std::vector<Hyperplane> faces);

  /// Rebuilds from serialized faces and vertices, checking that each vertex
  /// lies on its n faces (planarity) and that the cube is embedded.
  static HCube from_parts(std::size_t n, std::vector<Hyperplane> faces, std::vector<HPoint> vertices);

  std::size_t dim() const { return n_; }
  std::size_t num_faces() const { return 2 * n_; }
  std::size_t num_vertices() const { return std::size_t{1} << n_; }
  const std::vector<Hyperplane>& faces() const { return faces_; }
  const Hyperplane& face(std::size_t f) const { return faces_[f]; }
  const std::vector<HPoint>& vertices() const { return vertices_; }
  const HPoint& vertex(std::size_t mask) const { return vertices_[mask]; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }

  bool vertex_on_face(std::size_t mask, std::size_t face) const {
    const bool neg = (mask >> face_axis(face)) & 1u;
    return neg != face_positive(face);
  }
  std::vector<std::size_t> face_vertices(std::size_t face) const {
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m < num_vertices(); ++m)
      if (vertex_on_face(m, face)) out.push_back(m);
    return out;
  }
  /// Faces a and b share an (n-2)-dimensional ridge iff they belong to different axes.
  bool faces_adjacent(std::size_t a, std::size_t b) const { return face_axis(a) != face_axis(b); }
  std::vector<std::size_t> ridge_vertices(std::size_t a, std::size_t b) const {
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m < num_vertices(); ++m)
      if (vertex_on_face(m, a) && vertex_on_face(m, b)) out.push_back(m);
    return out;
  }

  /// Normalized barycentre of the vertices (an interior point).
  HPoint centroid() const { return centroid_of(vertices_); }
  HPoint face_centroid(std::size_t face) const {
    std::vector<HPoint> pts;
    for (auto m : face_vertices(face)) pts.push_back(vertices_[m]);
    return centroid_of(pts);
  }

  /// <x,u_f> <= tol for every face.
  bool contains(const HPoint& x, double tol = kPointTol) const {
    return std::all_of(faces_.begin(), faces_.end(),
                       [&](const Hyperplane& h) { return h.pairing(x) <= tol; });
  }

  HCube transformed(const Isometry& g) const {
    std::vector<Hyperplane> faces;
    for (const auto& h : faces_) faces.push_back(h.transformed(g));
    std::vector<HPoint> verts;
    for (const auto& v : vertices_) verts.push_back(g.apply(v));
    return from_parts(n_, std::move(faces), std::move(verts));
  }

  static HPoint centroid_of(std::span<const HPoint> pts) {
    MinkowskiVec s = MinkowskiVec::zeros(pts.front().vec().size());
    for (const auto& p : pts) s += p.vec();
    return HPoint::normalize_timelike(s);
  }

 private:
  HCube() = default;
  void build_edges();
  void validate_embedded() const;

  std::size_t n_ = 0;
  std::vector<Hyperplane> faces_;
  std::vector<HPoint> vertices_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

namespace detail {

/// Unique point of H^n on n hyperplanes in general position.
inline HPoint intersect_hyperplanes(std::span<const Hyperplane> hs) {
  const std::size_t amb = hs.front().normal().size();
  Mat a(static_cast<Eigen::Index>(hs.size()), static_cast<Eigen::Index>(amb));
  const Mat j = minkowski_metric(amb);
  for (std::size_t r = 0; r < hs.size(); ++r)
    a.row(static_cast<Eigen::Index>(r)) = (j * hs[r].normal().coords()).transpose();
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv.size() < static_cast<Eigen::Index>(hs.size()) || sv[sv.size() - 1] < 1e-12 * sv[0]) {
    throw GeometryError("intersect_hyperplanes: hyperplanes are not in general position");
  }
  const MinkowskiVec kernel(svd.matrixV().col(static_cast<Eigen::Index>(amb) - 1));
  if (!(mink_inner(kernel, kernel) < 0.0)) {
    throw GeometryError("intersect_hyperplanes: hyperplanes do not meet inside H^n");
  }
  return HPoint::normalize_timelike(kernel);
}

}  // namespace detail

inline void HCube::build_edges() {
  edges_.clear();
  for (std::size_t m = 0; m < num_vertices(); ++m)
    for (std::size_t a = 0; a < n_; ++a) {
      const std::size_t o = m ^ (std::size_t{1} << a);
      if (m < o) edges_.emplace_back(m, o);
    }
}

inline void HCube::validate_embedded() const {
  for (std::size_t a = 0; a < n_; ++a) {
    if (!hyperplanes_disjoint(faces_[face_index(a, true)], faces_[face_index(a, false)])) {
      throw GeometryError("HCube: opposite faces of axis " + std::to_string(a) + " intersect");
    }
  }
  for (std::size_t m = 0; m < num_vertices(); ++m) {
    for (std::size_t f = 0; f < num_faces(); ++f) {
      const double s = faces_[f].pairing(vertices_[m]);
      if (vertex_on_face(m, f)) {
        if (std::abs(s) > 1e-8 * std::max(1.0, vertices_[m][0])) {
          throw GeometryError("HCube: vertex " + std::to_string(m) + " does not lie on face " +
                              std::to_string(f) + " (planarity)");
        }
      } else if (!(s < -kPointTol)) {
        throw GeometryError("HCube: vertex " + std::to_string(m) +
                            " is not strictly inside face " + std::to_string(f));
      }
    }
  }
  // Adjacent vertices must be distinct points.
  for (const auto& [a, b] : edges_) {
    if (dist(vertices_[a], vertices_[b]) <= kPointTol) throw GeometryError("HCube: degenerate edge");
  }
}

inline HCube HCube::from_faces(std::size_t n, std::vector<Hyperplane> faces) {
  if (n < 2) throw GeometryError("HCube: dimension must be at least 2");
  if (faces.size() != 2 * n) throw GeometryError("HCube: need exactly 2n faces");
  for (const auto& f : faces)
    if (f.dim() != n) throw GeometryError("HCube: face dimension mismatch");
  HCube c;
  c.n_ = n;
  c.faces_ = std::move(faces);
  for (std::size_t m = 0; m < c.num_vertices(); ++m) {
    std::vector<Hyperplane> hs;
    for (std::size_t a = 0; a < n; ++a) hs.push_back(c.faces_[face_index(a, ((m >> a) & 1u) == 0)]);
    c.vertices_.push_back(detail::intersect_hyperplanes(hs));
  }
  const HPoint mid = c.centroid();
  for (auto& f : c.faces_)
    if (f.pairing(mid) > 0.0) f = f.flipped();
  c.build_edges();
  c.validate_embedded();
  return c;
}

inline HCube HCube::from_parts(std::size_t n, std::vector<Hyperplane> faces, std::vector<HPoint> vertices) {
  if (n < 2) throw GeometryError("HCube: dimension must be at least 2");
  if (faces.size() != 2 * n || vertices.size() != (std::size_t{1} << n)) {
    throw GeometryError("HCube: need 2n faces and 2^n vertices");
  }
  HCube c;
  c.n_ = n;
  c.faces_ = std::move(faces);
  c.vertices_ = std::move(vertices);
  const HPoint mid = c.centroid();
  for (auto& f : c.faces_)
    if (f.pairing(mid) > 0.0) f = f.flipped();
  c.build_edges();
  c.validate_embedded();
  return c;
}

/// Box_model(eps): faces orthogonal to the geodesics through center along
/// frame[i], at signed distance +eps and -eps.
inline HCube box_model(const HPoint& center, std::span<const HTangent> frame, double eps) {
  const std::size_t n = center.dim();
  if (frame.size() != n) throw GeometryError("box_model: frame must have n vectors");
  for (const auto& e : frame) detail::require_same_base(e.base(), center, "box_model");
  if ((gram(frame) - Mat::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)))
          .cwiseAbs()
          .maxCoeff() > kIsoTol) {
    throw GeometryError("box_model: degenerate frame (not orthonormal)");
  }
  if (!(eps > 0.0)) throw GeometryError("box_model: eps must be positive");
  std::vector<Hyperplane> faces;
  const double sh = std::sinh(eps), ch = std::cosh(eps);
  for (std::size_t a = 0; a < n; ++a) {
    faces.emplace_back(sh * center.vec() + ch * frame[a].dir(), 1e-8);
    faces.emplace_back(sh * center.vec() - ch * frame[a].dir(), 1e-8);
  }
  try {
    return HCube::from_faces(n, std::move(faces));
  } catch (const GeometryError& e) {
    throw GeometryError("box_model: eps = " + std::to_string(eps) +
                        " too large, faces do not bound an embedded cube (" + e.what() + ")");
  }
}

inline HCube box_model(std::size_t n, double eps) {
  return box_model(HPoint::origin(n), standard_frame(n), eps);
}

/// Largest admissible eps for box_model in dimension n, found by bisection
/// on the embeddedness check.
inline double box_model_eps_max(std::size_t n) {
  const auto ok = [n](double e) {
    try {
      box_model(n, e);
      return true;
    } catch (const GeometryError&) {
      return false;
    }
  };
  double lo = 0.0, hi = 1.0;
  while (ok(hi)) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

/// Edge lengths and vertex angles of a cube.
struct CubeShape {
  std::size_t n = 0;
  /// edge_length[mask][axis]: length of the edge leaving vertex mask along axis.
  std::vector<std::vector<double>> edge_length;
  /// vertex_angle[mask][a][b]: angle at mask between the edges along axes a and b (a != b).
  std::vector<std::vector<std::vector<double>>> vertex_angle;

  std::vector<double> all_edge_lengths() const {
    std::vector<double> out;
    for (std::size_t m = 0; m < edge_length.size(); ++m)
      for (std::size_t a = 0; a < n; ++a)
        if (m < (m ^ (std::size_t{1} << a))) out.push_back(edge_length[m][a]);
    return out;
  }
  std::vector<double> all_vertex_angles() const {
    std::vector<double> out;
    for (const auto& per_vertex : vertex_angle)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) out.push_back(per_vertex[a][b]);
    return out;
  }
};

/// Shape of the cube with vertices in mask order.
inline CubeShape cube_shape(std::size_t n, std::span<const HPoint> vertices) {
  const std::size_t nv = vertices.size();
  CubeShape s;
  s.n = n;
  s.edge_length.assign(nv, std::vector<double>(n, 0.0));
  s.vertex_angle.assign(nv, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  for (std::size_t m = 0; m < nv; ++m) {
    std::vector<HTangent> dirs;
    for (std::size_t a = 0; a < n; ++a) {
      const HPoint& other = vertices[m ^ (std::size_t{1} << a)];
      s.edge_length[m][a] = dist(vertices[m], other);
      dirs.push_back(log_map(vertices[m], other).normalized());
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (a != b) s.vertex_angle[m][a][b] = angle(dirs[a], dirs[b]);
  }
  return s;
}

inline CubeShape cube_shape(const HCube& c) { return cube_shape(c.dim(), c.vertices()); }

/// Lower bound for delta_close: best matching of sorted edge lengths and
/// sorted vertex angles, ignoring the cube's combinatorics.
inline double delta_close_lower_bound(const CubeShape& a, const CubeShape& b) {
  const auto sorted_gap = [](std::vector<double> x, std::vector<double> y) {
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    double g = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) g = std::max(g, std::abs(x[i] - y[i]));
    return g;
  };
  return std::max(sorted_gap(a.all_edge_lengths(), b.all_edge_lengths()),
                  sorted_gap(a.all_vertex_angles(), b.all_vertex_angles()));
}

/// Largest edge-length or vertex-angle discrepancy under the best vertex
/// labeling, searched over all automorphisms of the hypercube graph
/// (axis permutations composed with reflections). Shapes are compared
/// unoriented. The cubes are delta-close iff the result is < delta.
inline double delta_close(const CubeShape& a, const CubeShape& b) {
  if (a.n != b.n) throw GeometryError("delta_close: dimension mismatch");
  const std::size_t n = a.n, nv = std::size_t{1} << n;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    for (std::size_t flip = 0; flip < nv; ++flip) {
      const auto image = [&](std::size_t m) {
        std::size_t r = 0;
        for (std::size_t i = 0; i < n; ++i)
          if ((m >> i) & 1u) r |= std::size_t{1} << perm[i];
        return r ^ flip;
      };
      double worst = 0.0;
      for (std::size_t m = 0; m < nv && worst < best; ++m) {
        const std::size_t im = image(m);
        for (std::size_t i = 0; i < n; ++i) {
          worst = std::max(worst, std::abs(a.edge_length[m][i] - b.edge_length[im][perm[i]]));
          for (std::size_t j = i + 1; j < n; ++j)
            worst = std::max(worst, std::abs(a.vertex_angle[m][i][j] - b.vertex_angle[im][perm[i]][perm[j]]));
        }
      }
      best = std::min(best, worst);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline double delta_close(const HCube& a, const HCube& b) { return delta_close(cube_shape(a), cube_shape(b)); }

/// Where a geodesic crosses a hyperplane.
struct Incidence {
  HPoint point;
  double param;   // arc-length parameter along the geodesic
  double angle;   // angle between the geodesic and the hyperplane, in [0, pi/2]
};

/// Crossing of a complete geodesic with H, if any. The geodesic meets H iff
/// its two ideal endpoints pair with u with opposite signs. Throws if the
/// geodesic lies in H.
inline std::optional<Incidence> geodesic_hits_hyperplane(const Geodesic& g, const Hyperplane& h) {
  const double a = mink_inner(g.origin.vec(), h.normal());
  const double b = mink_inner(g.direction, h.normal());
  if (std::abs(a) <= kPointTol && std::abs(b) <= kPointTol) {
    throw GeometryError("geodesic_hits_hyperplane: geodesic is contained in the hyperplane");
  }
  const auto [plus, minus] = g.ideal_endpoints();
  const double ep = mink_inner(plus, h.normal()), em = mink_inner(minus, h.normal());
  if (!(ep * em < 0.0)) return std::nullopt;
  // a cosh s + b sinh s = 0
  const double s = std::atanh(std::clamp(-a / b, -1.0, 1.0));
  const HTangent t = g.tangent_at(s);
  const double sin_angle = std::min(1.0, std::abs(mink_inner(t.dir(), h.normal())));
  return Incidence{t.base(), s, std::asin(sin_angle)};
}

/// Crossing of a segment with H: the complete-geodesic crossing restricted to [0, length].
inline std::optional<Incidence> geodesic_hits_hyperplane(const GeodesicSegment& seg, const Hyperplane& h) {
  if (seg.length <= kPointTol) {
    if (std::abs(h.pairing(seg.start)) <= kPointTol) return Incidence{seg.start, 0.0, 0.0};
    return std::nullopt;
  }
  auto hit = geodesic_hits_hyperplane(Geodesic::between(seg.start, seg.end), h);
  if (hit && (hit->param < -kPointTol || hit->param > seg.length + kPointTol)) return std::nullopt;
  return hit;
}

}  // namespace hypwarp
