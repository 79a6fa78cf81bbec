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
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hypwarp/hyperboloid.hpp"

/**
 * Space-form trigonometry in curvature -k and chord comparison for polygons.
 *
 * A space form of curvature -k is H^2 with all lengths divided by sqrt(k);
 * angles are unchanged. Lengths are therefore computed in curvature -1 after
 * scaling by sqrt(k).
 */
namespace hypwarp::comparison {

/// Polygon closure and chord-comparison tolerance.
inline constexpr double kPolyTol = 1e-8;
/// Curvature band treated as "k = 1" by triangle_compare.
inline constexpr double kEqualityCurvatureBand = 1e-6;

/// Space form of constant curvature -k, k >= 1.
struct ModelSpace {
  double k = 1.0;

  explicit ModelSpace(double k_ = 1.0) : k(k_) {
    if (!(k >= 1.0) || !std::isfinite(k)) throw GeometryError("ModelSpace: need k >= 1");
  }
  double scale() const { return std::sqrt(k); }
};

/// Third side opposite gamma. Uses the half-angle form
/// sinh^2(c/2) = sinh^2((a-b)/2) + sinh(a) sinh(b) sin^2(gamma/2), which is
/// the law of cosines rewritten without cancellation.
inline double law_of_cosines(const ModelSpace& m, double a, double b, double gamma) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw GeometryError("law_of_cosines: sides must be non-negative");
  const double s = m.scale();
  const double as = a * s, bs = b * s;
  const double h = std::sinh(0.5 * (as - bs));
  const double sg = std::sin(0.5 * gamma);
  const double half = std::sqrt(h * h + std::sinh(as) * std::sinh(bs) * sg * sg);
  return 2.0 * std::asinh(half) / s;
}

/// Angle between sides a and b of the triangle with sides a, b, c.
inline double opposite_angle(const ModelSpace& m, double a, double b, double c) {
  const double s = m.scale();
  const double as = a * s, bs = b * s, cs = c * s;
  const double num = std::sinh(0.5 * (cs + as - bs)) * std::sinh(0.5 * (cs - as + bs));
  const double den = std::sinh(as) * std::sinh(bs);
  if (!(den > 0.0)) throw GeometryError("opposite_angle: degenerate triangle");
  return 2.0 * std::asin(std::sqrt(std::clamp(num / den, 0.0, 1.0)));
}

struct TriangleComparison {
  double c_model;  // curvature -1
  double c_k;      // curvature -k
  bool equality;
};

/**
 * Third sides at curvature -1 and -k for the same two sides and angle. The
 * curvature -k side is never shorter. Equality is declared when c_k does not
 * exceed the side produced at curvature -(1 + kEqualityCurvatureBand); since
 * c grows monotonically with k, this is "equal lengths" resolved to a
 * curvature band instead of an absolute length, which would depend on the
 * size of the triangle.
 */
inline TriangleComparison triangle_compare(const ModelSpace& m, double a, double b, double gamma) {
  if (!(a > 0.0 && b > 0.0)) throw GeometryError("triangle_compare: sides must be positive");
  if (!(gamma > 0.0 && gamma < std::numbers::pi)) throw GeometryError("triangle_compare: angle must be in (0, pi)");
  const double c1 = law_of_cosines(ModelSpace(1.0), a, b, gamma);
  const double ck = law_of_cosines(m, a, b, gamma);
  const double band = law_of_cosines(ModelSpace(1.0 + kEqualityCurvatureBand), a, b, gamma);
  return {c1, ck, ck <= band};
}

/// Cyclic polygon data: sides[i] = |v_i v_{i+1}|, angles[i] = interior angle at v_i.
struct ComparisonPolygon {
  std::vector<double> sides;
  std::vector<double> angles;

  std::size_t size() const { return sides.size(); }

  void validate() const {
    if (sides.size() < 3 || sides.size() != angles.size()) {
      throw GeometryError("ComparisonPolygon: need at least 3 sides and one angle per vertex");
    }
    for (double s : sides)
      if (!(s > 0.0)) throw GeometryError("ComparisonPolygon: sides must be positive");
    for (double a : angles)
      if (!(a > 0.0 && a < std::numbers::pi)) throw GeometryError("ComparisonPolygon: angles must lie in (0, pi)");
  }
};

struct TracedChain {
  std::vector<HPoint> vertices;
  HTangent final_heading;
};

/**
 * Traces `count` sides starting at vertex `start` in curvature -1 with the
 * lengths multiplied by `scale`, turning left by (pi - angle) at each vertex
 * reached. vertices[0] is the basepoint of H^2 and the initial heading is e_1.
 */
inline TracedChain trace_chain(const ComparisonPolygon& p, std::size_t start, std::size_t count, double scale = 1.0) {
  const std::size_t n = p.size();
  HPoint pos = HPoint::origin(2);
  HTangent heading(pos, MinkowskiVec{0.0, 1.0, 0.0});
  std::vector<HPoint> verts{pos};
  for (std::size_t s = 0; s < count; ++s) {
    const std::size_t idx = (start + s) % n;
    const double len = p.sides[idx] * scale;
    const Geodesic g = Geodesic::through(heading);
    const HTangent arrive = g.tangent_at(len);
    pos = arrive.base();
    verts.push_back(pos);
    // Left normal: J (p x h), with x the Euclidean cross product in R^3.
    const Eigen::Vector3d pv = pos.vec().coords(), hv = arrive.dir().coords();
    Eigen::Vector3d nv = pv.cross(hv);
    nv[0] = -nv[0];
    const MinkowskiVec normal{Vec(nv)};
    const double turn = std::numbers::pi - p.angles[(idx + 1) % n];
    heading = HTangent::project(pos, std::cos(turn) * arrive.dir() + std::sin(turn) * normal).normalized();
  }
  return {verts, heading};
}

/// Distance plus heading mismatch after tracing the whole polygon.
inline double closure_defect(const ComparisonPolygon& p) {
  p.validate();
  const TracedChain tr = trace_chain(p, 0, p.size());
  const HPoint& start = tr.vertices.front();
  const HPoint& end = tr.vertices.back();
  const double gap = dist(start, end);
  HTangent h = tr.final_heading;
  if (gap > 0.0) h = parallel_transport(h, GeodesicSegment::between(end, start));
  const HTangent e1(start, MinkowskiVec{0.0, 1.0, 0.0});
  return std::max(gap, angle(h.normalized(), e1));
}

/// Vertices of the polygon in the hyperboloid model of H^2.
inline std::vector<HPoint> realize_polygon(const ComparisonPolygon& p) {
  const double defect = closure_defect(p);
  if (!(defect <= kPolyTol)) {
    throw GeometryError("realize_polygon: data does not close up (defect " + std::to_string(defect) + ")");
  }
  auto verts = trace_chain(p, 0, p.size()).vertices;
  verts.pop_back();
  return verts;
}

/// Length of the chord from v_start to v_{start+span} of some realization.
using ChordProvider = std::function<double(std::size_t start, std::size_t span)>;

/// Chords measured on the curvature -1 realization of p.
inline ChordProvider realized_provider(const ComparisonPolygon& p) {
  auto verts = std::make_shared<std::vector<HPoint>>(realize_polygon(p));
  return [verts](std::size_t start, std::size_t span) {
    return dist((*verts)[start], (*verts)[(start + span) % verts->size()]);
  };
}

/// Chords of the chain v_start .. v_{start+span} rebuilt in the space form
/// of curvature -k from the same side lengths and interior angles.
inline ChordProvider space_form_provider(const ComparisonPolygon& p, const ModelSpace& m) {
  return [p, s = m.scale()](std::size_t start, std::size_t span) {
    const TracedChain tr = trace_chain(p, start, span, s);
    return dist(tr.vertices.front(), tr.vertices.back()) / s;
  };
}

struct ChordVerdict {
  std::size_t i, j, span;
  double model_length;
  double test_length;
  bool equality;
};

struct ComparisonVerdict {
  std::vector<ChordVerdict> chords;  // in induction order
  std::optional<std::size_t> first_strict;

  bool all_equal() const {
    return std::all_of(chords.begin(), chords.end(), [](const ChordVerdict& c) { return c.equality; });
  }
};

/// Raised when a provider chord is shorter than the curvature -1 model.
class ComparisonViolation : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/**
 * Chord-by-chord comparison in order of increasing cyclic span.
 *
 * Model chords come from the data alone. For the chain v_i, ..., v_{i+m}:
 *
 *   |v_i v_{i+m}| = law_of_cosines(|v_i v_{i+m-1}|, side_{i+m-1},
 *                                  angle_{i+m-1} - beta),
 *
 * where beta is the angle at v_{i+m-1} of the fan triangle
 * (v_i, v_{i+m-2}, v_{i+m-1}); i.e. the interior angle is split between the
 * fan triangles meeting there. Every chord with cyclic span <= size/2 is
 * reported once. The provider must stand for a polygon with the same data in
 * a geodesically convex region of curvature <= -1; that is assumed, not
 * checked.
 */
inline ComparisonVerdict polygon_chord_induction(const ComparisonPolygon& p, const ChordProvider& provider) {
  p.validate();
  const std::size_t n = p.size(), max_span = n / 2;
  const ModelSpace hyp(1.0);
  // chord[i][m]: model |v_i v_{i+m}|
  std::vector<std::vector<double>> chord(n, std::vector<double>(max_span + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) chord[i][1] = p.sides[i];

  ComparisonVerdict out;
  for (std::size_t m = 1; m <= max_span; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = (i + m) % n;
      if (m >= 2) {
        const std::size_t pivot = (i + m - 1) % n;
        double beta = 0.0;
        if (m >= 3) beta = opposite_angle(hyp, p.sides[(i + m - 2) % n], chord[i][m - 1], chord[i][m - 2]);
        const double gamma = p.angles[pivot] - beta;
        if (!(gamma > 0.0)) throw GeometryError("polygon_chord_induction: polygon is not convex");
        chord[i][m] = law_of_cosines(hyp, chord[i][m - 1], p.sides[pivot], gamma);
      }
      if (2 * m == n && i >= m) continue;  // diagonal already reported from the other end
      const double model = chord[i][m];
      const double test = provider(i, m);
      if (test < model - kPolyTol) {
        throw ComparisonViolation("polygon_chord_induction: chord (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") is shorter than the curvature -1 model (" + std::to_string(test) + " < " +
                                  std::to_string(model) + ")");
      }
      const bool eq = std::abs(test - model) <= kPolyTol;
      if (!eq && !out.first_strict) out.first_strict = out.chords.size();
      out.chords.push_back({i, j, m, model, test, eq});
    }
  }
  return out;
}

}  // namespace hypwarp::comparison
