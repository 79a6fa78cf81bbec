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
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hypwarp/hyperboloid.hpp"
#include "hypwarp/parallel.hpp"
#include "hypwarp/region.hpp"

/**
 * Samples of tangent hyperplanes, their density, and searches for small
 * hypercubes in a hyperplane arrangement that enclose a geodesic.
 */
namespace hypwarp {

/// Margin used when classifying points against arrangement hyperplanes.
inline constexpr double kMarginTol = 1e-9;

/// A tangent hyperplane at a point: an orthonormal (n-1)-frame.
struct PlaneSample {
  HPoint base;
  std::vector<HTangent> frame;

  PlaneSample(HPoint b, std::vector<HTangent> f) : base(std::move(b)), frame(std::move(f)) {
    if (frame.size() + 1 != base.dim()) throw GeometryError("PlaneSample: need n-1 frame vectors");
    const Mat g = gram(frame);
    if ((g - Mat::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() > 1e-8) {
      throw GeometryError("PlaneSample: frame is not orthonormal");
    }
    for (const auto& t : frame) detail::require_same_base(t.base(), base, "PlaneSample");
  }

  /// The plane orthogonal to a unit normal.
  static PlaneSample from_normal(const HTangent& normal) {
    const std::vector<HTangent> seed{normal.normalized()};
    auto full = complete_frame(normal.base(), seed);
    return PlaneSample(normal.base(), {full.begin() + 1, full.end()});
  }

  /// A unit normal; the plane does not fix its sign.
  HTangent normal() const { return complete_frame(base, frame).back(); }
};

/**
 * Distance on the bundle of tangent hyperplanes: sqrt(d^2 + theta^2), where d
 * is the distance between base points and theta the angle between the
 * planes after parallel transport of the first to the base of the second.
 * For hyperplanes theta is the single non-zero principal angle, i.e. the
 * unoriented angle between normals.
 */
inline double grassmann_dist(const PlaneSample& a, const PlaneSample& b) {
  const double d = dist(a.base, b.base);
  HTangent na = a.normal();
  if (d > 0.0) na = parallel_transport(na, GeodesicSegment::between(a.base, b.base));
  const HTangent nb = b.normal();
  const double c = mink_inner(na.dir(), nb.dir());
  const MinkowskiVec perp = na.dir() - c * nb.dir();
  const double s = std::sqrt(std::max(0.0, mink_inner(perp, perp)));
  const double theta = std::atan2(s, std::abs(c));
  return std::sqrt(d * d + theta * theta);
}

/// Smallest eps such that every probe is within eps of some sample.
inline double eps_density(std::span<const PlaneSample> samples, std::span<const PlaneSample> probes) {
  if (samples.empty()) throw GeometryError("eps_density: no samples");
  double worst = 0.0;
  for (const auto& p : probes) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) best = std::min(best, grassmann_dist(s, p));
    worst = std::max(worst, best);
  }
  return worst;
}

/// Unit directions on S^{n-1}: Fibonacci lattice for n = 3, seeded Gaussian otherwise.
inline std::vector<Vec> sphere_directions(std::size_t n, std::size_t count, std::uint64_t seed = 1) {
  std::vector<Vec> out;
  if (n == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(count);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(i);
      Vec v(3);
      v << r * std::cos(phi), r * std::sin(phi), z;
      out.push_back(v);
    }
    return out;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  while (out.size() < count) {
    Vec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = gauss(rng);
    if (v.norm() > 1e-12) out.push_back(v / v.norm());
  }
  return out;
}

/// Probe planes on a cubical grid of base points inside the ball of the
/// given radius about the basepoint, one plane per sphere direction.
inline std::vector<PlaneSample> probe_grid(std::size_t n, double radius, std::size_t per_axis,
                                           std::size_t directions, std::uint64_t seed = 1) {
  if (per_axis < 1) throw GeometryError("probe_grid: need at least one point per axis");
  const HPoint o = HPoint::origin(n);
  std::vector<HPoint> bases;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = per_axis == 1 ? 0.0
                           : -radius + 2.0 * radius * static_cast<double>(idx[i]) / static_cast<double>(per_axis - 1);
    }
    if (x.norm() <= radius + 1e-12) {
      MinkowskiVec v = MinkowskiVec::zeros(n + 1);
      v.coords().tail(n) = x;
      const double r = x.norm();
      bases.push_back(r > 0.0 ? exp_map(HTangent(o, v).normalized(), r) : o);
    }
    std::size_t k = 0;
    while (k < n && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == n) break;
  }
  const auto dirs = sphere_directions(n, directions, seed);
  std::vector<PlaneSample> out;
  for (const auto& b : bases) {
    for (const auto& d : dirs) {
      MinkowskiVec v = MinkowskiVec::zeros(n + 1);
      v.coords().tail(n) = d;
      // Transport the direction from the basepoint so planes at b follow the grid frame.
      HTangent t(o, v);
      if (dist(o, b) > 0.0) t = parallel_transport(t, GeodesicSegment::between(o, b));
      out.push_back(PlaneSample::from_normal(t));
    }
  }
  return out;
}

/// A finite set of pairwise distinct hyperplanes.
class Arrangement {
 public:
  Arrangement() = default;
  explicit Arrangement(std::vector<Hyperplane> hs) {
    for (auto& h : hs) {
      if (contains_plane(h)) throw GeometryError("Arrangement: duplicate hyperplane");
      planes_.push_back(std::move(h));
    }
    check_dims();
  }

  /// Builds an arrangement, silently dropping repeated hyperplanes.
  static Arrangement deduplicated(std::vector<Hyperplane> hs) {
    Arrangement a;
    for (auto& h : hs)
      if (!a.contains_plane(h)) a.planes_.push_back(std::move(h));
    a.check_dims();
    return a;
  }

  /// Same hyperplane up to orientation, within kPointTol relative to the normal's size.
  bool contains_plane(const Hyperplane& h) const {
    return std::any_of(planes_.begin(), planes_.end(), [&](const Hyperplane& p) {
      const Vec& a = p.normal().coords();
      const Vec& b = h.normal().coords();
      if (a.size() != b.size()) return false;
      const double tol = kPointTol * std::max(1.0, a.squaredNorm());
      return (a - b).cwiseAbs().maxCoeff() <= tol || (a + b).cwiseAbs().maxCoeff() <= tol;
    });
  }

  std::size_t size() const { return planes_.size(); }
  const Hyperplane& operator[](std::size_t i) const { return planes_[i]; }
  const std::vector<Hyperplane>& planes() const { return planes_; }
  std::size_t dim() const { return planes_.empty() ? 0 : planes_.front().dim(); }

  Arrangement without(std::size_t i) const {
    Arrangement a = *this;
    a.planes_.erase(a.planes_.begin() + static_cast<std::ptrdiff_t>(i));
    return a;
  }

 private:
  void check_dims() const {
    for (const auto& p : planes_)
      if (p.dim() != dim()) throw GeometryError("Arrangement: mixed dimensions");
  }
  std::vector<Hyperplane> planes_;
};

/// A hypercube built from arrangement hyperplanes that encloses a point of a
/// geodesic, with the two faces the geodesic crosses.
struct EnclosingCube {
  HCube cube;
  std::vector<std::size_t> planes;  // arrangement index for each cube face
  std::size_t top_face = 0, bottom_face = 1;
  double s_bottom = 0.0, s_top = 0.0;  // crossing parameters along the geodesic
  double angle_bottom = 0.0, angle_top = 0.0;
  double shape_delta = 0.0;  // delta_close to the box model
};

struct EnclosureParams {
  double eps = 0.3;
  double delta = 0.1;
};

/// Optional restrictions on enclosing_cube_search candidates. `crossings`
/// sees the (bottom, top) crossing parameters before any cube is built;
/// `cube` sees the finished candidate.
struct SearchFilter {
  std::function<bool(double, double)> crossings;
  std::function<bool(const EnclosingCube&)> cube;
};

namespace detail {

struct Crossing {
  std::optional<Incidence> hit;
};

inline std::vector<Crossing> crossings(const Arrangement& arr, const Geodesic& g) {
  std::vector<Crossing> out;
  for (const auto& h : arr.planes()) out.push_back({geodesic_hits_hyperplane(g, h)});
  return out;
}

/// x lies strictly between ultraparallel hyperplanes a and b.
inline bool between(const Hyperplane& a, const Hyperplane& b, const HPoint& x) {
  const auto [fa, fb] = common_perpendicular(a, b);
  return a.pairing(x) * a.pairing(fb) > 0.0 && b.pairing(x) * b.pairing(fa) > 0.0;
}

inline bool meets(const Hyperplane& a, const Hyperplane& b) {
  return std::abs(mink_inner(a.normal(), b.normal())) < 1.0;
}

}  // namespace detail

/// Checks every enclosure condition for an already built cube against a
/// geodesic; returns the first failed condition, or nullopt when all hold.
inline std::optional<std::string> enclosure_failure(const HCube& c, const Geodesic& g, const EnclosureParams& p,
                                                    const CubeShape& model) {
  std::vector<std::size_t> crossed;
  std::vector<Incidence> hits;
  for (std::size_t f = 0; f < c.num_faces(); ++f) {
    if (auto hit = geodesic_hits_hyperplane(g, c.face(f))) {
      crossed.push_back(f);
      hits.push_back(*hit);
    }
  }
  if (crossed.size() != 2) return "geodesic does not cross exactly two face hyperplanes";
  if (HCube::opposite_face(crossed[0]) != crossed[1]) return "crossed faces are not opposite";
  for (const auto& h : hits)
    if (!c.contains(h.point, 1e-8)) return "crossing lies outside the face";
  const double min_angle = std::numbers::pi / 2 - p.delta;
  for (const auto& h : hits)
    if (h.angle < min_angle) return "geodesic is not close to orthogonal to a crossed face";
  const auto [fa, fb] = common_perpendicular(c.face(crossed[0]), c.face(crossed[1]));
  if (dist(fa, hits[0].point) >= p.delta || dist(fb, hits[1].point) >= p.delta) {
    return "face centers are not near the crossings";
  }
  if (delta_close(cube_shape(c), model) >= p.delta) return "cube is not close to the box model";
  return std::nullopt;
}

/**
 * Finds a hypercube with faces from the arrangement enclosing g(s):
 *   1. g crosses exactly two (opposite) faces, the top and the bottom;
 *   2. the other face hyperplanes miss g;
 *   3. the common perpendicular of top and bottom ends within delta of the
 *      crossings;
 *   4. g meets top and bottom at angle >= pi/2 - delta;
 *   5. the cube is delta-close to the box model of size eps.
 * Candidates are scanned in lexicographic order of arrangement indices, so
 * the result is deterministic; worker threads only split the scan. Candidates
 * rejected by `filter` are skipped and the scan continues.
 *
 * Pruning uses the edge bound E = (longest model edge) + delta: every point
 * of a cube lies within its longest edge of each face hyperplane, and
 * opposite faces are at most one edge apart.
 */
inline std::optional<EnclosingCube> enclosing_cube_search(const Arrangement& arr, const Geodesic& g,
                                                          const EnclosureParams& p, double s,
                                                          const SearchFilter& filter = {}, unsigned threads = 1) {
  const std::size_t n = g.dim();
  if (arr.size() == 0) return std::nullopt;
  if (arr.dim() != n) throw GeometryError("enclosing_cube_search: dimension mismatch");
  if (!(p.eps > 0.0 && p.eps < box_model_eps_max(n))) throw GeometryError("enclosing_cube_search: eps out of range");
  if (!(p.delta > 0.0)) throw GeometryError("enclosing_cube_search: delta must be positive");

  const CubeShape model = cube_shape(box_model(n, p.eps));
  double model_edge = 0.0;
  for (double e : model.all_edge_lengths()) model_edge = std::max(model_edge, e);
  const double max_edge = model_edge + p.delta;
  const double max_pairing = std::sinh(max_edge);
  const double min_angle = std::numbers::pi / 2 - p.delta;

  const auto cr = detail::crossings(arr, g);
  const HPoint x = g.at(s);
  const std::size_t m = arr.size();
  const auto near = [&](const Hyperplane& h, const HPoint& y) { return std::abs(h.pairing(y)) <= max_pairing; };

  std::vector<std::pair<std::size_t, std::size_t>> slabs;  // (bottom, top)
  for (std::size_t i = 0; i < m; ++i) {
    if (!cr[i].hit || cr[i].hit->angle < min_angle || !near(arr[i], x)) continue;
    for (std::size_t j = i + 1; j < m; ++j) {
      if (!cr[j].hit || cr[j].hit->angle < min_angle || !near(arr[j], x)) continue;
      const Hyperplane &hi = arr[i], &hj = arr[j];
      if (!hyperplanes_disjoint(hi, hj) || hyperplane_gap(hi, hj) > max_edge) continue;
      const double si = cr[i].hit->param, sj = cr[j].hit->param;
      if (s < std::min(si, sj) || s > std::max(si, sj)) continue;
      const auto [fi, fj] = common_perpendicular(hi, hj);
      if (dist(fi, cr[i].hit->point) >= p.delta || dist(fj, cr[j].hit->point) >= p.delta) continue;
      const std::size_t top = si > sj ? i : j, bottom = si > sj ? j : i;
      if (filter.crossings && !filter.crossings(cr[bottom].hit->param, cr[top].hit->param)) continue;
      slabs.emplace_back(bottom, top);
    }
  }

  const auto try_slab = [&](std::size_t slab) -> std::optional<EnclosingCube> {
    const auto [bottom, top] = slabs[slab];
    const HPoint& p_top = cr[top].hit->point;
    const HPoint& p_bottom = cr[bottom].hit->point;

    // Side candidates: miss g, meet top and bottom, close to the enclosed points.
    std::vector<std::size_t> sides;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == top || k == bottom || cr[k].hit) continue;
      if (!detail::meets(arr[k], arr[top]) || !detail::meets(arr[k], arr[bottom])) continue;
      if (near(arr[k], x) && near(arr[k], p_top) && near(arr[k], p_bottom)) sides.push_back(k);
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < sides.size(); ++a)
      for (std::size_t b = a + 1; b < sides.size(); ++b) {
        const Hyperplane &ha = arr[sides[a]], &hb = arr[sides[b]];
        if (!hyperplanes_disjoint(ha, hb) || hyperplane_gap(ha, hb) > max_edge) continue;
        if (detail::between(ha, hb, x) && detail::between(ha, hb, p_top) && detail::between(ha, hb, p_bottom)) {
          pairs.emplace_back(sides[a], sides[b]);
        }
      }

    std::vector<std::size_t> chosen;  // indices into pairs
    std::optional<EnclosingCube> found;
    const auto leaf = [&] {
      std::vector<Hyperplane> faces{arr[top], arr[bottom]};
      std::vector<std::size_t> ids{top, bottom};
      for (auto c : chosen) {
        faces.push_back(arr[pairs[c].first]);
        faces.push_back(arr[pairs[c].second]);
        ids.push_back(pairs[c].first);
        ids.push_back(pairs[c].second);
      }
      // Screen on the shape before the full (validated) construction.
      try {
        std::vector<HPoint> verts;
        for (std::size_t mk = 0; mk < (std::size_t{1} << n); ++mk) {
          std::vector<Hyperplane> hs;
          for (std::size_t a = 0; a < n; ++a) hs.push_back(faces[HCube::face_index(a, ((mk >> a) & 1u) == 0)]);
          verts.push_back(detail::intersect_hyperplanes(hs));
        }
        if (delta_close_lower_bound(cube_shape(n, verts), model) >= p.delta) return;
      } catch (const GeometryError&) {
        return;
      }
      std::optional<HCube> cube;
      try {
        cube = HCube::from_faces(n, faces);
      } catch (const GeometryError&) {
        return;
      }
      if (!cube->contains(x, kMarginTol)) return;
      if (enclosure_failure(*cube, g, p, model)) return;
      EnclosingCube ec{*cube, ids, 0, 1, cr[bottom].hit->param, cr[top].hit->param,
                       cr[bottom].hit->angle, cr[top].hit->angle, delta_close(cube_shape(*cube), model)};
      if (filter.cube && !filter.cube(ec)) return;
      found = std::move(ec);
    };
    const std::function<void(std::size_t)> pick = [&](std::size_t from) {
      if (found) return;
      if (chosen.size() + 1 == n) {
        leaf();
        return;
      }
      for (std::size_t c = from; c < pairs.size() && !found; ++c) {
        const auto [a, b] = pairs[c];
        bool ok = true;
        for (auto q : chosen) {
          const auto [qa, qb] = pairs[q];
          if (a == qa || a == qb || b == qa || b == qb || !detail::meets(arr[a], arr[qa]) ||
              !detail::meets(arr[a], arr[qb]) || !detail::meets(arr[b], arr[qa]) || !detail::meets(arr[b], arr[qb])) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        chosen.push_back(c);
        pick(c + 1);
        chosen.pop_back();
      }
    };
    pick(0);
    return found;
  };
  return first_in_order<EnclosingCube>(slabs.size(), threads, try_slab);
}

namespace detail {

/// The two faces of c crossed by g, ordered (bottom, top) by parameter.
inline std::pair<Incidence, Incidence> crossed_faces(const HCube& c, const Geodesic& g, std::size_t& bottom,
                                                     std::size_t& top) {
  std::vector<std::pair<std::size_t, Incidence>> hits;
  for (std::size_t f = 0; f < c.num_faces(); ++f)
    if (auto h = geodesic_hits_hyperplane(g, c.face(f))) hits.emplace_back(f, *h);
  if (hits.size() != 2) throw GeometryError("interlocking: geodesic must cross exactly two faces of each cube");
  if (hits[0].second.param > hits[1].second.param) std::swap(hits[0], hits[1]);
  bottom = hits[0].first;
  top = hits[1].first;
  return {hits[0].second, hits[1].second};
}

}  // namespace detail

/**
 * a and b interlock along g when the top hyperplane of a lies strictly
 * between the top and bottom hyperplanes of b: disjoint from both, and its
 * crossing with g strictly inside b's slab.
 */
inline bool interlocking(const HCube& a, const HCube& b, const Geodesic& g) {
  std::size_t a_bot = 0, a_top = 0, b_bot = 0, b_top = 0;
  const auto [a_lo, a_hi] = detail::crossed_faces(a, g, a_bot, a_top);
  detail::crossed_faces(b, g, b_bot, b_top);
  const Hyperplane& mid = a.face(a_top);
  if (!hyperplanes_disjoint(mid, b.face(b_top)) || !hyperplanes_disjoint(mid, b.face(b_bot))) return false;
  const HPoint& w = a_hi.point;
  return b.face(b_top).pairing(w) < -kMarginTol && b.face(b_bot).pairing(w) < -kMarginTol;
}

struct ChainReport {
  std::vector<EnclosingCube> cubes;
  std::vector<bool> interlocked;  // between consecutive cubes
  bool success = false;
  std::optional<double> failure_param;
  std::string failure_reason;
};

/**
 * Greedy chain of enclosing cubes covering g([s0, s1]). After each cube the
 * next one must contain the previous top crossing, have both crossings more
 * than eps/4 away from it, and interlock with the previous cube.
 */
inline ChainReport chain_cover(const Arrangement& arr, const Geodesic& g, double s0, double s1,
                               const EnclosureParams& p, unsigned threads = 1) {
  if (!(s1 >= s0)) throw GeometryError("chain_cover: need s0 <= s1");
  ChainReport rep;
  auto first = enclosing_cube_search(arr, g, p, s0, {}, threads);
  if (!first) {
    rep.failure_param = s0;
    rep.failure_reason = "no enclosing cube at the start of the interval";
    return rep;
  }
  rep.cubes.push_back(*first);
  while (rep.cubes.back().s_top < s1) {
    const EnclosingCube& cur = rep.cubes.back();
    const double at = cur.s_top;
    const double sep = p.eps / 4.0;
    SearchFilter filter;
    filter.crossings = [&](double lo, double hi) { return std::abs(hi - at) > sep && std::abs(lo - at) > sep; };
    filter.cube = [&](const EnclosingCube& c) { return interlocking(cur.cube, c.cube, g); };
    auto next = enclosing_cube_search(arr, g, p, at, filter, threads);
    if (!next) {
      rep.failure_param = at;
      rep.failure_reason = "no interlocking enclosing cube continues the chain";
      return rep;
    }
    rep.interlocked.push_back(true);
    rep.cubes.push_back(*next);
  }
  rep.success = true;
  return rep;
}

/// Re-verifies a chain from the cubes alone: every enclosure condition,
/// interlocking of consecutive cubes, and coverage of [s0, s1].
inline std::optional<std::string> verify_chain(const ChainReport& rep, const Geodesic& g, double s0, double s1,
                                               const EnclosureParams& p) {
  if (rep.cubes.empty()) return "empty chain";
  const CubeShape model = cube_shape(box_model(g.dim(), p.eps));
  double covered = s0;
  for (std::size_t i = 0; i < rep.cubes.size(); ++i) {
    const HCube& c = rep.cubes[i].cube;
    if (auto why = enclosure_failure(c, g, p, model)) return "cube " + std::to_string(i) + ": " + *why;
    std::size_t bot = 0, top = 0;
    const auto [lo, hi] = detail::crossed_faces(c, g, bot, top);
    if (lo.param > covered + kMarginTol) return "gap in coverage before cube " + std::to_string(i);
    covered = std::max(covered, hi.param);
    if (i > 0 && !interlocking(rep.cubes[i - 1].cube, c, g)) {
      return "cubes " + std::to_string(i - 1) + " and " + std::to_string(i) + " do not interlock";
    }
  }
  if (covered < s1) return "chain ends before the interval does";
  return std::nullopt;
}

}  // namespace hypwarp
