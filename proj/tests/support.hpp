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
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "hypwarp/comparison.hpp"
#include "hypwarp/distribution.hpp"
#include "hypwarp/hyperboloid.hpp"
#include "hypwarp/region.hpp"

namespace hypwarp::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  double gauss() { return std::normal_distribution<double>()(gen_); }

  /// Random point within hyperbolic distance r of the basepoint.
  HPoint point(std::size_t n, double r = 2.0) {
    const HTangent t = unit_tangent(HPoint::origin(n));
    return exp_map(t, uniform(0.0, r));
  }

  /// Uniform random unit tangent at p.
  HTangent unit_tangent(const HPoint& p) {
    MinkowskiVec v = MinkowskiVec::zeros(p.vec().size());
    for (Eigen::Index i = 0; i < v.coords().size(); ++i) v.coords()[i] = gauss();
    return HTangent::project(p, v).normalized();
  }

  /// Random tangent of norm at most r.
  HTangent tangent(const HPoint& p, double r) { return unit_tangent(p).scaled(uniform(0.0, r)); }

  /// Isometry moving the basepoint by at most r, with a random rotation.
  Isometry isometry(std::size_t n, double r = 2.0) {
    const HPoint o = HPoint::origin(n);
    const HPoint q = point(n, r);
    std::vector<HTangent> f;
    for (std::size_t i = 0; i < n; ++i) f.push_back(unit_tangent(q));
    return isometry_from_frames(o, standard_frame(n), q, orthonormalize_frame(q, f));
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  static std::vector<HTangent> orthonormalize_frame(const HPoint& q, const std::vector<HTangent>& f) {
    std::vector<MinkowskiVec> vs;
    for (const auto& t : f) vs.push_back(t.dir());
    return complete_frame(q, orthonormalize(q, vs));
  }

  std::mt19937_64 gen_;
};

/// Convex polygon inscribed in a circle of radius r about the basepoint of
/// H^2, with vertices at sorted random angles, counter-clockwise.
inline comparison::ComparisonPolygon random_convex_polygon(Rng& rng, std::size_t sides, double r) {
  std::vector<double> phi;
  while (phi.size() < sides) {
    phi.clear();
    for (std::size_t i = 0; i < sides; ++i) phi.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
    std::sort(phi.begin(), phi.end());
    // Keep vertices apart so every side and angle is well conditioned.
    for (std::size_t i = 0; i < sides; ++i) {
      const double gap = i + 1 < sides ? phi[i + 1] - phi[i] : phi[0] + 2.0 * std::numbers::pi - phi[i];
      if (gap < 0.3 || gap > std::numbers::pi - 0.2) {
        phi.clear();
        break;
      }
    }
  }
  std::vector<HPoint> v;
  for (double a : phi) {
    const HPoint o = HPoint::origin(2);
    v.push_back(exp_map(HTangent(o, MinkowskiVec{0.0, std::cos(a), std::sin(a)}), r));
  }
  comparison::ComparisonPolygon p;
  for (std::size_t i = 0; i < sides; ++i) {
    const HPoint& prev = v[(i + sides - 1) % sides];
    const HPoint& next = v[(i + 1) % sides];
    p.sides.push_back(dist(v[i], next));
    p.angles.push_back(angle(log_map(v[i], prev).normalized(), log_map(v[i], next).normalized()));
  }
  return p;
}

inline constexpr double kChainEps = 0.3;

/// Faces of box model cubes of half-width kChainEps centered every
/// kChainEps along the geodesic through the basepoint in direction e_1,
/// from parameter first*eps to last*eps. Repeated planes are merged.
inline Arrangement chain_arrangement(int first = -2, int last = 36) {
  std::vector<Hyperplane> hs;
  const HCube cube = box_model(3, kChainEps);
  for (int k = first; k <= last; ++k) {
    const Isometry b = Isometry::boost(3, 1, k * kChainEps);
    for (const auto& f : cube.faces()) hs.push_back(f.transformed(b));
  }
  return Arrangement::deduplicated(std::move(hs));
}

inline Geodesic axis_geodesic(std::size_t n = 3) { return Geodesic::through(standard_frame(n)[0]); }

/// Index of the arrangement hyperplane crossing g at parameter s.
inline std::size_t plane_crossing_at(const Arrangement& arr, const Geodesic& g, double s) {
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto hit = geodesic_hits_hyperplane(g, arr[i]);
    if (hit && std::abs(hit->param - s) < 1e-9) return i;
  }
  return arr.size();
}

}  // namespace hypwarp::testing
