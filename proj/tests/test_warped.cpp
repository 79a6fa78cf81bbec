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

#include <cmath>
#include <numbers>

#include "catch_amalgamated.hpp"
#include "hypwarp/warped.hpp"
#include "support.hpp"

using namespace hypwarp::warped;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("cutoff size for a derivative bound", "[warped]") {
  const CutoffSpec c = CutoffSpec::with_bound(0.5, 0.01);
  CHECK_THAT(c.M, WithinAbs(188.0, 1e-9));
  CHECK(c.derivative_bound <= 0.01 + 1e-15);
  CHECK_THROWS_AS(CutoffSpec::smoothstep(0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(CutoffSpec::with_bound(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("cutoff is C2 and obeys its bound", "[warped]") {
  const CutoffSpec c = CutoffSpec::smoothstep(0.5, 20.0);
  double d1 = 0.0, d2 = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double t = -25.0 + 50.0 * i / 20000.0;
    const Jet j = chi(c, t);
    CHECK(j.value >= 0.0);
    CHECK(j.value <= 1.0);
    d1 = std::max(d1, std::abs(j.d1));
    d2 = std::max(d2, std::abs(j.d2));
  }
  CHECK(d1 <= c.derivative_bound);
  CHECK(d2 <= c.derivative_bound);
  for (double t : {c.t0, c.M}) {
    const Jet lo = chi(c, t - 1e-9), hi = chi(c, t + 1e-9);
    CHECK_THAT(lo.value - hi.value, WithinAbs(0.0, 1e-8));
    CHECK_THAT(lo.d1 - hi.d1, WithinAbs(0.0, 1e-8));
    CHECK_THAT(lo.d2 - hi.d2, WithinAbs(0.0, 1e-6));
  }
}

TEST_CASE("curvature at the central fiber", "[warped]") {
  const WarpedMetric m(2.0);
  CHECK_THAT(sectional_curvature(m, {0.0, 0.0}), WithinAbs(-1.0, 1e-15));
  CHECK(totally_geodesic_check(m) <= 1e-9);
}

TEST_CASE("curvature reference values", "[warped]") {
  const WarpedMetric m(2.0);
  CHECK_THAT(fiber_term(m, 0.3), WithinRel(-1.1769278115947566, 1e-12));
  CHECK_THAT(radial_curvature(m, 0.3), WithinRel(-2.1697260763467416, 1e-12));
  CHECK_THAT(sectional_curvature(m, {0.3, 0.0}), WithinRel(fiber_term(m, 0.3), 1e-14));
  CHECK_THAT(sectional_curvature(m, {0.3, 1.0}), WithinRel(radial_curvature(m, 0.3), 1e-12));
}

TEST_CASE("ell = 1 is hyperbolic space", "[warped]") {
  const WarpedMetric m(1.0);
  for (double t : {-50.0, -3.0, 0.0, 0.4, 2.0, 100.0, 500.0})
    for (double mix : {0.0, 0.5, 1.0}) CHECK_THAT(sectional_curvature(m, {t, mix}), WithinAbs(-1.0, 1e-12));
}

TEST_CASE("curvature is even in t", "[warped]") {
  const WarpedMetric m(2.0);
  for (double t : {0.1, 0.7, 3.0, 50.0, 187.0})
    for (double mix : {0.0, 0.3, 1.0})
      CHECK(sectional_curvature(m, {t, mix}) == sectional_curvature(m, {-t, mix}));
}

TEST_CASE("fiber curvature decreases on the plateau", "[warped]") {
  const WarpedMetric m(2.0);
  double prev = fiber_term(m, 0.0);
  for (int i = 1; i <= 100; ++i) {
    const double k = fiber_term(m, 0.5 * i / 100.0);
    CHECK(k <= prev + 1e-15);
    prev = k;
  }
}

TEST_CASE("curvature is continuous across the cutoff ends", "[warped]") {
  const WarpedMetric m(2.0);
  for (double t : {m.cutoff.t0, m.cutoff.M})
    for (double mix : {0.0, 1.0})
      CHECK_THAT(sectional_curvature(m, {t - 1e-9, mix}) - sectional_curvature(m, {t + 1e-9, mix}),
                 WithinAbs(0.0, 1e-7));
}

TEST_CASE("far field curvature", "[warped]") {
  const WarpedMetric m(2.0);
  CHECK_THAT(radial_curvature(m, 300.0), WithinAbs(-4.0, 1e-12));
  CHECK_THAT(fiber_term(m, 300.0), WithinAbs(-4.0, 1e-12));
  CHECK(std::isfinite(sectional_curvature(m, {1e4, 0.5})));
}

TEST_CASE("grid certificate for the default cutoff", "[warped][slow]") {
  const WarpedMetric m(2.0);
  const CertificateReport r = verify_bound(m, -2 * m.cutoff.M, 2 * m.cutoff.M, 2000, 200, hypwarp::default_threads());
  CHECK(r.violations == 0);
  CHECK(r.plateau_pass);
  CHECK(r.cutoff_pass);
  REQUIRE_FALSE(r.worst.empty());
  CHECK_THAT(r.worst.front().margin, WithinAbs(0.0, 1e-12));
  CHECK(r.worst.front().t == 0.0);
  CHECK(r.worst.front().mix == 0.0);
}

TEST_CASE("steep cutoff fails in the transition", "[warped]") {
  const WarpedMetric m(2.0, CutoffSpec::smoothstep(0.5, 0.6));
  const CertificateReport r = verify_bound(m, -1.2, 1.2, 2000, 200);
  CHECK(r.violations > 0);
  REQUIRE_FALSE(r.worst.empty());
  const double t = std::abs(r.worst.front().t);
  CHECK(t >= 0.5);
  CHECK(t <= 0.6);
  CHECK(r.worst.front().margin < 0.0);
}

TEST_CASE("grid certificate is independent of thread count", "[warped]") {
  const WarpedMetric m(2.0, CutoffSpec::smoothstep(0.5, 0.6));
  const CertificateReport a = verify_bound(m, -1.2, 1.2, 1000, 100, 1);
  const CertificateReport b = verify_bound(m, -1.2, 1.2, 1000, 100, 3);
  CHECK(a.violations == b.violations);
  REQUIRE(a.worst.size() == b.worst.size());
  for (std::size_t i = 0; i < a.worst.size(); ++i) CHECK(a.worst[i].index == b.worst[i].index);
}

TEST_CASE("coarse grids are rejected", "[warped]") {
  CHECK_THROWS_AS(verify_bound(WarpedMetric(2.0), -1.0, 1.0, 999, 100), std::invalid_argument);
  CHECK_THROWS_AS(WarpedMetric(0.5), std::invalid_argument);
}

TEST_CASE("finite differences agree with the closed form", "[warped]") {
  hypwarp::testing::Rng rng(41);
  double worst = 0.0;
  for (const double ell : {1.0, 2.0, 3.0}) {
    const WarpedMetric m(ell, CutoffSpec::smoothstep(0.5, 6.0));
    for (double t : {0.0, 0.25, 0.45, 0.8, 2.0, 3.5, 5.9, 8.0, 12.0}) {
      for (int k = 0; k < 4; ++k) {
        const Point3 X(rng.gauss(), rng.gauss(), rng.gauss()), Y(rng.gauss(), rng.gauss(), rng.gauss());
        const double fd = fd_riemann_oracle(m, t, X, Y);
        const double exact = sectional_curvature(m, {t, plane_mix(m, t, X, Y)});
        worst = std::max(worst, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
      }
    }
  }
  CHECK(worst <= kFdTol);
}

TEST_CASE("finite difference oracle sees constant curvature -1 for ell = 1", "[warped]") {
  const WarpedMetric m(1.0);
  const Point3 X(1.0, 0.0, 0.0), Y(0.0, 0.3, 1.0);
  CHECK_THAT(fd_riemann_oracle(m, 1.0, X, Y), WithinAbs(-1.0, 1e-6));
}
