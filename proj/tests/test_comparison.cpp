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
#include <vector>

#include "catch_amalgamated.hpp"
#include "hypwarp/comparison.hpp"
#include "support.hpp"

using namespace hypwarp;
using namespace hypwarp::comparison;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kRightPentagonSide = 1.0612750619050357;

ComparisonPolygon right_pentagon() {
  return {std::vector<double>(5, kRightPentagonSide), std::vector<double>(5, std::numbers::pi / 2)};
}

}  // namespace

TEST_CASE("law of cosines reference values", "[comparison]") {
  const double right = std::numbers::pi / 2;
  CHECK_THAT(law_of_cosines(ModelSpace(1.0), 1.0, 1.0, right), WithinAbs(1.5133740065965040, 1e-14));
  CHECK_THAT(law_of_cosines(ModelSpace(4.0), 1.0, 1.0, right), WithinAbs(1.6709512240946382, 1e-14));
  CHECK_THAT(law_of_cosines(ModelSpace(1.0), 1.0, 1.0, 0.9187978721780274), WithinAbs(1.0, 1e-13));
}

TEST_CASE("law of cosines degenerate cases", "[comparison]") {
  const ModelSpace h(1.0);
  CHECK_THAT(law_of_cosines(h, 0.7, 0.2, 0.0), WithinAbs(0.5, 1e-14));
  CHECK_THAT(law_of_cosines(h, 0.7, 0.2, std::numbers::pi), WithinAbs(0.9, 1e-14));
  CHECK_THAT(law_of_cosines(h, 1e-9, 1e-9, std::numbers::pi / 2), WithinAbs(std::sqrt(2.0) * 1e-9, 1e-22));
  CHECK_THROWS_AS(law_of_cosines(h, -1.0, 1.0, 1.0), GeometryError);
  CHECK_THROWS_AS(ModelSpace(0.5), GeometryError);
}

TEST_CASE("opposite angle inverts the law of cosines", "[comparison]") {
  testing::Rng rng(51);
  for (int i = 0; i < 200; ++i) {
    const ModelSpace m(rng.uniform(1.0, 5.0));
    const double a = rng.uniform(0.05, 3.0), b = rng.uniform(0.05, 3.0), g = rng.uniform(0.05, 3.0);
    const double c = law_of_cosines(m, a, b, g);
    REQUIRE_THAT(opposite_angle(m, a, b, c), WithinAbs(g, 1e-7));
  }
}

TEST_CASE("third side grows with curvature", "[comparison]") {
  testing::Rng rng(52);
  for (int i = 0; i < 100; ++i) {
    const double a = rng.uniform(0.1, 3.0), b = rng.uniform(0.1, 3.0), g = rng.uniform(0.1, 3.0);
    const double k = rng.uniform(1.01, 10.0);
    const TriangleComparison r = triangle_compare(ModelSpace(k), a, b, g);
    REQUIRE(r.c_k > r.c_model + 1e-10);
    REQUIRE_FALSE(r.equality);
  }
}

TEST_CASE("triangle comparison equality exactly in the curvature band", "[comparison]") {
  CHECK(triangle_compare(ModelSpace(1.0), 1.0, 1.0, 1.0).equality);
  CHECK(triangle_compare(ModelSpace(1.0 + 0.5e-6), 1.0, 1.0, 1.0).equality);
  CHECK_FALSE(triangle_compare(ModelSpace(1.0 + 2e-6), 1.0, 1.0, 1.0).equality);
  CHECK_THROWS_AS(triangle_compare(ModelSpace(1.0), 1.0, 1.0, 0.0), GeometryError);
  CHECK_THROWS_AS(triangle_compare(ModelSpace(1.0), 0.0, 1.0, 1.0), GeometryError);
}

TEST_CASE("right-angled pentagon closes up", "[comparison]") {
  const auto p = right_pentagon();
  CHECK(closure_defect(p) <= 1e-12);
  const auto v = realize_polygon(p);
  REQUIRE(v.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK_THAT(dist(v[i], v[(i + 1) % 5]), WithinAbs(kRightPentagonSide, 1e-12));
}

TEST_CASE("polygons that do not close are rejected", "[comparison]") {
  ComparisonPolygon p = right_pentagon();
  p.sides[0] += 1e-3;
  CHECK_THROWS_AS(realize_polygon(p), GeometryError);
  CHECK_THROWS_AS((ComparisonPolygon{{1.0, 1.0}, {1.0, 1.0}}.validate()), GeometryError);
  CHECK_THROWS_AS((ComparisonPolygon{{1.0, 1.0, 1.0}, {1.0, 1.0, 4.0}}.validate()), GeometryError);
}

TEST_CASE("chord induction on the right-angled pentagon", "[comparison]") {
  const auto p = right_pentagon();
  const ComparisonVerdict self = polygon_chord_induction(p, realized_provider(p));
  CHECK(self.all_equal());
  CHECK_FALSE(self.first_strict);
  CHECK(self.chords.size() == 10);

  const ComparisonVerdict k4 = polygon_chord_induction(p, space_form_provider(p, ModelSpace(4.0)));
  REQUIRE(k4.first_strict);
  const ChordVerdict& c = k4.chords[*k4.first_strict];
  CHECK(c.span == 2);
  CHECK(c.test_length > c.model_length);
  for (const auto& ch : k4.chords) CHECK(ch.test_length >= ch.model_length - kPolyTol);
}

TEST_CASE("chord induction on random convex polygons", "[comparison]") {
  testing::Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t sides = trial % 2 == 0 ? 5 : 6;
    const auto p = testing::random_convex_polygon(rng, sides, rng.uniform(0.5, 2.0));
    REQUIRE(closure_defect(p) <= 1e-9);
    const ComparisonVerdict self = polygon_chord_induction(p, realized_provider(p));
    CHECK(self.all_equal());
    const ComparisonVerdict k4 = polygon_chord_induction(p, space_form_provider(p, ModelSpace(4.0)));
    for (const auto& ch : k4.chords) CHECK(ch.test_length >= ch.model_length - kPolyTol);
    CHECK(k4.first_strict);
  }
}

TEST_CASE("a short chord is a comparison violation", "[comparison]") {
  const auto p = right_pentagon();
  const auto honest = realized_provider(p);
  const ChordProvider shrunk = [&](std::size_t i, std::size_t span) {
    return span == 2 && i == 3 ? honest(i, span) - 1e-3 : honest(i, span);
  };
  CHECK_THROWS_AS(polygon_chord_induction(p, shrunk), ComparisonViolation);
}

TEST_CASE("space form provider at k = 1 reproduces the realization", "[comparison]") {
  testing::Rng rng(54);
  const auto p = testing::random_convex_polygon(rng, 6, 1.2);
  const auto a = realized_provider(p);
  const auto b = space_form_provider(p, ModelSpace(1.0));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t m = 1; m <= 3; ++m) CHECK_THAT(a(i, m), WithinAbs(b(i, m), 1e-9));
}
