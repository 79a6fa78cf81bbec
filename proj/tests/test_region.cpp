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
#include "hypwarp/region.hpp"
#include "support.hpp"

using namespace hypwarp;
using Catch::Matchers::WithinAbs;

TEST_CASE("adjacent box model normals pair to -sinh^2 eps", "[region]") {
  const std::pair<double, double> cases[] = {
      {0.05, -0.0025020840279017995}, {0.1, -0.010033377809537923}, {0.3, -0.092732609121133852}};
  for (auto [eps, expected] : cases) {
    const HCube c = box_model(3, eps);
    for (std::size_t a = 0; a < 6; ++a)
      for (std::size_t b = a + 1; b < 6; ++b)
        if (c.faces_adjacent(a, b)) CHECK_THAT(mink_inner(c.face(a).normal(), c.face(b).normal()), WithinAbs(expected, 1e-12));
  }
}

TEST_CASE("box model edge lengths and vertex angles", "[region]") {
  const CubeShape s = cube_shape(box_model(3, 0.1));
  for (double e : s.all_edge_lengths()) CHECK_THAT(e, WithinAbs(0.20203052288971357, 1e-9));
  for (double a : s.all_vertex_angles()) CHECK_THAT(a, WithinAbs(1.5606610865117441, 1e-9));
}

TEST_CASE("box model vertex angles approach pi/2", "[region]") {
  const CubeShape s = cube_shape(box_model(3, 1e-3));
  for (double a : s.all_vertex_angles()) CHECK_THAT(a - std::numbers::pi / 2, WithinAbs(-1.000001333e-6, 1e-10));
}

TEST_CASE("box model center is eps from every face", "[region]") {
  testing::Rng rng(21);
  const HPoint c = rng.point(3);
  std::vector<MinkowskiVec> vs;
  for (int i = 0; i < 3; ++i) vs.push_back(rng.unit_tangent(c).dir());
  const auto frame = complete_frame(c, orthonormalize(c, vs));
  const HCube cube = box_model(c, frame, 0.2);
  for (const auto& f : cube.faces()) CHECK_THAT(signed_dist(c, f), WithinAbs(-0.2, 1e-12));
  CHECK(cube.contains(c));
}

TEST_CASE("box model size limit", "[region]") {
  CHECK_THAT(box_model_eps_max(3), WithinAbs(0.65847894846240835, 1e-9));
  CHECK_THROWS_AS(box_model(3, 0.7), GeometryError);
  CHECK_THROWS_AS(box_model(3, 0.0), GeometryError);
}

TEST_CASE("delta closeness of box models", "[region]") {
  const HCube a = box_model(3, 0.1), b = box_model(3, 0.11);
  CHECK_THAT(delta_close(a, b), WithinAbs(0.020680815377509459, 1e-9));
  CHECK(delta_close(a, a) <= 1e-12);
  CHECK(delta_close_lower_bound(cube_shape(a), cube_shape(b)) <= delta_close(a, b) + 1e-15);
}

TEST_CASE("delta closeness ignores placement and labeling", "[region]") {
  testing::Rng rng(22);
  const HCube a = box_model(3, 0.2);
  const HCube moved = a.transformed(rng.isometry(3));
  CHECK(delta_close(a, moved) <= 1e-9);
  // Relabel faces: swap axes 0 and 2 and flip axis 1.
  std::vector<Hyperplane> faces{a.face(4), a.face(5), a.face(3), a.face(2), a.face(0), a.face(1)};
  CHECK(delta_close(a, HCube::from_faces(3, faces)) <= 1e-9);
}

TEST_CASE("cube from faces orients normals outward", "[region]") {
  const HCube a = box_model(3, 0.2);
  std::vector<Hyperplane> faces;
  for (const auto& f : a.faces()) faces.push_back(f.flipped());
  const HCube b = HCube::from_faces(3, faces);
  for (std::size_t f = 0; f < 6; ++f) CHECK(b.face(f).pairing(b.centroid()) < 0.0);
  for (std::size_t m = 0; m < 8; ++m) CHECK(dist(a.vertex(m), b.vertex(m)) <= 1e-12);
}

TEST_CASE("degenerate face sets are rejected", "[region]") {
  const HCube a = box_model(3, 0.2);
  std::vector<Hyperplane> faces = a.faces();
  faces[2] = faces[0];
  CHECK_THROWS_AS(HCube::from_faces(3, faces), GeometryError);
  faces.pop_back();
  CHECK_THROWS_AS(HCube::from_faces(3, faces), GeometryError);
}

TEST_CASE("vertex and face bookkeeping", "[region]") {
  const HCube c = box_model(3, 0.2);
  CHECK(c.num_vertices() == 8);
  CHECK(c.num_faces() == 6);
  for (std::size_t f = 0; f < 6; ++f) {
    CHECK(c.face_vertices(f).size() == 4);
    for (auto m : c.face_vertices(f)) CHECK(std::abs(c.face(f).pairing(c.vertex(m))) <= 1e-12);
  }
  CHECK(c.faces_adjacent(0, 2));
  CHECK_FALSE(c.faces_adjacent(0, 1));
  CHECK(c.ridge_vertices(0, 2).size() == 2);
}

TEST_CASE("geodesic crossing of a box model face", "[region]") {
  const HCube c = box_model(3, 0.1);
  const double th = std::numbers::pi / 6;
  const HPoint o = HPoint::origin(3);
  const Geodesic g = Geodesic::through(HTangent(o, MinkowskiVec{0.0, std::cos(th), std::sin(th), 0.0}));
  const auto hit = geodesic_hits_hyperplane(g, c.face(HCube::face_index(0, true)));
  REQUIRE(hit);
  CHECK_THAT(hit->param, WithinAbs(0.11559886918459030, 1e-12));
  CHECK_THAT(hit->angle, WithinAbs(1.0443059757216271, 1e-12));

  const Geodesic axis = testing::axis_geodesic();
  const auto straight = geodesic_hits_hyperplane(axis, c.face(0));
  REQUIRE(straight);
  CHECK_THAT(straight->angle, WithinAbs(std::numbers::pi / 2, 1e-7));
  CHECK_FALSE(geodesic_hits_hyperplane(axis, c.face(2)));
}

TEST_CASE("a geodesic inside a hyperplane is an error", "[region]") {
  const HPoint o = HPoint::origin(3);
  const Hyperplane h(MinkowskiVec{0.0, 0.0, 0.0, 1.0});
  CHECK_THROWS_AS(geodesic_hits_hyperplane(Geodesic::through(HTangent(o, MinkowskiVec::basis(4, 1))), h),
                  GeometryError);
}

TEST_CASE("segments only report crossings within their length", "[region]") {
  const HPoint o = HPoint::origin(3);
  const Hyperplane h(MinkowskiVec{std::sinh(1.0), std::cosh(1.0), 0.0, 0.0});  // orthogonal to e_1 at distance 1
  const Geodesic g = testing::axis_geodesic();
  CHECK(geodesic_hits_hyperplane(GeodesicSegment::between(o, g.at(2.0)), h));
  CHECK_FALSE(geodesic_hits_hyperplane(GeodesicSegment::between(o, g.at(0.5)), h));
}

TEST_CASE("signed distance and ultraparallel gap", "[region]") {
  const Geodesic g = testing::axis_geodesic();
  const auto plane_at = [&](double s) { return hyperplane_through(g.at(s), g.tangent_at(s)); };
  const Hyperplane a = plane_at(0.0), b = plane_at(0.7);
  CHECK(hyperplanes_disjoint(a, b));
  CHECK_THAT(hyperplane_gap(a, b), WithinAbs(0.7, 1e-12));
  CHECK_THAT(signed_dist(g.at(0.7), a), WithinAbs(0.7, 1e-12));
  const auto [fa, fb] = common_perpendicular(a, b);
  CHECK(dist(fa, g.at(0.0)) <= 1e-9);
  CHECK(dist(fb, g.at(0.7)) <= 1e-9);
  CHECK_THROWS_AS(common_perpendicular(a, Hyperplane(MinkowskiVec{0.0, 0.0, 1.0, 0.0})), GeometryError);
}
