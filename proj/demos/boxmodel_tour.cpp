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

// Builds a small box model cube in H^3, develops its boundary and prints
// the shape data that the enclosure search compares against.

#include <cstdio>

#include "hypwarp/developing.hpp"
#include "hypwarp/region.hpp"

int main() {
  using namespace hypwarp;
  const double eps = 0.1;
  const HCube cube = box_model(3, eps);
  const CubeShape shape = cube_shape(cube);

  std::printf("box model, eps = %.3f (largest admissible: %.6f)\n", eps, box_model_eps_max(3));
  std::printf("  edge length    %.12f\n", shape.edge_length[0][0]);
  std::printf("  vertex angle   %.12f\n", shape.vertex_angle[0][0][1]);
  std::printf("  dihedral angle %.12f\n", dihedral_angle(cube, 0, 2));

  const auto dev = develop_boundary(cube, 0, Isometry::identity(3));
  std::printf("development: %zu paths, holonomy defect %.3e\n", dev.paths_checked, dev.holonomy_defect);

  // A slightly larger cube is close in shape but not identical.
  std::printf("delta_close to eps = 0.11: %.6f\n", delta_close(cube, box_model(3, 0.11)));
  return 0;
}
