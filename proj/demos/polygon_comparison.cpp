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

// Compares the chords of the regular right-angled pentagon with the same
// polygon data traced in curvature -4.

#include <cmath>
#include <cstdio>
#include <numbers>

#include "hypwarp/comparison.hpp"

int main() {
  using namespace hypwarp::comparison;
  const double side = std::acosh(std::numbers::phi);
  const ComparisonPolygon pentagon{{side, side, side, side, side}, {0.5 * std::numbers::pi, 0.5 * std::numbers::pi,
                                                                     0.5 * std::numbers::pi, 0.5 * std::numbers::pi,
                                                                     0.5 * std::numbers::pi}};
  std::printf("closure defect %.3e\n", closure_defect(pentagon));

  const auto verdict = polygon_chord_induction(pentagon, space_form_provider(pentagon, ModelSpace(4.0)));
  for (const auto& c : verdict.chords) {
    std::printf("chord %zu-%zu  model %.9f  curvature -4 %.9f%s\n", c.i, c.j, c.model_length, c.test_length,
                c.equality ? "  (equal)" : "");
  }
  return 0;
}
