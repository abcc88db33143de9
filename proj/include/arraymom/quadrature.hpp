// Copyright 2026 arraymom authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ARRAYMOM_QUADRATURE_HPP
#define ARRAYMOM_QUADRATURE_HPP

#include <array>
#include <vector>

#include "arraymom/common.hpp"

namespace arraymom {

// Symmetric Gauss rules on the reference triangle, in barycentric
// coordinates. Weights sum to 1; scale by the triangle area.
struct TriQuadPoint {
  double l0, l1, l2;
  double weight;
};

// Supported point counts: 1, 3, 4, 6, 7 (polynomial degrees 1..5). The
// points of every supported rule are strictly interior. Throws UserError for
// an unsupported count.
const std::vector<TriQuadPoint>& triangleRule(int points);

inline Vec3 barycentricPoint(const std::array<Vec3, 3>& v,
                             const TriQuadPoint& q) {
  return q.l0 * v[0] + q.l1 * v[1] + q.l2 * v[2];
}

// Splits a triangle into 4^depth congruent subtriangles (midpoint
// refinement), appending them to out.
void subdivideTriangle(const std::array<Vec3, 3>& v, int depth,
                       std::vector<std::array<Vec3, 3>>& out);

}  // namespace arraymom

#endif  // ARRAYMOM_QUADRATURE_HPP
