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

#include "arraymom/quadrature.hpp"

namespace arraymom {

namespace {

std::vector<TriQuadPoint> makeRule(int points) {
  auto orbit1 = [](std::vector<TriQuadPoint>& r, double w) {
    r.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, w});
  };
  // Three permutations of (a, b, b), a + 2b = 1.
  auto orbit3 = [](std::vector<TriQuadPoint>& r, double a, double w) {
    const double b = 0.5 * (1.0 - a);
    r.push_back({a, b, b, w});
    r.push_back({b, a, b, w});
    r.push_back({b, b, a, w});
  };

  std::vector<TriQuadPoint> r;
  switch (points) {
    case 1:  // degree 1
      orbit1(r, 1.0);
      break;
    case 3:  // degree 2, interior variant
      orbit3(r, 2.0 / 3.0, 1.0 / 3.0);
      break;
    case 4:  // degree 3 (negative centroid weight)
      orbit1(r, -27.0 / 48.0);
      orbit3(r, 0.6, 25.0 / 48.0);
      break;
    case 6:  // degree 4
      orbit3(r, 0.108103018168070, 0.223381589678011);
      orbit3(r, 0.816847572980459, 0.109951743655322);
      break;
    case 7:  // degree 5
      orbit1(r, 0.225);
      orbit3(r, 0.059715871789770, 0.132394152788506);
      orbit3(r, 0.797426985353087, 0.125939180544827);
      break;
    default:
      throw UserError("unsupported triangle quadrature point count: " +
                      std::to_string(points));
  }
  return r;
}

}  // namespace

const std::vector<TriQuadPoint>& triangleRule(int points) {
  static const std::vector<TriQuadPoint> r1 = makeRule(1);
  static const std::vector<TriQuadPoint> r3 = makeRule(3);
  static const std::vector<TriQuadPoint> r4 = makeRule(4);
  static const std::vector<TriQuadPoint> r6 = makeRule(6);
  static const std::vector<TriQuadPoint> r7 = makeRule(7);
  switch (points) {
    case 1: return r1;
    case 3: return r3;
    case 4: return r4;
    case 6: return r6;
    case 7: return r7;
    default:
      throw UserError("unsupported triangle quadrature point count: " +
                      std::to_string(points));
  }
}

void subdivideTriangle(const std::array<Vec3, 3>& v, int depth,
                       std::vector<std::array<Vec3, 3>>& out) {
  if (depth <= 0) {
    out.push_back(v);
    return;
  }
  const Vec3 m01 = 0.5 * (v[0] + v[1]);
  const Vec3 m12 = 0.5 * (v[1] + v[2]);
  const Vec3 m20 = 0.5 * (v[2] + v[0]);
  subdivideTriangle({v[0], m01, m20}, depth - 1, out);
  subdivideTriangle({m01, v[1], m12}, depth - 1, out);
  subdivideTriangle({m20, m12, v[2]}, depth - 1, out);
  subdivideTriangle({m01, m12, m20}, depth - 1, out);
}

}  // namespace arraymom
