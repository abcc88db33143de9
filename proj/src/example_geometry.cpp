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

#include "arraymom/example_geometry.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "arraymom/quadrature.hpp"

namespace arraymom {

namespace {

// Collects unit grid quads, then emits triangles in a fixed spatial order so
// that any two meshes containing the same quads agree on the relative order
// of edge-adjacent triangles (and therefore on RWG plus/minus assignment).
class QuadMesher {
 public:
  explicit QuadMesher(double pitch) : h_(pitch) {}

  // Grid cell (i, j) at height z covers [i*h,(i+1)*h] x [j*h,(j+1)*h].
  void addCell(int i, int j, double z) { cells_.insert({z, j, i}); }

  void addRect(int i0, int i1, int j0, int j1, double z) {
    for (int j = j0; j < j1; ++j)
      for (int i = i0; i < i1; ++i) addCell(i, j, z);
  }

  TriangleMesh build() const {
    TriangleMesh mesh;
    std::map<std::tuple<double, double, double>, int> vid;
    auto vertex = [&](double x, double y, double z) {
      auto [it, inserted] = vid.try_emplace({x, y, z}, mesh.vertexCount() + 1);
      if (inserted) mesh.vertices.emplace_back(x, y, z);
      return it->second;
    };
    for (const auto& [z, j, i] : cells_) {
      const double x0 = i * h_, x1 = (i + 1) * h_;
      const double y0 = j * h_, y1 = (j + 1) * h_;
      const int a = vertex(x0, y0, z), b = vertex(x1, y0, z);
      const int c = vertex(x1, y1, z), d = vertex(x0, y1, z);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
    return mesh;
  }

 private:
  double h_;
  std::set<std::tuple<double, int, int>> cells_;  // (z, j, i), deduplicated
};

void addArrayLayers(QuadMesher& q, const StripCrossParams& p, int nx, int ny) {
  const int n = p.groundDivisions;
  if (p.ground) q.addRect(-1, nx * n + 1, -1, ny * n + 1, 0.0);
  if (p.connectX)
    for (int r = 0; r < ny; ++r)
      q.addRect(-1, nx * n + 1, r * n + p.stripLo, r * n + p.stripLo + p.stripWidth,
                p.stripHeight);
  if (p.connectY)
    for (int c = 0; c < nx; ++c)
      q.addRect(c * n + p.stripLo, c * n + p.stripLo + p.stripWidth, -1,
                ny * n + 1, p.stripHeight);
}

}  // namespace

StripCrossParams stripYOnlyParams() {
  StripCrossParams p;
  p.groundDivisions = 8;
  p.ground = false;
  p.connectX = false;
  p.connectY = true;
  p.stripLo = 3;  // centered: band [3h, 5h] of an 8h cell
  p.stripWidth = 2;
  return p;
}

TriangleMesh makeElementMarginMesh(const StripCrossParams& p) {
  return makeArrayMesh(p, 1, 1);
}

TriangleMesh makeArrayMesh(const StripCrossParams& p, int nx, int ny) {
  if (nx < 1 || ny < 1) throw UserError("makeArrayMesh: nx, ny must be >= 1");
  if (p.stripLo < 0 || p.stripLo + p.stripWidth > p.groundDivisions)
    throw UserError("makeArrayMesh: strip band exceeds the cell");
  QuadMesher q(p.h());
  addArrayLayers(q, p, nx, ny);
  TriangleMesh mesh = q.build();
  validateMesh(mesh);
  return mesh;
}

std::array<BoundingBox, 9> componentBoxes(const StripCrossParams& p) {
  const double d = p.cell, m = p.margin();
  const double zlo = -1.0, zhi = 1.0;
  auto box = [&](double x0, double x1, double y0, double y1) {
    BoundingBox b;
    b.min = Vec3(x0, y0, zlo);
    b.max = Vec3(x1, y1, zhi);
    return b;
  };
  // Component layout (column-major, bottom-up):   3 6 9
  //                                               2 5 8
  //                                               1 4 7
  return {box(-m, 0, -m, 0),    // 1 bottom-left corner
          box(-m, 0, 0, d),     // 2 left edge
          box(-m, 0, d, d + m), // 3 top-left corner
          box(0, d, -m, 0),     // 4 bottom edge
          box(0, d, 0, d),      // 5 element
          box(0, d, d, d + m),  // 6 top edge
          box(d, d + m, -m, 0), // 7 bottom-right corner
          box(d, d + m, 0, d),  // 8 right edge
          box(d, d + m, d, d + m)};  // 9 top-right corner
}

TriangleMesh makeBowtieMesh(double wing, double halfHeight, int refine) {
  // Two wings meeting at (wing, 0).
  std::vector<std::array<Vec3, 3>> tris;
  const Vec3 center(wing, 0.0, 0.0);
  std::vector<std::array<Vec3, 3>> seed = {
      {Vec3(0.0, -halfHeight, 0.0), Vec3(0.0, halfHeight, 0.0), center},
      {center, Vec3(2 * wing, -halfHeight, 0.0), Vec3(2 * wing, halfHeight, 0.0)}};
  for (const auto& t : seed) {
    std::vector<std::array<Vec3, 3>> out;
    subdivideTriangle(t, refine, out);
    tris.insert(tris.end(), out.begin(), out.end());
  }

  TriangleMesh mesh;
  std::map<std::tuple<double, double, double>, int> vid;
  auto vertex = [&](const Vec3& v) {
    auto [it, inserted] =
        vid.try_emplace({v.x(), v.y(), v.z()}, mesh.vertexCount() + 1);
    if (inserted) mesh.vertices.push_back(v);
    return it->second;
  };
  for (const auto& t : tris)
    mesh.triangles.push_back({vertex(t[0]), vertex(t[1]), vertex(t[2])});
  validateMesh(mesh);
  return mesh;
}

TriangleMesh makePlateMesh(int nx, int ny, double lx, double ly, double z) {
  TriangleMesh mesh;
  std::map<std::tuple<double, double, double>, int> vid;
  auto vertex = [&](double x, double y) {
    auto [it, inserted] = vid.try_emplace({x, y, z}, mesh.vertexCount() + 1);
    if (inserted) mesh.vertices.emplace_back(x, y, z);
    return it->second;
  };
  const double hx = lx / nx, hy = ly / ny;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int a = vertex(i * hx, j * hy), b = vertex((i + 1) * hx, j * hy);
      const int c = vertex((i + 1) * hx, (j + 1) * hy), d = vertex(i * hx, (j + 1) * hy);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  validateMesh(mesh);
  return mesh;
}

}  // namespace arraymom
