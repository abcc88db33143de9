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

#ifndef ARRAYMOM_MESH_HPP
#define ARRAYMOM_MESH_HPP

#include <array>
#include <string>
#include <vector>

#include "arraymom/common.hpp"

namespace arraymom {

// Triangles smaller than this (in m^2) are rejected as degenerate.
inline constexpr double kAreaEpsilon = 1e-12;

// Triangular surface mesh. Vertex coordinates are in meters. Triangle and
// vertex indices used in the public interface are 1-based; the tri() and
// vertex() accessors take 1-based indices.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;  // 1-based vertex indices

  int vertexCount() const { return static_cast<int>(vertices.size()); }
  int triangleCount() const { return static_cast<int>(triangles.size()); }

  const Vec3& vertex(int v) const { return vertices[v - 1]; }
  const std::array<int, 3>& tri(int t) const { return triangles[t - 1]; }

  Vec3 triVertex(int t, int corner) const {
    return vertex(triangles[t - 1][corner]);
  }
  Vec3 triCentroid(int t) const;
  double triArea(int t) const;
};

// One RWG basis function, attached to an interior mesh edge. The plus
// triangle is the one with the lower triangle index, which makes the
// orientation independent of geometry.
struct RwgEdge {
  int edgeIndex = 0;            // 1..N
  std::array<int, 2> vertices;  // sorted (min, max) 1-based vertex ids
  int plusTriangle = 0;         // 1-based triangle id
  int minusTriangle = 0;
  double length = 0.0;  // meters
  Vec3 center = Vec3::Zero();
};

struct RwgBasis {
  std::vector<RwgEdge> edges;  // ordered by (min vertex, max vertex)
  int edgeCount() const { return static_cast<int>(edges.size()); }
  const RwgEdge& edge(int e) const { return edges[e - 1]; }
};

// Reads the `mesh v1` text format (see README). Throws UserError on parse or
// validation failures (degenerate triangle, dangling vertex index).
TriangleMesh loadMesh(const std::string& path);

// Parses mesh text from a string; loadMesh is a thin file wrapper around it.
TriangleMesh parseMesh(const std::string& text, const std::string& origin);

// Writes the same format back out, deterministically.
void saveMesh(const TriangleMesh& mesh, const std::string& path);

void validateMesh(const TriangleMesh& mesh);

// Enumerates interior (two-triangle) edges as RWG basis functions, ordered by
// (min vertex index, max vertex index). Boundary edges are skipped; an edge
// shared by more than two triangles raises UserError naming the edge.
RwgBasis buildRwgBasis(const TriangleMesh& mesh);

}  // namespace arraymom

#endif  // ARRAYMOM_MESH_HPP
