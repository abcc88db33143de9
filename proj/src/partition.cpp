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

#include "arraymom/partition.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace arraymom {

bool BoundingBox::containsHalfOpen(const Vec3& p, const Vec3& globalMax) const {
  for (int a = 0; a < 3; ++a) {
    if (p[a] < min[a]) return false;
    if (p[a] > max[a]) return false;
    if (p[a] == max[a] && max[a] != globalMax[a]) return false;
  }
  return true;
}

void BoundingBox::validate() const {
  for (int a = 0; a < 3; ++a)
    if (min[a] > max[a])
      throw UserError("bounding box has min > max on axis " + std::to_string(a));
}

std::vector<int> intrinsicTriangleIndices(const std::vector<int>& globalTris,
                                          const std::vector<int>& perEdgeTris) {
  std::unordered_map<int, int> pos;  // global id -> 1-based position
  pos.reserve(globalTris.size());
  for (size_t j = 0; j < globalTris.size(); ++j)
    pos[globalTris[j]] = static_cast<int>(j) + 1;

  std::vector<int> out(perEdgeTris.size());
  for (size_t m = 0; m < perEdgeTris.size(); ++m) {
    const auto it = pos.find(perEdgeTris[m]);
    if (it == pos.end())
      throw UserError("per-edge triangle " + std::to_string(perEdgeTris[m]) +
                      " is not part of the subdomain triangle set");
    out[m] = it->second;
  }
  return out;
}

namespace {

int freeCorner(const TriangleMesh& mesh, int tri, const std::array<int, 2>& ev) {
  const auto& t = mesh.tri(tri);
  for (int c = 0; c < 3; ++c)
    if (t[c] != ev[0] && t[c] != ev[1]) return c;
  throw UserError("triangle " + std::to_string(tri) +
                  " does not contain a vertex off its own edge");
}

}  // namespace

DesignatedData buildDesignatedData(const TriangleMesh& mesh,
                                   const RwgBasis& basis,
                                   const std::vector<int>& edgeIds) {
  DesignatedData d;
  d.globalEdges = edgeIds;
  d.globalPlusTris.reserve(edgeIds.size());
  d.globalMinusTris.reserve(edgeIds.size());
  for (int e : edgeIds) {
    const RwgEdge& edge = basis.edge(e);
    d.globalPlusTris.push_back(edge.plusTriangle);
    d.globalMinusTris.push_back(edge.minusTriangle);
  }

  d.globalTris = d.globalPlusTris;
  d.globalTris.insert(d.globalTris.end(), d.globalMinusTris.begin(),
                      d.globalMinusTris.end());
  std::sort(d.globalTris.begin(), d.globalTris.end());
  d.globalTris.erase(std::unique(d.globalTris.begin(), d.globalTris.end()),
                     d.globalTris.end());

  d.intrinsicPlus = intrinsicTriangleIndices(d.globalTris, d.globalPlusTris);
  d.intrinsicMinus = intrinsicTriangleIndices(d.globalTris, d.globalMinusTris);

  d.triVerts.reserve(d.globalTris.size());
  d.triAreas.reserve(d.globalTris.size());
  d.triCentroids.reserve(d.globalTris.size());
  for (int t : d.globalTris) {
    d.triVerts.push_back(
        {mesh.triVertex(t, 0), mesh.triVertex(t, 1), mesh.triVertex(t, 2)});
    d.triAreas.push_back(mesh.triArea(t));
    d.triCentroids.push_back(mesh.triCentroid(t));
  }

  d.edgeLengths.reserve(edgeIds.size());
  d.edgeCenters.reserve(edgeIds.size());
  d.plusFreeCorner.reserve(edgeIds.size());
  d.minusFreeCorner.reserve(edgeIds.size());
  for (int e : edgeIds) {
    const RwgEdge& edge = basis.edge(e);
    d.edgeLengths.push_back(edge.length);
    d.edgeCenters.push_back(edge.center);
    d.plusFreeCorner.push_back(freeCorner(mesh, edge.plusTriangle, edge.vertices));
    d.minusFreeCorner.push_back(
        freeCorner(mesh, edge.minusTriangle, edge.vertices));
  }
  return d;
}

std::vector<DesignatedData> partitionByBoxes(
    const TriangleMesh& mesh, const RwgBasis& basis,
    const std::vector<BoundingBox>& boxes) {
  if (boxes.empty()) throw UserError("partitionByBoxes: no boxes given");
  Vec3 globalMax = Vec3::Constant(-std::numeric_limits<double>::infinity());
  for (const BoundingBox& b : boxes) {
    b.validate();
    globalMax = globalMax.cwiseMax(b.max);
  }

  std::vector<std::vector<int>> edgesPerBox(boxes.size());
  std::string uncovered;
  for (int e = 1; e <= basis.edgeCount(); ++e) {
    const Vec3& c = basis.edge(e).center;
    int owner = -1;
    for (size_t b = 0; b < boxes.size(); ++b) {
      if (!boxes[b].containsHalfOpen(c, globalMax)) continue;
      if (owner >= 0)
        throw UserError("edge " + std::to_string(e) + " center lies in boxes " +
                        std::to_string(owner + 1) + " and " +
                        std::to_string(b + 1));
      owner = static_cast<int>(b);
    }
    if (owner < 0) {
      uncovered += (uncovered.empty() ? "" : ", ") + std::to_string(e);
      continue;
    }
    edgesPerBox[owner].push_back(e);
  }
  if (!uncovered.empty())
    throw UserError("edge centers covered by no box: edges " + uncovered);

  std::vector<DesignatedData> out;
  out.reserve(boxes.size());
  for (const auto& ids : edgesPerBox)
    out.push_back(buildDesignatedData(mesh, basis, ids));
  return out;
}

}  // namespace arraymom
