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

#ifndef ARRAYMOM_PARTITION_HPP
#define ARRAYMOM_PARTITION_HPP

#include <array>
#include <vector>

#include "arraymom/mesh.hpp"

namespace arraymom {

// Axis-aligned box. Membership is half-open, [min, max) per axis; the
// partitioning routine closes the upper bound on the axes where a box's max
// equals the global max of all boxes, so every point belongs to at most one
// box of a tiling.
struct BoundingBox {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  bool containsHalfOpen(const Vec3& p, const Vec3& globalMax) const;
  void validate() const;  // min <= max componentwise
};

// Per-subdomain bundle of global and intrinsic edge/triangle index sets plus
// a local geometry cache, so impedance blocks between two subdomains can be
// computed without the source mesh. All indices are 1-based.
struct DesignatedData {
  std::vector<int> globalEdges;      // subdomain edge ids in the source basis
  std::vector<int> globalPlusTris;   // per edge, source-mesh triangle id
  std::vector<int> globalMinusTris;
  std::vector<int> globalTris;       // deduplicated, sorted ascending

  std::vector<int> intrinsicPlus;    // per edge, values in 1..triCount()
  std::vector<int> intrinsicMinus;

  // Geometry cache over the intrinsic triangles / edges.
  std::vector<std::array<Vec3, 3>> triVerts;
  std::vector<double> triAreas;
  std::vector<Vec3> triCentroids;
  std::vector<double> edgeLengths;
  std::vector<Vec3> edgeCenters;
  std::vector<int> plusFreeCorner;   // 0..2, free-vertex slot within T+
  std::vector<int> minusFreeCorner;

  int edgeCount() const { return static_cast<int>(globalEdges.size()); }
  int triCount() const { return static_cast<int>(globalTris.size()); }
  bool empty() const { return globalEdges.empty(); }
};

// Relabels per-edge global triangle ids into positions within globalTris
// (kept sorted), i.e. globalTris[result[m]-1] == perEdgeTris[m-1]. Throws
// UserError if a per-edge triangle is absent from globalTris.
std::vector<int> intrinsicTriangleIndices(const std::vector<int>& globalTris,
                                          const std::vector<int>& perEdgeTris);

// Builds the designated data of one subdomain from an explicit edge id list.
DesignatedData buildDesignatedData(const TriangleMesh& mesh,
                                   const RwgBasis& basis,
                                   const std::vector<int>& edgeIds);

// Assigns each basis edge to the box containing its geometric center (the
// midpoint of its endpoints) and returns one DesignatedData per box, in box
// order. Boxes may be empty. Throws UserError when an edge center is covered
// by no box or by more than one.
std::vector<DesignatedData> partitionByBoxes(
    const TriangleMesh& mesh, const RwgBasis& basis,
    const std::vector<BoundingBox>& boxes);

}  // namespace arraymom

#endif  // ARRAYMOM_PARTITION_HPP
