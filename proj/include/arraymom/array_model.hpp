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

#ifndef ARRAYMOM_ARRAY_MODEL_HPP
#define ARRAYMOM_ARRAY_MODEL_HPP

#include <array>
#include <utility>
#include <vector>

#include "arraymom/partition.hpp"

namespace arraymom {

// The nine array components, numbered column-major bottom-up:
//     3 6 9        3,9,1,7 corners
//     2 5 8        2,8 left/right edges, 4,6 bottom/top edges
//     1 4 7        5 the array element
// Components 2/8 tile along y, 4/6 along x. A component other than 5 may be
// empty.
struct ComponentSet {
  std::array<DesignatedData, 9> comps;   // [c-1] is component c
  std::array<BoundingBox, 9> boxes;      // partition boxes, same order
  double dx = 0.0, dy = 0.0;             // lattice pitch in meters

  const DesignatedData& comp(int c) const { return comps[c - 1]; }
  bool present(int c) const { return !comps[c - 1].empty(); }
  int edgeCountOf(int c) const { return comps[c - 1].edgeCount(); }
};

// Partitions a meshed element+margin structure into the nine components.
ComponentSet buildComponentSet(const TriangleMesh& mesh, const RwgBasis& basis,
                               const std::array<BoundingBox, 9>& boxes,
                               double dx, double dy);

enum class Side {
  Left = 0,
  Right = 1,
  Top = 2,
  Bottom = 3,
  SouthCorner = 4,  // triangles around the component's south-east cell corner
  NorthCorner = 5   // triangles around its north-west cell corner
};

// Per component, per side: intrinsic triangle indices, position-sorted
// (left/right and corner sides by (y,z,x), top/bottom by (x,z,y)).
struct SharedTriangleTable {
  std::array<std::array<std::vector<int>, 6>, 9> lists;

  const std::vector<int>& of(int comp, Side s) const {
    return lists[comp - 1][static_cast<int>(s)];
  }
};

// Derives each side list by intersecting the component's triangle set with
// the neighboring component's in the corresponding direction.
SharedTriangleTable classifySides(const ComponentSet& comps);

// A part is a component plus an offset on the lattice. Parts are indexed
// 1..partCount() in component order 5,2,8,6,4,3,9,1,7, row-major
// (bottom-left first, then rightward) within each component.
struct ArrayModel {
  ComponentSet comps;
  int nx = 0, ny = 0;
  Eigen::Matrix3Xd offsets;                        // R_offset, 3 x P_N
  Eigen::Matrix<int, 3, Eigen::Dynamic> partTable; // rows: row, col, comp
  SharedTriangleTable shared;

  std::vector<long> edgeStart;  // per part, 0-based offset into the vector

  int partCount() const { return static_cast<int>(offsets.cols()); }
  int partComponent(int p) const { return partTable(2, p - 1); }
  Vec3 partOffset(int p) const { return offsets.col(p - 1); }
  const DesignatedData& partData(int p) const {
    return comps.comp(partComponent(p));
  }
  int partEdgeCount(int p) const { return partData(p).edgeCount(); }
  long totalEdges() const;
  int elementParts() const { return nx * ny; }
};

// Places the P_N = nx*ny + 2nx + 2ny + 4 parts on the lattice and validates
// mesh conformity across every part border that the shared-triangle zips
// rely on. Throws UserError on non-conformal components.
ArrayModel buildArray(const ComponentSet& comps, int nx, int ny);

// Intrinsic index pairs of geometrically coincident triangles between two
// parts. Parts at the same offset intersect global triangle ids; parts of
// shifted lattice positions zip the matching side lists; a part against
// itself yields the diagonal pairs. Non-adjacent parts yield an empty list.
std::vector<std::pair<int, int>> sharedTrianglesBetweenParts(
    int partI, int partJ, const ArrayModel& model);

}  // namespace arraymom

#endif  // ARRAYMOM_ARRAY_MODEL_HPP
