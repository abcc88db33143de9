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

#ifndef ARRAYMOM_EXAMPLE_GEOMETRY_HPP
#define ARRAYMOM_EXAMPLE_GEOMETRY_HPP

#include <array>

#include "arraymom/partition.hpp"

namespace arraymom {

// Synthetic connected-element geometry: an optional finite ground layer at
// z = 0 plus connection strips at z = stripHeight. The horizontal strip ties
// neighboring cells in x, the vertical strip in y, and short stubs continue
// the strips into the margin ring (one grid cell wide). All coordinates are
// exact binary fractions when `cell` is, which keeps translated copies of the
// geometry bitwise identical.
struct StripCrossParams {
  double cell = 0.125;       // lattice pitch in meters, both directions
  int groundDivisions = 4;   // grid cells per element edge
  double stripHeight = 0.03125;
  bool ground = true;
  bool connectX = true;      // horizontal strip + left/right stubs
  bool connectY = true;      // vertical strip + top/bottom stubs
  int stripLo = 2;           // strip band start, in grid cells
  int stripWidth = 1;        // strip band width, in grid cells

  double h() const { return cell / groundDivisions; }   // grid pitch
  double margin() const { return h(); }                 // margin ring width
};

// A y-connected-only variant (empty left/right/corner components), symmetric
// about the cell's vertical midplane.
StripCrossParams stripYOnlyParams();

// The element-plus-margin mesh that gets partitioned into nine components.
TriangleMesh makeElementMarginMesh(const StripCrossParams& p);

// The directly meshed nx x ny array (including margins), used as the
// brute-force reference. Shares its local geometry bitwise with
// makeElementMarginMesh.
TriangleMesh makeArrayMesh(const StripCrossParams& p, int nx, int ny);

// The nine partition boxes (component order 1..9) for the element+margin
// mesh of makeElementMarginMesh.
std::array<BoundingBox, 9> componentBoxes(const StripCrossParams& p);

// A bowtie plate in the z = 0 plane: two triangular wings meeting at the
// center vertex, each refined `refine` times. Spans x in [0, 2*wing].
TriangleMesh makeBowtieMesh(double wing, double halfHeight, int refine);

// A flat rectangular plate, nx x ny grid cells over [0,lx] x [0,ly] at z.
TriangleMesh makePlateMesh(int nx, int ny, double lx, double ly, double z = 0.0);

}  // namespace arraymom

#endif  // ARRAYMOM_EXAMPLE_GEOMETRY_HPP
