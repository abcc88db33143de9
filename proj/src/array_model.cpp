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

#include "arraymom/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace arraymom {

namespace {

// Meta-grid position of component c (column-major bottom-up numbering).
inline int compCol(int c) { return (c - 1) / 3; }
inline int compRow(int c) { return (c - 1) % 3; }

// Component at a meta-grid position, 0 if outside.
int compAt(int col, int row) {
  if (col < 0 || col > 2 || row < 0 || row > 2) return 0;
  return col * 3 + row + 1;
}

int neighborComp(int c, Side s) {
  int dc = 0, dr = 0;
  switch (s) {
    case Side::Left: dc = -1; break;
    case Side::Right: dc = 1; break;
    case Side::Top: dr = 1; break;
    case Side::Bottom: dr = -1; break;
    case Side::SouthCorner: dc = 1; dr = -1; break;   // south-east
    case Side::NorthCorner: dc = -1; dr = 1; break;   // north-west
  }
  return compAt(compCol(c) + dc, compRow(c) + dr);
}

std::vector<int> intersectSorted(const std::vector<int>& a,
                                 const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

int globalToIntrinsic(const DesignatedData& d, int globalTri) {
  const auto it =
      std::lower_bound(d.globalTris.begin(), d.globalTris.end(), globalTri);
  if (it == d.globalTris.end() || *it != globalTri)
    throw UserError("triangle " + std::to_string(globalTri) +
                    " missing from subdomain triangle set");
  return static_cast<int>(it - d.globalTris.begin()) + 1;
}

}  // namespace

ComponentSet buildComponentSet(const TriangleMesh& mesh, const RwgBasis& basis,
                               const std::array<BoundingBox, 9>& boxes,
                               double dx, double dy) {
  if (!(dx > 0.0) || !(dy > 0.0))
    throw UserError("buildComponentSet: lattice pitch must be positive");
  ComponentSet cs;
  cs.boxes = boxes;
  cs.dx = dx;
  cs.dy = dy;
  std::vector<BoundingBox> list(boxes.begin(), boxes.end());
  auto parts = partitionByBoxes(mesh, basis, list);
  for (int c = 0; c < 9; ++c) cs.comps[c] = std::move(parts[c]);
  if (!cs.present(5))
    throw UserError("buildComponentSet: element component (5) is empty");
  return cs;
}

SharedTriangleTable classifySides(const ComponentSet& comps) {
  SharedTriangleTable table;
  for (int c = 1; c <= 9; ++c) {
    if (!comps.present(c)) continue;
    const DesignatedData& dc = comps.comp(c);
    for (int si = 0; si < 6; ++si) {
      const Side s = static_cast<Side>(si);
      const int nb = neighborComp(c, s);
      if (nb == 0 || !comps.present(nb)) continue;
      const std::vector<int> shared =
          intersectSorted(dc.globalTris, comps.comp(nb).globalTris);
      std::vector<int>& out = table.lists[c - 1][si];
      out.reserve(shared.size());
      for (int g : shared) out.push_back(globalToIntrinsic(dc, g));

      const bool byX = (s == Side::Top || s == Side::Bottom);
      std::sort(out.begin(), out.end(), [&](int a, int b) {
        const Vec3& pa = dc.triCentroids[a - 1];
        const Vec3& pb = dc.triCentroids[b - 1];
        const double a0 = byX ? pa.x() : pa.y(), b0 = byX ? pb.x() : pb.y();
        const double a1 = pa.z(), b1 = pb.z();
        const double a2 = byX ? pa.y() : pa.x(), b2 = byX ? pb.y() : pb.x();
        return std::tie(a0, a1, a2) < std::tie(b0, b1, b2);
      });
    }
  }
  return table;
}

namespace {

double meshDiameter(const ComponentSet& comps) {
  bool any = false;
  Vec3 lo = Vec3::Zero(), hi = Vec3::Zero();
  for (int c = 1; c <= 9; ++c)
    for (const auto& t : comps.comp(c).triVerts)
      for (const auto& p : t) {
        if (!any) {
          lo = hi = p;
          any = true;
        }
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
      }
  return any ? (hi - lo).norm() : 1.0;
}

enum class ZipKind { SideBySide, Stacked, Diagonal };

// Checks that zipping sideA of compA against sideB of compB pairs coincident
// triangles once the parts are placed in the given relative configuration
// (A west of B / A on top of B / A north-west of B). The part displacements
// follow from the component boxes.
void checkZipConformity(const ComponentSet& comps,
                        const SharedTriangleTable& table, ZipKind kind,
                        int compA, Side sideA, int compB, Side sideB,
                        double tol) {
  if (!comps.present(compA) || !comps.present(compB)) return;
  const BoundingBox& ba = comps.boxes[compA - 1];
  const BoundingBox& bb = comps.boxes[compB - 1];
  Vec3 shiftA = Vec3::Zero(), shiftB = Vec3::Zero();
  if (kind == ZipKind::SideBySide || kind == ZipKind::Diagonal)
    shiftB.x() = ba.max.x() - bb.min.x();
  if (kind == ZipKind::Stacked || kind == ZipKind::Diagonal)
    shiftA.y() = bb.max.y() - ba.min.y();
  const auto& la = table.of(compA, sideA);
  const auto& lb = table.of(compB, sideB);
  if (la.size() != lb.size())
    throw UserError("non-conformal components " + std::to_string(compA) +
                    " and " + std::to_string(compB) + ": facing side lists of " +
                    std::to_string(la.size()) + " vs " +
                    std::to_string(lb.size()) + " shared triangles");
  const DesignatedData& da = comps.comp(compA);
  const DesignatedData& db = comps.comp(compB);
  for (size_t k = 0; k < la.size(); ++k) {
    const Vec3 ca = da.triCentroids[la[k] - 1] + shiftA;
    const Vec3 cb = db.triCentroids[lb[k] - 1] + shiftB;
    if ((ca - cb).norm() > tol)
      throw UserError(
          "non-conformal components " + std::to_string(compA) + "/" +
          std::to_string(compB) + ": zipped shared triangles " +
          std::to_string(la[k]) + " and " + std::to_string(lb[k]) +
          " do not coincide (centroids offset by " +
          std::to_string((ca - cb).norm()) + " m)");
  }
}

}  // namespace

long ArrayModel::totalEdges() const {
  return edgeStart.empty() ? 0
                           : edgeStart.back() + partEdgeCount(partCount());
}

ArrayModel buildArray(const ComponentSet& comps, int nx, int ny) {
  if (nx < 1 || ny < 1) throw UserError("buildArray: nx, ny must be >= 1");
  ArrayModel m;
  m.comps = comps;
  m.nx = nx;
  m.ny = ny;
  m.shared = classifySides(comps);

  const double dx = comps.dx, dy = comps.dy;
  const double tol = 1e-9 * meshDiameter(comps);
  const auto& t = m.shared;
  // Side-by-side, stacked, and diagonal zips that array assembly relies on.
  for (int c : {5, 6, 4})
    checkZipConformity(comps, t, ZipKind::SideBySide, c, Side::Right, c,
                       Side::Left, tol);
  for (int c : {5, 2, 8})
    checkZipConformity(comps, t, ZipKind::Stacked, c, Side::Bottom, c,
                       Side::Top, tol);
  checkZipConformity(comps, t, ZipKind::Diagonal, 5, Side::SouthCorner, 5,
                     Side::NorthCorner, tol);
  checkZipConformity(comps, t, ZipKind::Diagonal, 2, Side::SouthCorner, 5,
                     Side::NorthCorner, tol);
  checkZipConformity(comps, t, ZipKind::Diagonal, 5, Side::SouthCorner, 4,
                     Side::NorthCorner, tol);
  checkZipConformity(comps, t, ZipKind::Diagonal, 6, Side::SouthCorner, 5,
                     Side::NorthCorner, tol);
  checkZipConformity(comps, t, ZipKind::Diagonal, 5, Side::SouthCorner, 8,
                     Side::NorthCorner, tol);

  const int pn = nx * ny + 2 * nx + 2 * ny + 4;
  m.offsets.resize(3, pn);
  m.partTable.resize(3, pn);
  int p = 0;
  auto place = [&](int row, int col, int comp, double ox, double oy) {
    m.offsets.col(p) = Vec3(ox, oy, 0.0);
    m.partTable(0, p) = row;
    m.partTable(1, p) = col;
    m.partTable(2, p) = comp;
    ++p;
  };
  // Component order 5,2,8,6,4,3,9,1,7; bottom-left first, then rightward.
  for (int r = 1; r <= ny; ++r)
    for (int c = 1; c <= nx; ++c) place(r, c, 5, (c - 1) * dx, (r - 1) * dy);
  for (int r = 1; r <= ny; ++r) place(r, 0, 2, 0.0, (r - 1) * dy);
  for (int r = 1; r <= ny; ++r) place(r, nx + 1, 8, (nx - 1) * dx, (r - 1) * dy);
  for (int c = 1; c <= nx; ++c) place(ny + 1, c, 6, (c - 1) * dx, (ny - 1) * dy);
  for (int c = 1; c <= nx; ++c) place(0, c, 4, (c - 1) * dx, 0.0);
  place(ny + 1, 0, 3, 0.0, (ny - 1) * dy);
  place(ny + 1, nx + 1, 9, (nx - 1) * dx, (ny - 1) * dy);
  place(0, 0, 1, 0.0, 0.0);
  place(0, nx + 1, 7, (nx - 1) * dx, 0.0);

  m.edgeStart.resize(pn);
  long acc = 0;
  for (int q = 1; q <= pn; ++q) {
    m.edgeStart[q - 1] = acc;
    acc += m.partEdgeCount(q);
  }
  return m;
}

std::vector<std::pair<int, int>> sharedTrianglesBetweenParts(
    int partI, int partJ, const ArrayModel& model) {
  const int pn = model.partCount();
  if (partI < 1 || partI > pn || partJ < 1 || partJ > pn)
    throw UserError("sharedTrianglesBetweenParts: part index out of range");

  const int ca = model.partComponent(partI);
  const int cb = model.partComponent(partJ);
  const DesignatedData& da = model.comps.comp(ca);
  const DesignatedData& db = model.comps.comp(cb);
  std::vector<std::pair<int, int>> pairs;
  if (da.empty() || db.empty()) return pairs;

  if (partI == partJ) {
    for (int t = 1; t <= da.triCount(); ++t) pairs.emplace_back(t, t);
    return pairs;
  }

  const Vec3 offA = model.partOffset(partI);
  const Vec3 offB = model.partOffset(partJ);
  const double tol =
      1e-9 * std::max({model.comps.dx, model.comps.dy, 1e-30});

  if ((offA - offB).norm() <= tol) {
    // Both parts sit where the source mesh was partitioned; the plain
    // global-index intersection identifies the shared triangles.
    const std::vector<int> shared =
        intersectSorted(da.globalTris, db.globalTris);
    pairs.reserve(shared.size());
    for (int g : shared)
      pairs.emplace_back(globalToIntrinsic(da, g), globalToIntrinsic(db, g));
    return pairs;
  }

  // Classify the relative placement of the two part boxes in the xy plane.
  const BoundingBox& ba = model.comps.boxes[ca - 1];
  const BoundingBox& bb = model.comps.boxes[cb - 1];
  const double axLo = ba.min.x() + offA.x(), axHi = ba.max.x() + offA.x();
  const double ayLo = ba.min.y() + offA.y(), ayHi = ba.max.y() + offA.y();
  const double bxLo = bb.min.x() + offB.x(), bxHi = bb.max.x() + offB.x();
  const double byLo = bb.min.y() + offB.y(), byHi = bb.max.y() + offB.y();

  auto near = [tol](double u, double v) { return std::abs(u - v) <= tol; };
  const double xOverlap = std::min(axHi, bxHi) - std::max(axLo, bxLo);
  const double yOverlap = std::min(ayHi, byHi) - std::max(ayLo, byLo);

  auto zip = [&](int compFirst, Side sideFirst, int compSecond, Side sideSecond,
                 bool firstIsI) {
    const auto& lf = model.shared.of(compFirst, sideFirst);
    const auto& ls = model.shared.of(compSecond, sideSecond);
    if (lf.size() != ls.size())
      throw UserError("sharedTrianglesBetweenParts: facing side lists differ "
                      "in length between components " +
                      std::to_string(compFirst) + " and " +
                      std::to_string(compSecond));
    pairs.reserve(lf.size());
    for (size_t k = 0; k < lf.size(); ++k) {
      if (firstIsI)
        pairs.emplace_back(lf[k], ls[k]);
      else
        pairs.emplace_back(ls[k], lf[k]);
    }
  };

  if (near(axHi, bxLo)) {  // J east of I
    if (yOverlap > tol)
      zip(ca, Side::Right, cb, Side::Left, true);        // scenario (a)
    else if (near(ayLo, byHi))
      zip(ca, Side::SouthCorner, cb, Side::NorthCorner, true);  // (c), I NW
    // I's NE corner against J's SW corner shares nothing.
  } else if (near(bxHi, axLo)) {  // J west of I
    if (yOverlap > tol)
      zip(cb, Side::Right, ca, Side::Left, false);
    else if (near(byLo, ayHi))
      zip(cb, Side::SouthCorner, ca, Side::NorthCorner, false);
  } else if (xOverlap > tol) {
    if (near(ayLo, byHi))
      zip(ca, Side::Bottom, cb, Side::Top, true);        // scenario (b), I on top
    else if (near(byLo, ayHi))
      zip(cb, Side::Bottom, ca, Side::Top, false);
  }
  return pairs;
}

}  // namespace arraymom
