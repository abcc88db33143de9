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

#include "arraymom/kernel.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "arraymom/quadrature.hpp"

namespace arraymom {

void KernelParams::validate() const {
  if (!(wavenumber > 0.0)) throw UserError("kernel: wavenumber must be > 0");
  if (!(eta > 0.0)) throw UserError("kernel: eta must be > 0");
  switch (quadratureOrder) {
    case 1: case 3: case 4: case 6: case 7: break;
    default:
      throw UserError("kernel: quadrature order must be one of {1,3,4,6,7}");
  }
  if (singularRefinementDepth < 0 || singularRefinementDepth > 6)
    throw UserError("kernel: singular refinement depth out of range [0,6]");
}

Complex greens(const Vec3& r, const Vec3& rp, double k) {
  const double R = (r - rp).norm();
  if (R == 0.0) throw std::domain_error("greens: coincident evaluation points");
  return std::polar(1.0 / (4.0 * M_PI * R), -k * R);
}

std::vector<std::pair<int, int>> selfSharedPairs(int triCount) {
  std::vector<std::pair<int, int>> out;
  out.reserve(triCount);
  for (int t = 1; t <= triCount; ++t) out.emplace_back(t, t);
  return out;
}

TriStaticMoments triStaticMoments(const std::array<Vec3, 3>& v, const Vec3& r) {
  Vec3 n = (v[1] - v[0]).cross(v[2] - v[0]);
  const double twoArea = n.norm();
  if (twoArea <= 0.0) throw UserError("triStaticMoments: degenerate triangle");
  n /= twoArea;

  TriStaticMoments M;
  for (int e = 0; e < 3; ++e) {
    const Vec3& a = v[e];
    const Vec3& b = v[(e + 1) % 3];
    Vec3 s = b - a;
    s /= s.norm();
    const Vec3 m = s.cross(n);  // outward in-plane edge normal
    const double sm = (a - r).dot(s);
    const double sp = (b - r).dot(s);
    const double t0 = (a - r).dot(m);
    const double Rm = (a - r).norm();
    const double Rp = (b - r).norm();
    // ln((Rp+sp)/(Rm+sm)); both arguments are positive for points off the
    // edge line, which the interior quadrature points guarantee.
    double L = 0.0;
    if (Rm + sm > 0.0 && Rp + sp > 0.0) L = std::log((Rp + sp) / (Rm + sm));
    const double k1 = 0.5 * (sp * Rp - sm * Rm + t0 * t0 * L);
    const double k3 = 0.25 * (sp * Rp * Rp * Rp - sm * Rm * Rm * Rm) +
                      0.375 * t0 * t0 * (sp * Rp - sm * Rm) +
                      0.375 * t0 * t0 * t0 * t0 * L;
    M.s0 += t0 * L;
    M.v0 += m * k1;
    M.s1 += t0 * k1 / 3.0;
    M.v1 += m * (k3 / 3.0);
  }
  return M;
}

namespace {

constexpr double kFourPi = 4.0 * M_PI;

// (exp(-jkR) - 1 + jkR + (kR)^2/2) / (4 pi R): the Green's function with its
// 1/R, constant, and linear-in-R parts removed. Behaves as O(R^2) at R -> 0.
Complex smoothRemainder(double R, double k) {
  if (R == 0.0) return {0.0, 0.0};
  const double x = k * R;
  if (x < 0.5) {
    const Complex t(0.0, -x);
    Complex tn = t * t * t / 6.0;  // t^3/3!
    Complex sum = tn;
    for (int n = 4; n <= 16; ++n) {
      tn *= t / static_cast<double>(n);
      sum += tn;
    }
    return sum / (kFourPi * R);
  }
  const Complex e = std::polar(1.0, -x);
  return (e - 1.0 + Complex(0.0, x) + Complex(0.5 * x * x, 0.0)) / (kFourPi * R);
}

using CVec3 = Eigen::Vector3cd;

// Moments of one triangle pair against the (decomposed) Green's function:
//   m00 = int int G,        mr  = int int G r,
//   mrp = int int G r',     mrr = int int G (r . r'),
// with r on the test triangle and r' on the source triangle.
struct FacePairMoments {
  Complex m00{0.0, 0.0};
  CVec3 mr = CVec3::Zero();
  CVec3 mrp = CVec3::Zero();
  Complex mrr{0.0, 0.0};
};

struct QuadPoints {
  std::vector<Vec3> p;
  std::vector<double> w;  // sums to 1
};

QuadPoints triPoints(const std::array<Vec3, 3>& v, int order) {
  QuadPoints q;
  const auto& rule = triangleRule(order);
  q.p.reserve(rule.size());
  q.w.reserve(rule.size());
  for (const auto& r : rule) {
    q.p.push_back(barycentricPoint(v, r));
    q.w.push_back(r.weight);
  }
  return q;
}

QuadPoints subdividedPoints(const std::array<Vec3, 3>& v, int depth, int order) {
  std::vector<std::array<Vec3, 3>> subs;
  subdivideTriangle(v, depth, subs);
  QuadPoints q;
  const auto& rule = triangleRule(order);
  const double scale = 1.0 / static_cast<double>(subs.size());
  q.p.reserve(subs.size() * rule.size());
  q.w.reserve(subs.size() * rule.size());
  for (const auto& s : subs)
    for (const auto& r : rule) {
      q.p.push_back(barycentricPoint(s, r));
      q.w.push_back(r.weight * scale);
    }
  return q;
}

// Plain double quadrature of the full Green's function over a pair of
// disjoint (possibly nearly touching) triangles.
FacePairMoments regularFacePair(const QuadPoints& qa, const QuadPoints& qb,
                                double areaA, double areaB, double k) {
  FacePairMoments M;
  const size_t na = qa.p.size(), nb = qb.p.size();
  for (size_t i = 0; i < na; ++i) {
    const Vec3& pi = qa.p[i];
    Complex g0{0.0, 0.0};
    CVec3 g1 = CVec3::Zero();
    Complex g1r{0.0, 0.0};
    for (size_t j = 0; j < nb; ++j) {
      const Vec3& pj = qb.p[j];
      const double R = (pi - pj).norm();
      const Complex g = qb.w[j] * std::polar(1.0 / (kFourPi * R), -k * R);
      g0 += g;
      g1 += g * pj.cast<Complex>();
      g1r += g * pi.dot(pj);
    }
    const double wi = qa.w[i];
    M.m00 += wi * g0;
    M.mr += (wi * g0) * pi.cast<Complex>();
    M.mrp += wi * g1;
    M.mrr += wi * g1r;
  }
  const double scale = areaA * areaB;
  M.m00 *= scale;
  M.mr *= scale;
  M.mrp *= scale;
  M.mrr *= scale;
  return M;
}

// Coincident pair: analytic 1/R and R inner moments plus exact constant part
// plus the numerically integrated smooth remainder.
FacePairMoments coincidentFacePair(const std::array<Vec3, 3>& v, double area,
                                   double k, int order) {
  FacePairMoments M;
  const QuadPoints q = triPoints(v, order);
  const size_t n = q.p.size();

  // Static (1/R) and linear (R) inner integrals, outer by quadrature.
  const double cLin = -k * k / (2.0 * kFourPi);
  for (size_t i = 0; i < n; ++i) {
    const Vec3& pi = q.p[i];
    const TriStaticMoments sm = triStaticMoments(v, pi);
    const double wiA = q.w[i] * area;
    const double s = sm.s0 / kFourPi + cLin * sm.s1;  // int kernel dS'
    const Vec3 inner =
        sm.v0 / kFourPi + cLin * sm.v1 + s * pi;  // int r' kernel dS'
    M.m00 += Complex(wiA * s, 0.0);
    M.mr += Complex(wiA * s, 0.0) * pi.cast<Complex>();
    M.mrp += (wiA * inner).cast<Complex>();
    M.mrr += Complex(wiA * pi.dot(inner), 0.0);
  }
  const double A2 = area * area;
  // Constant part -jk/(4 pi): double integrals are separable and exact.
  const Vec3 c = (v[0] + v[1] + v[2]) / 3.0;
  const Complex g0(0.0, -k / kFourPi);
  M.m00 += g0 * A2;
  M.mr += (g0 * A2) * c.cast<Complex>();
  M.mrp += (g0 * A2) * c.cast<Complex>();
  M.mrr += g0 * A2 * c.dot(c);

  // Smooth remainder by the regular rule on both triangles.
  for (size_t i = 0; i < n; ++i) {
    const Vec3& pi = q.p[i];
    Complex g0s{0.0, 0.0};
    CVec3 g1 = CVec3::Zero();
    Complex g1r{0.0, 0.0};
    for (size_t j = 0; j < n; ++j) {
      const Vec3& pj = q.p[j];
      const Complex g = q.w[j] * smoothRemainder((pi - pj).norm(), k);
      g0s += g;
      g1 += g * pj.cast<Complex>();
      g1r += g * pi.dot(pj);
    }
    const double wi = q.w[i];
    M.m00 += wi * A2 * g0s;
    M.mr += (wi * A2 * g0s) * pi.cast<Complex>();
    M.mrp += wi * A2 * g1;
    M.mrr += wi * A2 * g1r;
  }
  return M;
}

// Assembles the Eq.-style entry contribution of one triangle pair from its
// moments. test/source describe the RWG halves living on the pair.
Complex pairContribution(const FacePairMoments& M, const RwgHalf& test,
                         const RwgHalf& source, double areaA, double areaB,
                         double k, double eta) {
  auto dotRC = [](const CVec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  };
  const Vec3& va = test.freeVertex;
  const Vec3& vb = source.freeVertex;
  const Complex vecMoment =
      M.mrr - dotRC(M.mr, vb) - dotRC(M.mrp, va) + va.dot(vb) * M.m00;
  const double ll = test.edgeLength * source.edgeLength;
  const double invAA = 1.0 / (areaA * areaB);
  const Complex scalarTerm = Complex(0.0, -eta / k) * invAA * M.m00;
  const Complex vectorTerm = Complex(0.0, k * eta) * 0.25 * invAA * vecMoment;
  return test.sign * source.sign * ll * (scalarTerm + vectorTerm);
}

// Vertex coincidence hash over one subdomain's offset triangles.
struct VertexGrid {
  double cell = 1.0;
  std::unordered_map<uint64_t, std::vector<int32_t>> cells;  // tri*4+corner

  static uint64_t mix(int64_t a, int64_t b, int64_t c) {
    uint64_t h = static_cast<uint64_t>(a) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<uint64_t>(b) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    h *= 0xC2B2AE3D27D4EB4Full;
    h ^= static_cast<uint64_t>(c) + 0x165667B19E3779F9ull + (h << 6) + (h >> 2);
    return h;
  }
  uint64_t key(const Vec3& p, long dx = 0, long dy = 0, long dz = 0) const {
    return mix(static_cast<int64_t>(std::floor(p.x() / cell)) + dx,
               static_cast<int64_t>(std::floor(p.y() / cell)) + dy,
               static_cast<int64_t>(std::floor(p.z() / cell)) + dz);
  }
};

}  // namespace

Complex singularSelfTerm(const std::array<Vec3, 3>& tri, const RwgHalf& test,
                         const RwgHalf& source, const KernelParams& params) {
  params.validate();
  const double area =
      0.5 * (tri[1] - tri[0]).cross(tri[2] - tri[0]).norm();
  if (area <= kAreaEpsilon) throw UserError("singularSelfTerm: degenerate triangle");
  const FacePairMoments M =
      coincidentFacePair(tri, area, params.wavenumber, params.quadratureOrder);
  return pairContribution(M, test, source, area, area, params.wavenumber,
                          params.eta);
}

Complex selfSmoothScalarIntegral(const std::array<Vec3, 3>& tri,
                                 const KernelParams& params) {
  const double area = 0.5 * (tri[1] - tri[0]).cross(tri[2] - tri[0]).norm();
  const double k = params.wavenumber;
  const QuadPoints q = triPoints(tri, params.quadratureOrder);
  Complex out(0.0, -k / kFourPi);
  out *= area * area;
  const double cLin = -k * k / (2.0 * kFourPi);
  for (size_t i = 0; i < q.p.size(); ++i) {
    const TriStaticMoments sm = triStaticMoments(tri, q.p[i]);
    out += Complex(q.w[i] * area * cLin * sm.s1, 0.0);
    for (size_t j = 0; j < q.p.size(); ++j)
      out += q.w[i] * q.w[j] * area * area *
             smoothRemainder((q.p[i] - q.p[j]).norm(), k);
  }
  return out;
}

ImpedanceBlock computeBlock(const DesignatedData& di, const DesignatedData& dj,
                            const Vec3& offI, const Vec3& offJ,
                            const std::vector<std::pair<int, int>>& sharedPairs,
                            const KernelParams& params, int threads) {
  params.validate();
  ImpedanceBlock blk;
  blk.rows = di.edgeCount();
  blk.cols = dj.edgeCount();
  blk.rowOffset = offI;
  blk.colOffset = offJ;
  blk.z = MatrixXc::Zero(blk.rows, blk.cols);
  if (blk.rows == 0 || blk.cols == 0) return blk;

  const int nti = di.triCount();
  const int ntj = dj.triCount();

  std::vector<std::array<Vec3, 3>> vi(nti), vj(ntj);
  for (int t = 0; t < nti; ++t)
    vi[t] = {di.triVerts[t][0] + offI, di.triVerts[t][1] + offI,
             di.triVerts[t][2] + offI};
  for (int t = 0; t < ntj; ++t)
    vj[t] = {dj.triVerts[t][0] + offJ, dj.triVerts[t][1] + offJ,
             dj.triVerts[t][2] + offJ};

  // Scale-relative tolerance for vertex coincidence after offsetting.
  Vec3 lo = vi[0][0], hi = vi[0][0];
  for (const auto& t : vi)
    for (const auto& p : t) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  for (const auto& t : vj)
    for (const auto& p : t) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  const double diameter = (hi - lo).norm();
  const double tol = 1e-9 * (diameter > 0.0 ? diameter : 1.0);

  // Classify triangle pairs by the number of coincident vertices:
  // 3 = identical, 1..2 = adjacent, 0 = well separated.
  VertexGrid grid;
  grid.cell = tol * 4.0;
  for (int t = 0; t < nti; ++t)
    for (int c = 0; c < 3; ++c)
      grid.cells[grid.key(vi[t][c])].push_back(t * 4 + c);

  std::vector<uint8_t> pairClass(static_cast<size_t>(nti) * ntj, 0);
  for (int t = 0; t < ntj; ++t)
    for (int c = 0; c < 3; ++c) {
      const Vec3& p = vj[t][c];
      for (long dx = -1; dx <= 1; ++dx)
        for (long dy = -1; dy <= 1; ++dy)
          for (long dz = -1; dz <= 1; ++dz) {
            const auto it = grid.cells.find(grid.key(p, dx, dy, dz));
            if (it == grid.cells.end()) continue;
            for (int32_t packed : it->second) {
              const int ti = packed / 4, ci = packed % 4;
              if ((vi[ti][ci] - p).norm() <= tol)
                ++pairClass[static_cast<size_t>(ti) * ntj + t];
            }
          }
    }

  // Cross-check the caller's coincident-pair list against the geometry.
  size_t geomCoincident = 0;
  for (size_t x = 0; x < pairClass.size(); ++x)
    if (pairClass[x] >= 3) ++geomCoincident;
  if (geomCoincident != sharedPairs.size())
    throw UserError("computeBlock: shared-pair list has " +
                    std::to_string(sharedPairs.size()) + " entries but " +
                    std::to_string(geomCoincident) +
                    " coincident triangle pairs exist after offsetting");
  for (const auto& [a, b] : sharedPairs) {
    if (a < 1 || a > nti || b < 1 || b > ntj)
      throw UserError("computeBlock: shared pair out of range");
    if (pairClass[static_cast<size_t>(a - 1) * ntj + (b - 1)] < 3)
      throw UserError("computeBlock: shared triangles (" + std::to_string(a) +
                      "," + std::to_string(b) +
                      ") do not coincide after offsetting");
  }

  // Per-triangle regular quadrature points.
  std::vector<QuadPoints> qi(nti), qj(ntj);
  for (int t = 0; t < nti; ++t) qi[t] = triPoints(vi[t], params.quadratureOrder);
  for (int t = 0; t < ntj; ++t) qj[t] = triPoints(vj[t], params.quadratureOrder);

  const double k = params.wavenumber;
  std::vector<FacePairMoments> face(static_cast<size_t>(nti) * ntj);
  parallelFor(nti, threads, [&](long tlo, long thi) {
    for (long a = tlo; a < thi; ++a) {
      for (int b = 0; b < ntj; ++b) {
        const size_t x = static_cast<size_t>(a) * ntj + b;
        const uint8_t cls = pairClass[x];
        if (cls == 0) {
          face[x] = regularFacePair(qi[a], qj[b], di.triAreas[a],
                                    dj.triAreas[b], k);
        } else if (cls >= 3) {
          face[x] = coincidentFacePair(vi[a], di.triAreas[a], k,
                                       params.quadratureOrder);
        } else {
          const QuadPoints sa =
              subdividedPoints(vi[a], params.singularRefinementDepth, 7);
          const QuadPoints sb =
              subdividedPoints(vj[b], params.singularRefinementDepth, 7);
          face[x] = regularFacePair(sa, sb, di.triAreas[a], dj.triAreas[b], k);
        }
      }
    }
  });

  // Per-edge RWG halves (free vertices carried to the offset frame).
  const int rows = blk.rows, cols = blk.cols;
  std::vector<RwgHalf> rowPlus(rows), rowMinus(rows), colPlus(cols),
      colMinus(cols);
  for (int m = 0; m < rows; ++m) {
    const int tp = di.intrinsicPlus[m] - 1, tm = di.intrinsicMinus[m] - 1;
    rowPlus[m] = {di.edgeLengths[m], 1.0, vi[tp][di.plusFreeCorner[m]]};
    rowMinus[m] = {di.edgeLengths[m], -1.0, vi[tm][di.minusFreeCorner[m]]};
  }
  for (int n = 0; n < cols; ++n) {
    const int tp = dj.intrinsicPlus[n] - 1, tm = dj.intrinsicMinus[n] - 1;
    colPlus[n] = {dj.edgeLengths[n], 1.0, vj[tp][dj.plusFreeCorner[n]]};
    colMinus[n] = {dj.edgeLengths[n], -1.0, vj[tm][dj.minusFreeCorner[n]]};
  }

  parallelFor(rows, threads, [&](long mlo, long mhi) {
    for (long m = mlo; m < mhi; ++m) {
      const int tiP = di.intrinsicPlus[m] - 1, tiM = di.intrinsicMinus[m] - 1;
      for (int n = 0; n < cols; ++n) {
        const int tjP = dj.intrinsicPlus[n] - 1, tjM = dj.intrinsicMinus[n] - 1;
        Complex z{0.0, 0.0};
        z += pairContribution(face[static_cast<size_t>(tiP) * ntj + tjP],
                              rowPlus[m], colPlus[n], di.triAreas[tiP],
                              dj.triAreas[tjP], k, params.eta);
        z += pairContribution(face[static_cast<size_t>(tiP) * ntj + tjM],
                              rowPlus[m], colMinus[n], di.triAreas[tiP],
                              dj.triAreas[tjM], k, params.eta);
        z += pairContribution(face[static_cast<size_t>(tiM) * ntj + tjP],
                              rowMinus[m], colPlus[n], di.triAreas[tiM],
                              dj.triAreas[tjP], k, params.eta);
        z += pairContribution(face[static_cast<size_t>(tiM) * ntj + tjM],
                              rowMinus[m], colMinus[n], di.triAreas[tiM],
                              dj.triAreas[tjM], k, params.eta);
        blk.z(m, n) = z;
      }
    }
  });

  if (!blk.z.allFinite())
    throw NumericError("computeBlock: non-finite impedance entries");
  return blk;
}

}  // namespace arraymom
