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

#ifndef ARRAYMOM_KERNEL_HPP
#define ARRAYMOM_KERNEL_HPP

#include <array>
#include <utility>
#include <vector>

#include "arraymom/partition.hpp"

namespace arraymom {

struct KernelParams {
  double wavenumber = 0.0;       // rad/m, > 0
  double eta = kEta0;            // free-space impedance, ohms
  int quadratureOrder = 7;       // points per triangle: 1, 3, 4, 6, 7
  int singularRefinementDepth = 1;  // subdivision levels for adjacent pairs

  void validate() const;
};

// Free-space Green's function exp(-jk|r-rp|) / (4 pi |r-rp|).
Complex greens(const Vec3& r, const Vec3& rp, double k);

// Impedance sub-block between the edges of two subdomains placed at spatial
// offsets. Entries are in ohms.
struct ImpedanceBlock {
  int rows = 0, cols = 0;
  MatrixXc z;
  int rowSubdomain = 0, colSubdomain = 0;  // caller-chosen labels
  Vec3 rowOffset = Vec3::Zero();
  Vec3 colOffset = Vec3::Zero();
};

// One half of an RWG function restricted to a single triangle:
// f(r) = sign * length/(2A) * (r - freeVertex), div f = sign * length/A.
struct RwgHalf {
  double edgeLength = 0.0;
  double sign = 1.0;  // +1 on T+, -1 on T-
  Vec3 freeVertex = Vec3::Zero();
};

// Both EFIE integrals for a coincident (source == test) triangle pair, by
// singularity extraction: the 1/R and R moments of the inner integral are
// analytic, the remainder is handled with the regular rule.
Complex singularSelfTerm(const std::array<Vec3, 3>& tri, const RwgHalf& test,
                         const RwgHalf& source, const KernelParams& params);

// Analytic moments of one triangle for an observation point r in its plane:
//   s0 = int 1/R dS',   v0 = int (r'-r)/R dS',
//   s1 = int R dS',     v1 = int (r'-r) R dS'.
struct TriStaticMoments {
  double s0 = 0.0, s1 = 0.0;
  Vec3 v0 = Vec3::Zero(), v1 = Vec3::Zero();
};
TriStaticMoments triStaticMoments(const std::array<Vec3, 3>& tri, const Vec3& r);

// int_T int_T (G - 1/(4 pi R)) dS dS', the smooth part of the self-term
// scalar integral.
Complex selfSmoothScalarIntegral(const std::array<Vec3, 3>& tri,
                                 const KernelParams& params);

// Computes the impedance block between subdomains di (rows) and dj (columns)
// displaced to offsets offI and offJ. sharedPairs lists the intrinsic indices
// of geometrically coincident triangles between the two offset subdomains;
// it is cross-checked against the actual geometry and drives the singular
// path. Adjacent (vertex- or edge-sharing) triangle pairs get subdivided
// order-7 quadrature, everything else the regular rule.
ImpedanceBlock computeBlock(const DesignatedData& di, const DesignatedData& dj,
                            const Vec3& offI, const Vec3& offJ,
                            const std::vector<std::pair<int, int>>& sharedPairs,
                            const KernelParams& params, int threads = 1);

// The coincident-pair list of a subdomain with itself: (1,1) .. (n,n).
std::vector<std::pair<int, int>> selfSharedPairs(int triCount);

}  // namespace arraymom

#endif  // ARRAYMOM_KERNEL_HPP
