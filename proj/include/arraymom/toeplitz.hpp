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

#ifndef ARRAYMOM_TOEPLITZ_HPP
#define ARRAYMOM_TOEPLITZ_HPP

#include <array>
#include <string>
#include <vector>

#include "arraymom/array_model.hpp"
#include "arraymom/kernel.hpp"

namespace arraymom {

enum class StorageMode { Full, SemiSparse, Sparse };

std::string storageModeName(StorageMode mode);
StorageMode parseStorageMode(const std::string& name);

// Stored complex-entry counts of Z^part = [[A, B^T], [B, C]] for one storage
// mode. The Sparse numbers are exact closed forms; `approx` is the
// equal-count approximation using the mean edge/corner sizes.
struct MemoryReport {
  long long memA = 0, memB = 0, memC = 0;
  long long aUniqueBlocks = 0;
  double approx = 0.0;
  long long total() const { return memA + memB + memC; }
};

MemoryReport memoryReport(int nx, int ny, const std::array<long long, 9>& e,
                          StorageMode mode);

// Part-pair index maps of the unique generator blocks.
//
// A is a two-level block Toeplitz matrix over the element parts; the
// generator for level-1 shift i (rows) and level-0 shift j (columns) is the
// block of part pair (i*nx + 1 + (|j|+j)/2, 1 + (|j|-j)/2).
std::pair<int, int> locateABlock(int i, int j, int nx, int ny);

// B regions 1..4 are the four margin edge groups against the element parts
// (components 2, 8, 6, 4 in that order). Regions 1 and 2 are block Toeplitz
// over the y shift j; the returned pair is the (margin part, first element
// part) of the generator row, which spans element columns q .. q+nx-1.
// Regions 3 and 4 are, for each element row j in [0, ny-1], block Toeplitz
// over the x shift k.
std::pair<int, int> locateBBlock(int region, int j, int k, int nx, int ny);

// C region (i, j) with i,j in {1,2} (components 2, 8, Toeplitz over y) or
// {3,4} (components 6, 4, over x), shift k.
std::pair<int, int> locateCBlock(int i, int j, int k, int nx, int ny);

// Memory-efficient representation of Z^part: only the unique generator
// blocks in Sparse mode, the first Toeplitz level of A plus dense B and C in
// SemiSparse, or the whole matrix in Full.
struct ToeplitzRep {
  StorageMode mode = StorageMode::Sparse;
  int nx = 0, ny = 0;
  std::array<int, 9> e{};  // edge count per component

  // Sparse: A generators. aGen[0][j] for j in [0, nx-1] (negative j follow
  // from block symmetry); aGen[i][j - (1-nx)] for i >= 1, j in [1-nx, nx-1].
  std::vector<std::vector<MatrixXc>> aGen;
  // B1/B2 generator rows, j in [1-ny, ny-1], each e_{2,8} x nx*e5.
  std::array<std::vector<MatrixXc>, 2> bSideGen;
  // B3/B4 generators, [region][element row j][k - (1-nx)], each e_{6,4} x e5.
  std::array<std::vector<std::vector<MatrixXc>>, 2> bRowGen;
  // B5..B8: corner components 3,9,1,7 against all element parts.
  std::array<MatrixXc, 4> bCorner;
  // C Toeplitz generators. Diagonal regions store k in [0, n-1] (symmetric),
  // off-diagonal k in [1-n, n-1].
  std::vector<MatrixXc> c11, c21, c22, c33, c43, c44;
  // C full rectangles (6-8 labels: rows group x cols group).
  MatrixXc c31, c41, c32, c42;
  std::array<MatrixXc, 4> c5x;  // corner group against groups 1..4
  // C55 upper triangle including diagonal, corner order 3,9,1,7.
  std::array<std::array<MatrixXc, 4>, 4> c55;

  // SemiSparse: first-level A blocks (ny of them, each nx*e5 square) plus
  // dense B and C.
  std::vector<MatrixXc> aLevel1;
  MatrixXc bFull, cFull;

  // Full: everything.
  MatrixXc zFull;

  long elementEdges() const { return static_cast<long>(nx) * ny * e[4]; }
  long marginEdges() const {
    return static_cast<long>(ny) * (e[1] + e[7]) +
           static_cast<long>(nx) * (e[5] + e[3]) + e[2] + e[8] + e[0] + e[6];
  }
  long totalEdges() const { return elementEdges() + marginEdges(); }

  long long storedEntries() const;
  long long aBlockCount() const;
};

// Computes exactly the unique blocks required by the storage mode, routing
// coincident-triangle pairs from the array model into the kernel.
ToeplitzRep assemble(const ArrayModel& model, const KernelParams& params,
                     StorageMode mode, int threads = 1);

// The (partI, partJ) impedance sub-block reconstructed from the stored data.
MatrixXc partBlock(const ToeplitzRep& rep, const ArrayModel& model, int partI,
                   int partJ);

struct DenseSystem {
  MatrixXc z;                   // part-ordered dense Z^part
  std::vector<int> translation; // source-basis edge id per part-ordered row
};

// Densifies the whole representation (any mode) and returns the translation
// index mapping part-ordered rows to source-basis edge ids.
DenseSystem reconstructFull(const ToeplitzRep& rep, const ArrayModel& model);

// Brute-force reference: assembles dense Z^part by computing every part pair
// directly (upper triangle plus transposition), without any Toeplitz reuse.
MatrixXc assembleDenseParts(const ArrayModel& model, const KernelParams& params,
                            int threads = 1);

// Binary block cache (magic "ZTOE1").
void saveBlockCache(const ToeplitzRep& rep, const std::string& path);
ToeplitzRep loadBlockCache(const std::string& path);

}  // namespace arraymom

#endif  // ARRAYMOM_TOEPLITZ_HPP
