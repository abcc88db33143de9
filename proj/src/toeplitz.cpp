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

#include "arraymom/toeplitz.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

namespace arraymom {

std::string storageModeName(StorageMode mode) {
  switch (mode) {
    case StorageMode::Full: return "full";
    case StorageMode::SemiSparse: return "semisparse";
    case StorageMode::Sparse: return "sparse";
  }
  return "?";
}

StorageMode parseStorageMode(const std::string& name) {
  if (name == "full") return StorageMode::Full;
  if (name == "semisparse") return StorageMode::SemiSparse;
  if (name == "sparse") return StorageMode::Sparse;
  throw UserError("unknown storage mode: " + name +
                  " (expected full|semisparse|sparse)");
}

MemoryReport memoryReport(int nx, int ny, const std::array<long long, 9>& e,
                          StorageMode mode) {
  if (nx < 1 || ny < 1) throw UserError("memoryReport: nx, ny must be >= 1");
  for (long long c : e)
    if (c < 0) throw UserError("memoryReport: negative edge count");
  const long long NX = nx, NY = ny;
  const long long e1 = e[0], e2 = e[1], e3 = e[2], e4 = e[3], e5 = e[4],
                  e6 = e[5], e7 = e[6], e8 = e[7], e9 = e[8];
  const long long cornerSum = e3 + e9 + e1 + e7;
  const long long nA = NX * NY * e5;
  const long long nM = NY * (e2 + e8) + NX * (e6 + e4) + cornerSum;

  MemoryReport r;
  r.aUniqueBlocks = NX * NY + (NX - 1) * (NY - 1);
  switch (mode) {
    case StorageMode::Sparse:
      r.memA = (2 * NX * NY - NX - NY + 1) * e5 * e5;
      r.memB = (2 * NX * NY - NX) * e5 * (e2 + e8) +
               (2 * NX * NY - NY) * e5 * (e6 + e4) + NX * NY * e5 * cornerSum;
      r.memC = NX * NY * (e2 + e8) * (e4 + e6) + NY * (e2 * e2 + e8 * e8) +
               NX * (e6 * e6 + e4 * e4) + (2 * NY - 1) * e2 * e8 +
               (2 * NX - 1) * e6 * e4 +
               (NX * (e6 + e4) + NY * (e2 + e8)) * cornerSum + e7 * e7 +
               e3 * cornerSum + e9 * (e9 + e1 + e7) + e1 * (e1 + e7);
      break;
    case StorageMode::SemiSparse:
      r.memA = NY * (NX * e5) * (NX * e5);
      r.memB = nM * nA;
      r.memC = nM * nM;
      break;
    case StorageMode::Full:
      r.memA = nA * nA;
      r.memB = 2 * nM * nA;
      r.memC = nM * nM;
      break;
  }
  // Equal-count approximation (exact when the four edge components and the
  // four corners have equal sizes).
  const double eE = static_cast<double>(e5);
  const double em = static_cast<double>(e2 + e8 + e6 + e4) / 4.0;
  const double ec = static_cast<double>(cornerSum) / 4.0;
  const double nxy = static_cast<double>(NX * NY);
  r.approx = (2 * nxy - NX - NY + 1) * eE * eE +
             (8 * nxy - 2 * NX - 2 * NY) * eE * em + 4 * nxy * eE * ec +
             (4 * nxy + 4 * NX + 4 * NY - 2) * em * em +
             8 * (NX + NY) * em * ec + 10 * ec * ec;
  return r;
}

namespace {

[[noreturn]] void rangeFail(const std::string& what) {
  throw UserError("block index out of range: " + what);
}

}  // namespace

std::pair<int, int> locateABlock(int i, int j, int nx, int ny) {
  if (i < 0 || i > ny - 1) rangeFail("A level-1 shift i=" + std::to_string(i));
  if (j < 1 - nx || j > nx - 1)
    rangeFail("A level-0 shift j=" + std::to_string(j));
  const int jp = (std::abs(j) + j) / 2, jm = (std::abs(j) - j) / 2;
  return {i * nx + 1 + jp, 1 + jm};
}

std::pair<int, int> locateBBlock(int region, int j, int k, int nx, int ny) {
  const int nE = nx * ny;
  if (region == 1 || region == 2) {
    if (j < 1 - ny || j > ny - 1)
      rangeFail("B" + std::to_string(region) + " shift j=" + std::to_string(j));
    const int p = nE + (region - 1) * ny + (std::abs(j) + j) / 2 + 1;
    const int q = ((std::abs(j) - j) / 2) * nx + 1;
    return {p, q};
  }
  if (region == 3 || region == 4) {
    if (j < 0 || j > ny - 1)
      rangeFail("B" + std::to_string(region) + " row j=" + std::to_string(j));
    if (k < 1 - nx || k > nx - 1)
      rangeFail("B" + std::to_string(region) + " shift k=" + std::to_string(k));
    const int p = nE + 2 * ny + (region - 3) * nx + (std::abs(k) + k) / 2 + 1;
    const int q = j * nx + 1 + (std::abs(k) - k) / 2;
    return {p, q};
  }
  rangeFail("B region " + std::to_string(region));
}

std::pair<int, int> locateCBlock(int i, int j, int k, int nx, int ny) {
  const int nE = nx * ny;
  if (i >= 1 && i <= 2 && j >= 1 && j <= 2) {
    if (k < 1 - ny || k > ny - 1) rangeFail("C shift k=" + std::to_string(k));
    const int p = nE + (i - 1) * ny + 1;
    const int q = nE + (j - 1) * ny + 1;
    return {p + (std::abs(k) + k) / 2, q + (std::abs(k) - k) / 2};
  }
  if (i >= 3 && i <= 4 && j >= 3 && j <= 4) {
    if (k < 1 - nx || k > nx - 1) rangeFail("C shift k=" + std::to_string(k));
    const int p = nE + 2 * ny + (i - 3) * nx + 1;
    const int q = nE + 2 * ny + (j - 3) * nx + 1;
    return {p + (std::abs(k) + k) / 2, q + (std::abs(k) - k) / 2};
  }
  rangeFail("C region (" + std::to_string(i) + "," + std::to_string(j) + ")");
}

namespace {

// Margin group of a part: 0 = element, 1..4 = edge components 2,8,6,4,
// 5 = corners. `a` is the 1-based position within the group.
struct PartLoc {
  int group = 0;
  int a = 0;
  int row = 0, col = 0;  // element parts only
};

PartLoc locate(int p, int nx, int ny) {
  PartLoc L;
  const int nE = nx * ny;
  if (p <= nE) {
    L.group = 0;
    L.a = p;
    L.row = (p - 1) / nx + 1;
    L.col = (p - 1) % nx + 1;
    return L;
  }
  int rest = p - nE;
  if (rest <= ny) { L.group = 1; L.a = rest; return L; }
  rest -= ny;
  if (rest <= ny) { L.group = 2; L.a = rest; return L; }
  rest -= ny;
  if (rest <= nx) { L.group = 3; L.a = rest; return L; }
  rest -= nx;
  if (rest <= nx) { L.group = 4; L.a = rest; return L; }
  rest -= nx;
  L.group = 5;
  L.a = rest;  // 1..4, corner order 3,9,1,7
  return L;
}

constexpr std::array<int, 4> kEdgeComps = {2, 8, 6, 4};   // groups 1..4
constexpr std::array<int, 4> kCornerComps = {3, 9, 1, 7}; // group 5 order

// Sizes all stored matrices (zeroed) for the given mode and dimensions.
void initLayout(ToeplitzRep& rep) {
  const int nx = rep.nx, ny = rep.ny;
  const int e5 = rep.e[4];
  const long nA = rep.elementEdges();
  const long nM = rep.marginEdges();
  auto zeros = [](long r, long c) { return MatrixXc::Zero(r, c); };

  if (rep.mode == StorageMode::Full) {
    rep.zFull = zeros(nA + nM, nA + nM);
    return;
  }
  if (rep.mode == StorageMode::SemiSparse) {
    rep.aLevel1.assign(ny, zeros(static_cast<long>(nx) * e5,
                                 static_cast<long>(nx) * e5));
    rep.bFull = zeros(nM, nA);
    rep.cFull = zeros(nM, nM);
    return;
  }

  rep.aGen.assign(ny, {});
  rep.aGen[0].assign(nx, zeros(e5, e5));
  for (int i = 1; i < ny; ++i) rep.aGen[i].assign(2 * nx - 1, zeros(e5, e5));

  for (int r = 0; r < 2; ++r) {
    const int em = rep.e[kEdgeComps[r] - 1];
    rep.bSideGen[r].assign(2 * ny - 1, zeros(em, static_cast<long>(nx) * e5));
  }
  for (int r = 0; r < 2; ++r) {
    const int em = rep.e[kEdgeComps[2 + r] - 1];
    rep.bRowGen[r].assign(ny, std::vector<MatrixXc>(2 * nx - 1, zeros(em, e5)));
  }
  for (int ci = 0; ci < 4; ++ci)
    rep.bCorner[ci] =
        zeros(rep.e[kCornerComps[ci] - 1], static_cast<long>(nx) * ny * e5);

  const int e2 = rep.e[1], e8 = rep.e[7], e6 = rep.e[5], e4 = rep.e[3];
  rep.c11.assign(ny, zeros(e2, e2));
  rep.c21.assign(2 * ny - 1, zeros(e8, e2));
  rep.c22.assign(ny, zeros(e8, e8));
  rep.c33.assign(nx, zeros(e6, e6));
  rep.c43.assign(2 * nx - 1, zeros(e4, e6));
  rep.c44.assign(nx, zeros(e4, e4));
  rep.c31 = zeros(static_cast<long>(nx) * e6, static_cast<long>(ny) * e2);
  rep.c41 = zeros(static_cast<long>(nx) * e4, static_cast<long>(ny) * e2);
  rep.c32 = zeros(static_cast<long>(nx) * e6, static_cast<long>(ny) * e8);
  rep.c42 = zeros(static_cast<long>(nx) * e4, static_cast<long>(ny) * e8);
  long cornerTotal = 0;
  for (int c : kCornerComps) cornerTotal += rep.e[c - 1];
  const std::array<long, 4> groupCols = {static_cast<long>(ny) * e2,
                                         static_cast<long>(ny) * e8,
                                         static_cast<long>(nx) * e6,
                                         static_cast<long>(nx) * e4};
  for (int g = 0; g < 4; ++g) rep.c5x[g] = zeros(cornerTotal, groupCols[g]);
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      rep.c55[a][b] =
          zeros(rep.e[kCornerComps[a] - 1], rep.e[kCornerComps[b] - 1]);
}

long cornerRowStart(const ToeplitzRep& rep, int a) {
  long s = 0;
  for (int i = 0; i < a - 1; ++i) s += rep.e[kCornerComps[i] - 1];
  return s;
}

int cornerPartIndex(int a, int nx, int ny) {
  return nx * ny + 2 * ny + 2 * nx + a;
}

int groupPartIndex(int group, int a, int nx, int ny) {
  const int nE = nx * ny;
  switch (group) {
    case 1: return nE + a;
    case 2: return nE + ny + a;
    case 3: return nE + 2 * ny + a;
    case 4: return nE + 2 * ny + nx + a;
    case 5: return cornerPartIndex(a, nx, ny);
  }
  throw UserError("groupPartIndex: bad group");
}

struct AssemblyTask {
  MatrixXc* dst = nullptr;
  long rowStart = 0, colStart = 0;
  int pi = 0, pj = 0;
};

void runTasks(std::vector<AssemblyTask>& tasks, const ArrayModel& model,
              const KernelParams& params, int threads) {
  parallelFor(static_cast<long>(tasks.size()), threads, [&](long lo, long hi) {
    for (long t = lo; t < hi; ++t) {
      AssemblyTask& task = tasks[t];
      try {
        const auto shared =
            sharedTrianglesBetweenParts(task.pi, task.pj, model);
        const ImpedanceBlock blk = computeBlock(
            model.partData(task.pi), model.partData(task.pj),
            model.partOffset(task.pi), model.partOffset(task.pj), shared,
            params, 1);
        task.dst->block(task.rowStart, task.colStart, blk.rows, blk.cols) =
            blk.z;
      } catch (const NumericError& ex) {
        throw NumericError("block (" + std::to_string(task.pi) + "," +
                           std::to_string(task.pj) + "): " + ex.what());
      } catch (const std::exception& ex) {
        throw UserError("block (" + std::to_string(task.pi) + "," +
                        std::to_string(task.pj) + "): " + ex.what());
      }
    }
  });
}

ToeplitzRep assembleSparse(const ArrayModel& model, const KernelParams& params,
                           int threads) {
  ToeplitzRep rep;
  rep.mode = StorageMode::Sparse;
  rep.nx = model.nx;
  rep.ny = model.ny;
  for (int c = 1; c <= 9; ++c) rep.e[c - 1] = model.comps.edgeCountOf(c);
  initLayout(rep);

  const int nx = rep.nx, ny = rep.ny, e5 = rep.e[4];
  std::vector<AssemblyTask> tasks;

  for (int i = 0; i < ny; ++i) {
    const int jLo = (i == 0) ? 0 : 1 - nx;
    for (int j = jLo; j <= nx - 1; ++j) {
      const auto [pi, pj] = locateABlock(i, j, nx, ny);
      MatrixXc* dst = (i == 0) ? &rep.aGen[0][j] : &rep.aGen[i][j - (1 - nx)];
      tasks.push_back({dst, 0, 0, pi, pj});
    }
  }

  for (int r = 1; r <= 2; ++r) {
    if (rep.e[kEdgeComps[r - 1] - 1] == 0) continue;
    for (int j = 1 - ny; j <= ny - 1; ++j) {
      const auto [p, q] = locateBBlock(r, j, 0, nx, ny);
      MatrixXc* dst = &rep.bSideGen[r - 1][j - (1 - ny)];
      for (int cx = 0; cx < nx; ++cx)
        tasks.push_back({dst, 0, static_cast<long>(cx) * e5, p, q + cx});
    }
  }
  for (int r = 3; r <= 4; ++r) {
    if (rep.e[kEdgeComps[r - 1] - 1] == 0) continue;
    for (int j = 0; j < ny; ++j)
      for (int k = 1 - nx; k <= nx - 1; ++k) {
        const auto [p, q] = locateBBlock(r, j, k, nx, ny);
        tasks.push_back({&rep.bRowGen[r - 3][j][k - (1 - nx)], 0, 0, p, q});
      }
  }
  for (int ci = 1; ci <= 4; ++ci) {
    if (rep.e[kCornerComps[ci - 1] - 1] == 0) continue;
    const int pc = cornerPartIndex(ci, nx, ny);
    for (int q = 1; q <= nx * ny; ++q)
      tasks.push_back(
          {&rep.bCorner[ci - 1], 0, static_cast<long>(q - 1) * e5, pc, q});
  }

  auto addCToeplitz = [&](std::vector<MatrixXc>& store, int i, int j, int kLo,
                          int kHi) {
    for (int k = kLo; k <= kHi; ++k) {
      const auto [p, q] = locateCBlock(i, j, k, nx, ny);
      tasks.push_back({&store[k - kLo], 0, 0, p, q});
    }
  };
  if (rep.e[1] > 0) addCToeplitz(rep.c11, 1, 1, 0, ny - 1);
  if (rep.e[1] > 0 && rep.e[7] > 0) addCToeplitz(rep.c21, 2, 1, 1 - ny, ny - 1);
  if (rep.e[7] > 0) addCToeplitz(rep.c22, 2, 2, 0, ny - 1);
  if (rep.e[5] > 0) addCToeplitz(rep.c33, 3, 3, 0, nx - 1);
  if (rep.e[5] > 0 && rep.e[3] > 0) addCToeplitz(rep.c43, 4, 3, 1 - nx, nx - 1);
  if (rep.e[3] > 0) addCToeplitz(rep.c44, 4, 4, 0, nx - 1);

  auto addCFull = [&](MatrixXc* dst, int gRow, int gCol) {
    const int compR = kEdgeComps[gRow - 1], compC = kEdgeComps[gCol - 1];
    const int er = rep.e[compR - 1], ec = rep.e[compC - 1];
    if (er == 0 || ec == 0) return;
    const int nRow = (gRow <= 2) ? ny : nx, nCol = (gCol <= 2) ? ny : nx;
    for (int a = 1; a <= nRow; ++a)
      for (int b = 1; b <= nCol; ++b)
        tasks.push_back({dst, static_cast<long>(a - 1) * er,
                         static_cast<long>(b - 1) * ec,
                         groupPartIndex(gRow, a, nx, ny),
                         groupPartIndex(gCol, b, nx, ny)});
  };
  addCFull(&rep.c31, 3, 1);
  addCFull(&rep.c41, 4, 1);
  addCFull(&rep.c32, 3, 2);
  addCFull(&rep.c42, 4, 2);

  for (int g = 1; g <= 4; ++g) {
    const int ec = rep.e[kEdgeComps[g - 1] - 1];
    if (ec == 0) continue;
    const int nCol = (g <= 2) ? ny : nx;
    for (int a = 1; a <= 4; ++a) {
      if (rep.e[kCornerComps[a - 1] - 1] == 0) continue;
      for (int b = 1; b <= nCol; ++b)
        tasks.push_back({&rep.c5x[g - 1], cornerRowStart(rep, a),
                         static_cast<long>(b - 1) * ec,
                         cornerPartIndex(a, nx, ny),
                         groupPartIndex(g, b, nx, ny)});
    }
  }
  for (int a = 1; a <= 4; ++a)
    for (int b = a; b <= 4; ++b) {
      if (rep.e[kCornerComps[a - 1] - 1] == 0 ||
          rep.e[kCornerComps[b - 1] - 1] == 0)
        continue;
      tasks.push_back({&rep.c55[a - 1][b - 1], 0, 0,
                       cornerPartIndex(a, nx, ny), cornerPartIndex(b, nx, ny)});
    }

  runTasks(tasks, model, params, threads);
  return rep;
}

}  // namespace

MatrixXc partBlock(const ToeplitzRep& rep, const ArrayModel& model, int partI,
                   int partJ) {
  const int nx = rep.nx, ny = rep.ny, e5 = rep.e[4];
  const PartLoc li = locate(partI, nx, ny);
  const PartLoc lj = locate(partJ, nx, ny);

  if (rep.mode == StorageMode::Full) {
    return rep.zFull.block(model.edgeStart[partI - 1], model.edgeStart[partJ - 1],
                           model.partEdgeCount(partI),
                           model.partEdgeCount(partJ));
  }

  if (rep.mode == StorageMode::SemiSparse) {
    const long nA = rep.elementEdges();
    if (li.group == 0 && lj.group == 0) {
      const int i = li.row - lj.row;
      if (i >= 0)
        return rep.aLevel1[i].block(static_cast<long>(li.col - 1) * e5,
                                    static_cast<long>(lj.col - 1) * e5, e5, e5);
      return rep.aLevel1[-i]
          .block(static_cast<long>(lj.col - 1) * e5,
                 static_cast<long>(li.col - 1) * e5, e5, e5)
          .transpose();
    }
    if (li.group != 0 && lj.group == 0)
      return rep.bFull.block(model.edgeStart[partI - 1] - nA,
                             model.edgeStart[partJ - 1],
                             model.partEdgeCount(partI),
                             model.partEdgeCount(partJ));
    if (li.group == 0 && lj.group != 0)
      return partBlock(rep, model, partJ, partI).transpose();
    return rep.cFull.block(model.edgeStart[partI - 1] - nA,
                           model.edgeStart[partJ - 1] - nA,
                           model.partEdgeCount(partI),
                           model.partEdgeCount(partJ));
  }

  // Sparse.
  if (li.group == 0 && lj.group == 0) {
    int i = li.row - lj.row;
    int j = li.col - lj.col;
    bool transpose = false;
    if (i < 0 || (i == 0 && j < 0)) {
      i = -i;
      j = -j;
      transpose = true;
    }
    const MatrixXc& g = (i == 0) ? rep.aGen[0][j] : rep.aGen[i][j - (1 - nx)];
    return transpose ? MatrixXc(g.transpose()) : g;
  }

  if (li.group != 0 && lj.group == 0) {
    if (li.group == 1 || li.group == 2) {
      const int j = li.a - lj.row;
      const MatrixXc& g = rep.bSideGen[li.group - 1][j - (1 - ny)];
      return g.middleCols(static_cast<long>(lj.col - 1) * e5, e5);
    }
    if (li.group == 3 || li.group == 4) {
      const int k = li.a - lj.col;
      return rep.bRowGen[li.group - 3][lj.row - 1][k - (1 - nx)];
    }
    return rep.bCorner[li.a - 1].middleCols(static_cast<long>(lj.a - 1) * e5,
                                            e5);
  }
  if (li.group == 0 && lj.group != 0)
    return partBlock(rep, model, partJ, partI).transpose();

  // Margin against margin.
  const int gi = li.group, gj = lj.group;
  const int a = li.a, b = lj.a;
  auto toeplitzDiag = [&](const std::vector<MatrixXc>& store) -> MatrixXc {
    const int k = a - b;
    if (k >= 0) return store[k];
    return store[-k].transpose();
  };
  if (gi == 1 && gj == 1) return toeplitzDiag(rep.c11);
  if (gi == 2 && gj == 2) return toeplitzDiag(rep.c22);
  if (gi == 3 && gj == 3) return toeplitzDiag(rep.c33);
  if (gi == 4 && gj == 4) return toeplitzDiag(rep.c44);
  if (gi == 2 && gj == 1) return rep.c21[(a - b) - (1 - ny)];
  if (gi == 1 && gj == 2) return rep.c21[(b - a) - (1 - ny)].transpose();
  if (gi == 4 && gj == 3) return rep.c43[(a - b) - (1 - nx)];
  if (gi == 3 && gj == 4) return rep.c43[(b - a) - (1 - nx)].transpose();

  auto cFullAt = [&](const MatrixXc& m, int aRow, int bCol, int er,
                     int ec) -> MatrixXc {
    return m.block(static_cast<long>(aRow - 1) * er,
                   static_cast<long>(bCol - 1) * ec, er, ec);
  };
  const auto eOf = [&](int group) { return rep.e[kEdgeComps[group - 1] - 1]; };
  if (gi == 3 && gj == 1) return cFullAt(rep.c31, a, b, eOf(3), eOf(1));
  if (gi == 1 && gj == 3)
    return cFullAt(rep.c31, b, a, eOf(3), eOf(1)).transpose();
  if (gi == 4 && gj == 1) return cFullAt(rep.c41, a, b, eOf(4), eOf(1));
  if (gi == 1 && gj == 4)
    return cFullAt(rep.c41, b, a, eOf(4), eOf(1)).transpose();
  if (gi == 3 && gj == 2) return cFullAt(rep.c32, a, b, eOf(3), eOf(2));
  if (gi == 2 && gj == 3)
    return cFullAt(rep.c32, b, a, eOf(3), eOf(2)).transpose();
  if (gi == 4 && gj == 2) return cFullAt(rep.c42, a, b, eOf(4), eOf(2));
  if (gi == 2 && gj == 4)
    return cFullAt(rep.c42, b, a, eOf(4), eOf(2)).transpose();

  if (gi == 5 && gj != 5) {
    const int ec = eOf(gj);
    return rep.c5x[gj - 1].block(cornerRowStart(rep, a),
                                 static_cast<long>(b - 1) * ec,
                                 rep.e[kCornerComps[a - 1] - 1], ec);
  }
  if (gi != 5 && gj == 5)
    return partBlock(rep, model, partJ, partI).transpose();
  // Both corners.
  if (a <= b) return rep.c55[a - 1][b - 1];
  return rep.c55[b - 1][a - 1].transpose();
}

DenseSystem reconstructFull(const ToeplitzRep& rep, const ArrayModel& model) {
  DenseSystem out;
  const long n = model.totalEdges();
  out.z = MatrixXc::Zero(n, n);
  const int pn = model.partCount();
  for (int pi = 1; pi <= pn; ++pi)
    for (int pj = 1; pj <= pn; ++pj) {
      const long r = model.edgeStart[pi - 1], c = model.edgeStart[pj - 1];
      const int nr = model.partEdgeCount(pi), nc = model.partEdgeCount(pj);
      if (nr == 0 || nc == 0) continue;
      out.z.block(r, c, nr, nc) = partBlock(rep, model, pi, pj);
    }
  out.translation.reserve(n);
  for (int p = 1; p <= pn; ++p) {
    const auto& ids = model.partData(p).globalEdges;
    out.translation.insert(out.translation.end(), ids.begin(), ids.end());
  }
  return out;
}

ToeplitzRep assemble(const ArrayModel& model, const KernelParams& params,
                     StorageMode mode, int threads) {
  params.validate();
  ToeplitzRep sparse = assembleSparse(model, params, threads);
  if (mode == StorageMode::Sparse) return sparse;

  ToeplitzRep rep;
  rep.mode = mode;
  rep.nx = sparse.nx;
  rep.ny = sparse.ny;
  rep.e = sparse.e;
  initLayout(rep);

  const int nx = rep.nx, ny = rep.ny, e5 = rep.e[4];
  const long nA = rep.elementEdges();
  const int pn = model.partCount();
  const int nE = nx * ny;

  if (mode == StorageMode::SemiSparse) {
    for (int i = 0; i < ny; ++i)
      for (int c1 = 1; c1 <= nx; ++c1)
        for (int c2 = 1; c2 <= nx; ++c2) {
          const int pi = i * nx + c1;  // element part at (row i+1, col c1)
          const int pj = c2;           // element part at (row 1, col c2)
          rep.aLevel1[i].block(static_cast<long>(c1 - 1) * e5,
                               static_cast<long>(c2 - 1) * e5, e5, e5) =
              partBlock(sparse, model, pi, pj);
        }
    for (int pi = nE + 1; pi <= pn; ++pi) {
      if (model.partEdgeCount(pi) == 0) continue;
      for (int pj = 1; pj <= nE; ++pj)
        rep.bFull.block(model.edgeStart[pi - 1] - nA, model.edgeStart[pj - 1],
                        model.partEdgeCount(pi), model.partEdgeCount(pj)) =
            partBlock(sparse, model, pi, pj);
      for (int pj = nE + 1; pj <= pn; ++pj) {
        if (model.partEdgeCount(pj) == 0) continue;
        rep.cFull.block(model.edgeStart[pi - 1] - nA,
                        model.edgeStart[pj - 1] - nA, model.partEdgeCount(pi),
                        model.partEdgeCount(pj)) =
            partBlock(sparse, model, pi, pj);
      }
    }
    return rep;
  }

  rep.zFull = reconstructFull(sparse, model).z;
  return rep;
}

MatrixXc assembleDenseParts(const ArrayModel& model, const KernelParams& params,
                            int threads) {
  params.validate();
  const long n = model.totalEdges();
  MatrixXc z = MatrixXc::Zero(n, n);
  const int pn = model.partCount();
  std::vector<std::pair<int, int>> pairs;
  for (int pi = 1; pi <= pn; ++pi)
    for (int pj = pi; pj <= pn; ++pj) pairs.emplace_back(pi, pj);
  parallelFor(static_cast<long>(pairs.size()), threads, [&](long lo, long hi) {
    for (long t = lo; t < hi; ++t) {
      const auto [pi, pj] = pairs[t];
      if (model.partEdgeCount(pi) == 0 || model.partEdgeCount(pj) == 0)
        continue;
      const auto shared = sharedTrianglesBetweenParts(pi, pj, model);
      const ImpedanceBlock blk =
          computeBlock(model.partData(pi), model.partData(pj),
                       model.partOffset(pi), model.partOffset(pj), shared,
                       params, 1);
      z.block(model.edgeStart[pi - 1], model.edgeStart[pj - 1], blk.rows,
              blk.cols) = blk.z;
      if (pi != pj)
        z.block(model.edgeStart[pj - 1], model.edgeStart[pi - 1], blk.cols,
                blk.rows) = blk.z.transpose();
    }
  });
  return z;
}

long long ToeplitzRep::storedEntries() const {
  long long n = 0;
  auto add = [&n](const MatrixXc& m) { n += m.size(); };
  for (const auto& row : aGen)
    for (const auto& m : row) add(m);
  for (const auto& v : bSideGen)
    for (const auto& m : v) add(m);
  for (const auto& rg : bRowGen)
    for (const auto& row : rg)
      for (const auto& m : row) add(m);
  for (const auto& m : bCorner) add(m);
  for (const auto* v : {&c11, &c21, &c22, &c33, &c43, &c44})
    for (const auto& m : *v) add(m);
  for (const auto* m : {&c31, &c41, &c32, &c42}) add(*m);
  for (const auto& m : c5x) add(m);
  for (const auto& row : c55)
    for (const auto& m : row) add(m);
  for (const auto& m : aLevel1) add(m);
  add(bFull);
  add(cFull);
  add(zFull);
  return n;
}

long long ToeplitzRep::aBlockCount() const {
  return static_cast<long long>(nx) * ny +
         static_cast<long long>(nx - 1) * (ny - 1);
}

namespace {

enum class RecordTag : uint8_t {
  AGen = 1,
  BSide = 2,
  BRow = 3,
  BCorner = 4,
  CToe = 5,
  CFullRect = 6,
  C5x = 7,
  C55 = 8,
  ALevel1 = 9,
  BFullM = 10,
  CFullM = 11,
  ZFullM = 12,
  End = 255
};

void writeRaw(std::ofstream& out, const void* p, size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

template <typename T>
void writeVal(std::ofstream& out, T v) {
  writeRaw(out, &v, sizeof v);
}

void writeMatrix(std::ofstream& out, RecordTag tag, int i0, int i1, int i2,
                 const MatrixXc& m) {
  writeVal(out, static_cast<uint8_t>(tag));
  writeVal(out, static_cast<int32_t>(i0));
  writeVal(out, static_cast<int32_t>(i1));
  writeVal(out, static_cast<int32_t>(i2));
  writeVal(out, static_cast<int64_t>(m.rows()));
  writeVal(out, static_cast<int64_t>(m.cols()));
  writeRaw(out, m.data(), sizeof(Complex) * m.size());
}

void readRaw(std::ifstream& in, void* p, size_t n) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!in) throw UserError("block cache: truncated file");
}

template <typename T>
T readVal(std::ifstream& in) {
  T v;
  readRaw(in, &v, sizeof v);
  return v;
}

void checkLittleEndian() {
  const uint32_t probe = 1;
  uint8_t first;
  std::memcpy(&first, &probe, 1);
  if (first != 1)
    throw UserError("block cache requires a little-endian host");
}

}  // namespace

void saveBlockCache(const ToeplitzRep& rep, const std::string& path) {
  checkLittleEndian();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UserError("cannot write block cache: " + path);
  out.write("ZTOE1", 5);
  writeVal(out, static_cast<uint8_t>(rep.mode));
  writeVal(out, static_cast<int32_t>(rep.nx));
  writeVal(out, static_cast<int32_t>(rep.ny));
  for (int c = 0; c < 9; ++c) writeVal(out, static_cast<int32_t>(rep.e[c]));

  for (size_t i = 0; i < rep.aGen.size(); ++i)
    for (size_t j = 0; j < rep.aGen[i].size(); ++j)
      writeMatrix(out, RecordTag::AGen, static_cast<int>(i),
                  static_cast<int>(j), 0, rep.aGen[i][j]);
  for (int r = 0; r < 2; ++r)
    for (size_t j = 0; j < rep.bSideGen[r].size(); ++j)
      writeMatrix(out, RecordTag::BSide, r, static_cast<int>(j), 0,
                  rep.bSideGen[r][j]);
  for (int r = 0; r < 2; ++r)
    for (size_t j = 0; j < rep.bRowGen[r].size(); ++j)
      for (size_t k = 0; k < rep.bRowGen[r][j].size(); ++k)
        writeMatrix(out, RecordTag::BRow, r, static_cast<int>(j),
                    static_cast<int>(k), rep.bRowGen[r][j][k]);
  for (int c = 0; c < 4; ++c)
    writeMatrix(out, RecordTag::BCorner, c, 0, 0, rep.bCorner[c]);
  const std::array<const std::vector<MatrixXc>*, 6> ctoe = {
      &rep.c11, &rep.c21, &rep.c22, &rep.c33, &rep.c43, &rep.c44};
  for (int r = 0; r < 6; ++r)
    for (size_t k = 0; k < ctoe[r]->size(); ++k)
      writeMatrix(out, RecordTag::CToe, r, static_cast<int>(k), 0,
                  (*ctoe[r])[k]);
  const std::array<const MatrixXc*, 4> crect = {&rep.c31, &rep.c41, &rep.c32,
                                                &rep.c42};
  for (int r = 0; r < 4; ++r)
    writeMatrix(out, RecordTag::CFullRect, r, 0, 0, *crect[r]);
  for (int g = 0; g < 4; ++g)
    writeMatrix(out, RecordTag::C5x, g, 0, 0, rep.c5x[g]);
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      writeMatrix(out, RecordTag::C55, a, b, 0, rep.c55[a][b]);
  for (size_t i = 0; i < rep.aLevel1.size(); ++i)
    writeMatrix(out, RecordTag::ALevel1, static_cast<int>(i), 0, 0,
                rep.aLevel1[i]);
  if (rep.bFull.size() > 0)
    writeMatrix(out, RecordTag::BFullM, 0, 0, 0, rep.bFull);
  if (rep.cFull.size() > 0)
    writeMatrix(out, RecordTag::CFullM, 0, 0, 0, rep.cFull);
  if (rep.zFull.size() > 0)
    writeMatrix(out, RecordTag::ZFullM, 0, 0, 0, rep.zFull);
  writeVal(out, static_cast<uint8_t>(RecordTag::End));
  if (!out) throw UserError("failed writing block cache: " + path);
}

ToeplitzRep loadBlockCache(const std::string& path) {
  checkLittleEndian();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UserError("cannot open block cache: " + path);
  char magic[5];
  readRaw(in, magic, 5);
  if (std::string(magic, 5) != "ZTOE1")
    throw UserError("not a ZTOE1 block cache: " + path);
  ToeplitzRep rep;
  rep.mode = static_cast<StorageMode>(readVal<uint8_t>(in));
  rep.nx = readVal<int32_t>(in);
  rep.ny = readVal<int32_t>(in);
  if (rep.nx < 1 || rep.ny < 1)
    throw UserError("block cache: bad dimensions");
  for (int c = 0; c < 9; ++c) rep.e[c] = readVal<int32_t>(in);
  initLayout(rep);

  for (;;) {
    const auto tag = static_cast<RecordTag>(readVal<uint8_t>(in));
    if (tag == RecordTag::End) break;
    const int i0 = readVal<int32_t>(in);
    const int i1 = readVal<int32_t>(in);
    const int i2 = readVal<int32_t>(in);
    const int64_t rows = readVal<int64_t>(in);
    const int64_t cols = readVal<int64_t>(in);
    MatrixXc* dst = nullptr;
    try {
      switch (tag) {
        case RecordTag::AGen: dst = &rep.aGen.at(i0).at(i1); break;
        case RecordTag::BSide: dst = &rep.bSideGen.at(i0).at(i1); break;
        case RecordTag::BRow: dst = &rep.bRowGen.at(i0).at(i1).at(i2); break;
        case RecordTag::BCorner: dst = &rep.bCorner.at(i0); break;
        case RecordTag::CToe: {
          const std::array<std::vector<MatrixXc>*, 6> ctoe = {
              &rep.c11, &rep.c21, &rep.c22, &rep.c33, &rep.c43, &rep.c44};
          dst = &ctoe.at(i0)->at(i1);
          break;
        }
        case RecordTag::CFullRect: {
          const std::array<MatrixXc*, 4> crect = {&rep.c31, &rep.c41, &rep.c32,
                                                  &rep.c42};
          dst = crect.at(i0);
          break;
        }
        case RecordTag::C5x: dst = &rep.c5x.at(i0); break;
        case RecordTag::C55: dst = &rep.c55.at(i0).at(i1); break;
        case RecordTag::ALevel1: dst = &rep.aLevel1.at(i0); break;
        case RecordTag::BFullM: dst = &rep.bFull; break;
        case RecordTag::CFullM: dst = &rep.cFull; break;
        case RecordTag::ZFullM: dst = &rep.zFull; break;
        default: throw UserError("block cache: unknown record tag");
      }
    } catch (const std::out_of_range&) {
      throw UserError("block cache: record index out of range");
    }
    if (dst->rows() != rows || dst->cols() != cols)
      throw UserError("block cache: record dimensions do not match layout");
    readRaw(in, dst->data(), sizeof(Complex) * static_cast<size_t>(rows) *
                                 static_cast<size_t>(cols));
  }
  return rep;
}

}  // namespace arraymom
