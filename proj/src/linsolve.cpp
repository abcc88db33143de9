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

#include "arraymom/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include <Eigen/LU>

#include "arraymom/fft.hpp"

namespace arraymom {

ExcitationSet buildExcitation(const ArrayModel& model, int feedLocalEdge,
                              const std::vector<int>& ports) {
  const int e5 = model.comps.edgeCountOf(5);
  if (feedLocalEdge < 1 || feedLocalEdge > e5)
    throw UserError("feed edge " + std::to_string(feedLocalEdge) +
                    " outside component 5 (has " + std::to_string(e5) +
                    " edges)");
  if (ports.empty()) throw UserError("no excitation: empty port list");
  ExcitationSet ex;
  ex.feedLocalEdge = feedLocalEdge;
  ex.ports = ports;
  ex.v = MatrixXc::Zero(model.totalEdges(), ports.size());
  for (size_t c = 0; c < ports.size(); ++c) {
    const int p = ports[c];
    if (p < 1 || p > model.elementParts())
      throw UserError("port " + std::to_string(p) +
                      " is not an element part index");
    const long row = model.edgeStart[p - 1] + feedLocalEdge - 1;
    ex.feedRows.push_back(row);
    ex.v(row, c) = 1.0;
  }
  return ex;
}

namespace {

// One-level block Toeplitz operator applied through a circulant embedding.
struct Toe1D {
  long p = 0, q = 0;  // block dims
  int nr = 0, nc = 0;
  long L = 0;
  std::vector<Complex> ghat;  // (p*q) spectra, [(i*q+j)*L + f]

  bool emptyOp() const { return p == 0 || q == 0 || nr == 0 || nc == 0; }

  // gen(shift) must return a p x q matrix view for shift in [1-nc, nr-1].
  template <typename Gen>
  void build(long pIn, long qIn, int nrIn, int ncIn, Gen&& gen) {
    p = pIn;
    q = qIn;
    nr = nrIn;
    nc = ncIn;
    if (emptyOp()) return;
    L = static_cast<long>(nextPow2(static_cast<size_t>(nr + nc - 1)));
    ghat.assign(static_cast<size_t>(p) * q * L, Complex{0.0, 0.0});
    std::vector<Complex> seq(L);
    for (long i = 0; i < p; ++i)
      for (long j = 0; j < q; ++j) {
        std::fill(seq.begin(), seq.end(), Complex{0.0, 0.0});
        for (int s = 0; s < nr; ++s) seq[s] = gen(s)(i, j);
        for (int s = 1; s < nc; ++s) seq[L - s] = gen(-s)(i, j);
        fftInPlace(seq.data(), L, false);
        std::copy(seq.begin(), seq.end(),
                  ghat.begin() + (i * q + j) * L);
      }
  }

  // y += T x, x of length nc*q, y of length nr*p.
  void apply(const Complex* x, Complex* y) const {
    if (emptyOp()) return;
    std::vector<Complex> xhat(static_cast<size_t>(q) * L, Complex{0.0, 0.0});
    for (long j = 0; j < q; ++j) {
      Complex* row = xhat.data() + j * L;
      for (int b = 0; b < nc; ++b) row[b] = x[static_cast<long>(b) * q + j];
      fftInPlace(row, L, false);
    }
    std::vector<Complex> acc(L);
    for (long i = 0; i < p; ++i) {
      std::fill(acc.begin(), acc.end(), Complex{0.0, 0.0});
      for (long j = 0; j < q; ++j) {
        const Complex* g = ghat.data() + (i * q + j) * L;
        const Complex* xr = xhat.data() + j * L;
        for (long f = 0; f < L; ++f) acc[f] += g[f] * xr[f];
      }
      fftInPlace(acc.data(), L, true);
      const double scale = 1.0 / static_cast<double>(L);
      for (int a = 0; a < nr; ++a)
        y[static_cast<long>(a) * p + i] += acc[a] * scale;
    }
  }

  // y += T^T x, x of length nr*p, y of length nc*q. Uses the identity that
  // the transposed circulant's spectrum is the frequency-reversed original.
  void applyT(const Complex* x, Complex* y) const {
    if (emptyOp()) return;
    std::vector<Complex> xhat(static_cast<size_t>(p) * L, Complex{0.0, 0.0});
    for (long i = 0; i < p; ++i) {
      Complex* row = xhat.data() + i * L;
      for (int a = 0; a < nr; ++a) row[a] = x[static_cast<long>(a) * p + i];
      fftInPlace(row, L, false);
    }
    std::vector<Complex> acc(L);
    for (long j = 0; j < q; ++j) {
      std::fill(acc.begin(), acc.end(), Complex{0.0, 0.0});
      for (long i = 0; i < p; ++i) {
        const Complex* g = ghat.data() + (i * q + j) * L;
        const Complex* xr = xhat.data() + i * L;
        for (long f = 0; f < L; ++f)
          acc[f] += g[(L - f) % L] * xr[f];
      }
      fftInPlace(acc.data(), L, true);
      const double scale = 1.0 / static_cast<double>(L);
      for (int b = 0; b < nc; ++b)
        y[static_cast<long>(b) * q + j] += acc[b] * scale;
    }
  }
};

}  // namespace

struct ToeplitzMatvec::Impl {
  const ToeplitzRep& rep;
  const ArrayModel& model;
  int nx, ny, e5;
  long nA, nM;
  long L0 = 1, L1 = 1, L = 1;
  bool fullMode = false;
  bool semiMode = false;

  std::vector<Complex> ahat;  // [(m*e5+n)*L + f], f = s1*L0 + s0

  std::array<Toe1D, 2> bSide;                 // regions 1, 2
  std::array<std::vector<Toe1D>, 2> bRow;     // regions 3, 4, per element row
  std::array<long, 2> bRowGroupStart{};       // row offsets of groups 3, 4
  std::array<long, 2> bSideGroupStart{};

  std::vector<int> marginParts;
  std::vector<long> marginStart;              // margin-relative offsets
  std::vector<MatrixXc> cBlocks;              // cached margin x margin blocks
  std::vector<MatrixXc> bCornerBlocks;        // per corner (may be empty)
  std::array<long, 4> cornerStart{};

  Impl(const ToeplitzRep& r, const ArrayModel& m) : rep(r), model(m) {
    nx = rep.nx;
    ny = rep.ny;
    e5 = rep.e[4];
    nA = rep.elementEdges();
    nM = rep.marginEdges();
    fullMode = rep.mode == StorageMode::Full;
    semiMode = rep.mode == StorageMode::SemiSparse;

    const int pn = model.partCount();
    for (int p = nx * ny + 1; p <= pn; ++p) {
      marginParts.push_back(p);
      marginStart.push_back(model.edgeStart[p - 1] - nA);
    }
    if (fullMode) return;

    buildASpectra();
    if (semiMode) return;  // B, C applied from the dense stores

    // B1/B2: Toeplitz over y with row blocks spanning one element row.
    for (int r = 0; r < 2; ++r) {
      const int comp = (r == 0) ? 2 : 8;
      const long em = rep.e[comp - 1];
      bSide[r].build(em, static_cast<long>(nx) * e5, ny, ny, [&](int s) {
        return rep.bSideGen[r][s - (1 - ny)];
      });
    }
    // B3/B4: per element row, Toeplitz over x.
    for (int r = 0; r < 2; ++r) {
      const int comp = (r == 0) ? 6 : 4;
      const long em = rep.e[comp - 1];
      bRow[r].resize(ny);
      for (int j = 0; j < ny; ++j)
        bRow[r][j].build(em, e5, nx, nx, [&, j](int s) {
          return rep.bRowGen[r][j][s - (1 - nx)];
        });
    }
    bSideGroupStart = {0, static_cast<long>(ny) * rep.e[1]};
    bRowGroupStart = {static_cast<long>(ny) * (rep.e[1] + rep.e[7]),
                      static_cast<long>(ny) * (rep.e[1] + rep.e[7]) +
                          static_cast<long>(nx) * rep.e[5]};
    long cs = bRowGroupStart[1] + static_cast<long>(nx) * rep.e[3];
    const std::array<int, 4> cornerComps = {3, 9, 1, 7};
    for (int c = 0; c < 4; ++c) {
      cornerStart[c] = cs;
      cs += rep.e[cornerComps[c] - 1];
      bCornerBlocks.push_back(rep.bCorner[c]);
    }

    // Margin-against-margin blocks, cached once for the blockwise C apply.
    const size_t pm = marginParts.size();
    cBlocks.resize(pm * pm);
    for (size_t a = 0; a < pm; ++a)
      for (size_t b = 0; b < pm; ++b)
        cBlocks[a * pm + b] =
            partBlock(rep, model, marginParts[a], marginParts[b]);
  }

  Complex aEntry(int i, int j, int m, int n) const {
    if (i < 0 || (i == 0 && j < 0)) return aEntry(-i, -j, n, m);
    if (semiMode) {
      const int c1 = 1 + std::max(j, 0), c2 = 1 + std::max(-j, 0);
      return rep.aLevel1[i](static_cast<long>(c1 - 1) * e5 + m,
                            static_cast<long>(c2 - 1) * e5 + n);
    }
    if (i == 0) return rep.aGen[0][j](m, n);
    return rep.aGen[i][j - (1 - nx)](m, n);
  }

  void fft2(Complex* g, bool inverse) const {
    for (long r = 0; r < L1; ++r) fftInPlace(g + r * L0, L0, inverse);
    std::vector<Complex> col(L1);
    for (long c = 0; c < L0; ++c) {
      for (long r = 0; r < L1; ++r) col[r] = g[r * L0 + c];
      fftInPlace(col.data(), L1, inverse);
      for (long r = 0; r < L1; ++r) g[r * L0 + c] = col[r];
    }
  }

  void buildASpectra() {
    L1 = static_cast<long>(nextPow2(static_cast<size_t>(2 * ny - 1)));
    L0 = static_cast<long>(nextPow2(static_cast<size_t>(2 * nx - 1)));
    L = L1 * L0;
    ahat.assign(static_cast<size_t>(e5) * e5 * L, Complex{0.0, 0.0});
    std::vector<Complex> grid(L);
    for (int m = 0; m < e5; ++m)
      for (int n = 0; n < e5; ++n) {
        std::fill(grid.begin(), grid.end(), Complex{0.0, 0.0});
        for (int i = 1 - ny; i <= ny - 1; ++i)
          for (int j = 1 - nx; j <= nx - 1; ++j) {
            const long s1 = (i >= 0) ? i : L1 + i;
            const long s0 = (j >= 0) ? j : L0 + j;
            grid[s1 * L0 + s0] = aEntry(i, j, m, n);
          }
        fft2(grid.data(), false);
        std::copy(grid.begin(), grid.end(),
                  ahat.begin() + (static_cast<size_t>(m) * e5 + n) * L);
      }
  }

  VectorXc applyA(const VectorXc& xA) const {
    if (xA.size() != nA) throw UserError("matvec: element block size mismatch");
    if (fullMode) return rep.zFull.topLeftCorner(nA, nA) * xA;
    VectorXc y = VectorXc::Zero(nA);
    std::vector<Complex> xhat(static_cast<size_t>(e5) * L);
    std::vector<Complex> grid(L);
    for (int n = 0; n < e5; ++n) {
      std::fill(grid.begin(), grid.end(), Complex{0.0, 0.0});
      for (int r = 0; r < ny; ++r)
        for (int c = 0; c < nx; ++c)
          grid[static_cast<long>(r) * L0 + c] =
              xA((static_cast<long>(r) * nx + c) * e5 + n);
      fft2(grid.data(), false);
      std::copy(grid.begin(), grid.end(), xhat.begin() + static_cast<size_t>(n) * L);
    }
    const double scale = 1.0 / static_cast<double>(L);
    for (int m = 0; m < e5; ++m) {
      std::fill(grid.begin(), grid.end(), Complex{0.0, 0.0});
      for (int n = 0; n < e5; ++n) {
        const Complex* g = ahat.data() + (static_cast<size_t>(m) * e5 + n) * L;
        const Complex* xr = xhat.data() + static_cast<size_t>(n) * L;
        for (long f = 0; f < L; ++f) grid[f] += g[f] * xr[f];
      }
      fft2(grid.data(), true);
      for (int r = 0; r < ny; ++r)
        for (int c = 0; c < nx; ++c)
          y((static_cast<long>(r) * nx + c) * e5 + m) =
              grid[static_cast<long>(r) * L0 + c] * scale;
    }
    return y;
  }

  VectorXc applyB(const VectorXc& xA) const {
    if (fullMode)
      return rep.zFull.bottomLeftCorner(nM, nA) * xA;
    if (semiMode) return rep.bFull * xA;
    VectorXc y = VectorXc::Zero(nM);
    for (int r = 0; r < 2; ++r)
      bSide[r].apply(xA.data(), y.data() + bSideGroupStart[r]);
    for (int r = 0; r < 2; ++r) {
      const long em = bRow[r].empty() || bRow[r][0].emptyOp()
                          ? 0
                          : bRow[r][0].p;
      if (em == 0) continue;
      for (int j = 0; j < ny; ++j)
        bRow[r][j].apply(xA.data() + static_cast<long>(j) * nx * e5,
                         y.data() + bRowGroupStart[r]);
    }
    for (int c = 0; c < 4; ++c) {
      const MatrixXc& bc = bCornerBlocks[c];
      if (bc.rows() == 0) continue;
      y.segment(cornerStart[c], bc.rows()) += bc * xA;
    }
    return y;
  }

  VectorXc applyBT(const VectorXc& xM) const {
    if (fullMode) return rep.zFull.topRightCorner(nA, nM) * xM;
    if (semiMode) return rep.bFull.transpose() * xM;
    VectorXc y = VectorXc::Zero(nA);
    for (int r = 0; r < 2; ++r)
      bSide[r].applyT(xM.data() + bSideGroupStart[r], y.data());
    for (int r = 0; r < 2; ++r) {
      if (bRow[r].empty() || bRow[r][0].emptyOp()) continue;
      for (int j = 0; j < ny; ++j)
        bRow[r][j].applyT(xM.data() + bRowGroupStart[r],
                          y.data() + static_cast<long>(j) * nx * e5);
    }
    for (int c = 0; c < 4; ++c) {
      const MatrixXc& bc = bCornerBlocks[c];
      if (bc.rows() == 0) continue;
      y += bc.transpose() * xM.segment(cornerStart[c], bc.rows());
    }
    return y;
  }

  VectorXc applyC(const VectorXc& xM) const {
    if (fullMode) return rep.zFull.bottomRightCorner(nM, nM) * xM;
    if (semiMode) return rep.cFull * xM;
    VectorXc y = VectorXc::Zero(nM);
    const size_t pm = marginParts.size();
    for (size_t a = 0; a < pm; ++a)
      for (size_t b = 0; b < pm; ++b) {
        const MatrixXc& blk = cBlocks[a * pm + b];
        if (blk.size() == 0) continue;
        y.segment(marginStart[a], blk.rows()) +=
            blk * xM.segment(marginStart[b], blk.cols());
      }
    return y;
  }
};

ToeplitzMatvec::ToeplitzMatvec(const ToeplitzRep& rep, const ArrayModel& model)
    : impl_(std::make_unique<Impl>(rep, model)) {}

ToeplitzMatvec::~ToeplitzMatvec() = default;

long ToeplitzMatvec::sizeA() const { return impl_->nA; }
long ToeplitzMatvec::sizeM() const { return impl_->nM; }

VectorXc ToeplitzMatvec::applyA(const VectorXc& xA) const {
  return impl_->applyA(xA);
}
VectorXc ToeplitzMatvec::applyB(const VectorXc& xA) const {
  return impl_->applyB(xA);
}
VectorXc ToeplitzMatvec::applyBT(const VectorXc& xM) const {
  return impl_->applyBT(xM);
}
VectorXc ToeplitzMatvec::applyC(const VectorXc& xM) const {
  return impl_->applyC(xM);
}

VectorXc ToeplitzMatvec::apply(const VectorXc& x) const {
  const long nA = impl_->nA, nM = impl_->nM;
  if (x.size() != nA + nM)
    throw UserError("matvec: vector length " + std::to_string(x.size()) +
                    " does not match system size " + std::to_string(nA + nM));
  VectorXc y(nA + nM);
  const VectorXc xA = x.head(nA);
  if (nM == 0) {
    y = impl_->applyA(xA);
    return y;
  }
  const VectorXc xM = x.tail(nM);
  y.head(nA) = impl_->applyA(xA) + impl_->applyBT(xM);
  y.tail(nM) = impl_->applyB(xA) + impl_->applyC(xM);
  return y;
}

VectorXc ToeplitzMatvec::diagonal() const {
  const Impl& im = *impl_;
  VectorXc d(im.nA + im.nM);
  if (im.fullMode) {
    d = im.rep.zFull.diagonal();
    return d;
  }
  for (int p = 0; p < im.nx * im.ny; ++p)
    for (int m = 0; m < im.e5; ++m)
      d(static_cast<long>(p) * im.e5 + m) = im.aEntry(0, 0, m, m);
  for (size_t a = 0; a < im.marginParts.size(); ++a) {
    const MatrixXc blk = im.semiMode
                             ? partBlock(im.rep, im.model, im.marginParts[a],
                                         im.marginParts[a])
                             : im.cBlocks[a * im.marginParts.size() + a];
    d.segment(im.nA + im.marginStart[a], blk.rows()) = blk.diagonal();
  }
  return d;
}

VectorXc toeplitzMatvec(const ToeplitzRep& rep, const ArrayModel& model,
                        const VectorXc& x) {
  return ToeplitzMatvec(rep, model).apply(x);
}

namespace {

struct GmresOutcome {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Restarted GMRES with optional Jacobi left preconditioning. Convergence is
// declared on the true relative residual.
GmresOutcome gmres(const std::function<VectorXc(const VectorXc&)>& op,
                   const VectorXc& b, VectorXc& x, const VectorXc* invDiag,
                   double tol, int maxIter, int restart) {
  const long n = b.size();
  const double bnorm = b.norm();
  GmresOutcome out;
  x = VectorXc::Zero(n);
  if (bnorm == 0.0) {
    out.converged = true;
    return out;
  }
  auto precond = [&](const VectorXc& r) -> VectorXc {
    if (!invDiag) return r;
    return r.cwiseProduct(*invDiag);
  };

  std::vector<VectorXc> basis;
  MatrixXc h = MatrixXc::Zero(restart + 1, restart);
  std::vector<Complex> cs(restart), sn(restart);
  VectorXc g = VectorXc::Zero(restart + 1);

  while (out.iterations < maxIter) {
    const VectorXc r = b - op(x);
    out.residual = r.norm() / bnorm;
    if (out.residual < tol) {
      out.converged = true;
      return out;
    }
    VectorXc z = precond(r);
    const double beta = z.norm();
    if (beta == 0.0) {
      out.converged = true;
      return out;
    }
    basis.assign(1, z / beta);
    g.setZero();
    g(0) = beta;
    int j = 0;
    for (; j < restart && out.iterations < maxIter; ++j, ++out.iterations) {
      VectorXc w = precond(op(basis[j]));
      for (int i = 0; i <= j; ++i) {
        h(i, j) = basis[i].dot(w);  // conjugated inner product
        w -= h(i, j) * basis[i];
      }
      h(j + 1, j) = w.norm();
      if (std::abs(h(j + 1, j)) > 0.0) basis.push_back(w / h(j + 1, j));

      for (int i = 0; i < j; ++i) {
        const Complex t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
        h(i + 1, j) = -std::conj(sn[i]) * h(i, j) + std::conj(cs[i]) * h(i + 1, j);
        h(i, j) = t;
      }
      const double denom =
          std::sqrt(std::norm(h(j, j)) + std::norm(h(j + 1, j)));
      if (denom == 0.0) {
        cs[j] = 1.0;
        sn[j] = 0.0;
      } else {
        cs[j] = std::conj(h(j, j)) / denom;
        sn[j] = std::conj(h(j + 1, j)) / denom;
      }
      const Complex t = cs[j] * h(j, j) + sn[j] * h(j + 1, j);
      h(j, j) = t;
      h(j + 1, j) = 0.0;
      const Complex gj = g(j);
      g(j) = cs[j] * gj;
      g(j + 1) = -std::conj(sn[j]) * gj;
      if (std::abs(g(j + 1)) / beta < 0.1 * tol) {
        ++j;
        ++out.iterations;
        break;
      }
      if (basis.size() == static_cast<size_t>(j) + 1) {
        ++j;  // lucky breakdown: exact solution in the current space
        ++out.iterations;
        break;
      }
    }
    // Solve the small triangular system and update x.
    VectorXc y = VectorXc::Zero(j);
    for (int i = j - 1; i >= 0; --i) {
      Complex s = g(i);
      for (int k2 = i + 1; k2 < j; ++k2) s -= h(i, k2) * y(k2);
      y(i) = s / h(i, i);
    }
    for (int i = 0; i < j; ++i) x += y(i) * basis[i];
  }
  out.residual = (b - op(x)).norm() / bnorm;
  out.converged = out.residual < tol;
  return out;
}

void checkLu(const Eigen::PartialPivLU<MatrixXc>& lu, const std::string& what) {
  const auto diag = lu.matrixLU().diagonal();
  double maxAbs = 0.0, minAbs = std::numeric_limits<double>::infinity();
  for (long i = 0; i < diag.size(); ++i) {
    maxAbs = std::max(maxAbs, std::abs(diag(i)));
    minAbs = std::min(minAbs, std::abs(diag(i)));
  }
  if (!(minAbs > 1e-14 * maxAbs))
    throw NumericError("singular matrix in " + what + " (pivot ratio " +
                       std::to_string(minAbs / (maxAbs > 0 ? maxAbs : 1.0)) +
                       ")");
}

}  // namespace

SolveResult denseSolve(const ToeplitzRep& rep, const ArrayModel& model,
                       const ExcitationSet& v) {
  const DenseSystem sys = reconstructFull(rep, model);
  if (sys.z.rows() != v.v.rows())
    throw UserError("denseSolve: excitation size mismatch");
  Eigen::PartialPivLU<MatrixXc> lu(sys.z);
  checkLu(lu, "denseSolve");
  SolveResult out;
  out.solver = "dense";
  out.current = lu.solve(v.v);
  for (int c = 0; c < v.v.cols(); ++c) {
    const double bn = v.v.col(c).norm();
    out.residual.push_back((sys.z * out.current.col(c) - v.v.col(c)).norm() /
                           (bn > 0 ? bn : 1.0));
    out.iterations.push_back(0);
  }
  return out;
}

SolveResult iterativeSolve(const ToeplitzRep& rep, const ArrayModel& model,
                           const ExcitationSet& v, const SolverOptions& opt) {
  const ToeplitzMatvec mv(rep, model);
  if (mv.sizeA() + mv.sizeM() != v.v.rows())
    throw UserError("iterativeSolve: excitation size mismatch");
  VectorXc invDiag;
  if (opt.precondition) {
    invDiag = mv.diagonal();
    for (long i = 0; i < invDiag.size(); ++i) {
      const Complex d = invDiag(i);
      invDiag(i) = (std::abs(d) > 0.0) ? 1.0 / d : Complex{1.0, 0.0};
    }
  }
  const int p = static_cast<int>(v.v.cols());
  SolveResult out;
  out.solver = "gmres";
  out.current = MatrixXc::Zero(v.v.rows(), p);
  out.residual.assign(p, 0.0);
  out.iterations.assign(p, 0);
  std::string failure;
  std::mutex mu;
  parallelFor(p, opt.threads, [&](long lo, long hi) {
    for (long c = lo; c < hi; ++c) {
      VectorXc x;
      const GmresOutcome res =
          gmres([&](const VectorXc& y) { return mv.apply(y); }, v.v.col(c), x,
                opt.precondition ? &invDiag : nullptr, opt.tol, opt.maxIter,
                opt.restart);
      out.current.col(c) = x;
      out.residual[c] = res.residual;
      out.iterations[c] = res.iterations;
      if (!res.converged) {
        std::scoped_lock lock(mu);
        if (failure.empty())
          failure = "gmres did not converge for column " + std::to_string(c) +
                    ": best residual " + std::to_string(res.residual) +
                    " after " + std::to_string(res.iterations) + " iterations";
      }
    }
  });
  if (!failure.empty()) throw NumericError(failure);
  return out;
}

SolveResult schurSolve(const ToeplitzRep& rep, const ArrayModel& model,
                       const ExcitationSet& v, const SolverOptions& opt) {
  const ToeplitzMatvec mv(rep, model);
  const long nA = mv.sizeA(), nM = mv.sizeM();
  if (nA + nM != v.v.rows())
    throw UserError("schurSolve: excitation size mismatch");
  if (nM > 0 && v.v.bottomRows(nM).cwiseAbs().maxCoeff() != 0.0)
    throw UserError("schurSolve: excitation must vanish on margin rows");

  // Jacobi preconditioner restricted to the element block.
  VectorXc invDiagA(nA);
  {
    const VectorXc d = mv.diagonal();
    for (long i = 0; i < nA; ++i)
      invDiagA(i) = (std::abs(d(i)) > 0.0) ? 1.0 / d(i) : Complex{1.0, 0.0};
  }

  const int p = static_cast<int>(v.v.cols());
  const int nE = model.elementParts();
  const int pn = model.partCount();

  // Dense B^T (element rows x margin cols) and C (margin square).
  MatrixXc bt = MatrixXc::Zero(nA, nM);
  MatrixXc cDense = MatrixXc::Zero(nM, nM);
  for (int pj = nE + 1; pj <= pn; ++pj) {
    if (model.partEdgeCount(pj) == 0) continue;
    const long cj = model.edgeStart[pj - 1] - nA;
    for (int pi = 1; pi <= nE; ++pi)
      bt.block(model.edgeStart[pi - 1], cj, model.partEdgeCount(pi),
               model.partEdgeCount(pj)) = partBlock(rep, model, pi, pj);
    for (int pi = nE + 1; pi <= pn; ++pi) {
      if (model.partEdgeCount(pi) == 0) continue;
      cDense.block(model.edgeStart[pi - 1] - nA, cj, model.partEdgeCount(pi),
                   model.partEdgeCount(pj)) = partBlock(rep, model, pi, pj);
    }
  }

  // A [U F] = [V1 B^T] with the Toeplitz-aware solver, column by column.
  MatrixXc rhs(nA, p + nM);
  rhs.leftCols(p) = v.v.topRows(nA);
  rhs.rightCols(nM) = bt;
  MatrixXc uf = MatrixXc::Zero(nA, p + nM);
  std::vector<int> iters(p, 0);
  std::string failure;
  std::mutex mu;
  parallelFor(p + nM, opt.threads, [&](long lo, long hi) {
    for (long c = lo; c < hi; ++c) {
      VectorXc x;
      const GmresOutcome res =
          gmres([&](const VectorXc& y) { return mv.applyA(y); }, rhs.col(c), x,
                opt.precondition ? &invDiagA : nullptr, opt.tol, opt.maxIter,
                opt.restart);
      uf.col(c) = x;
      if (c < p) iters[c] = res.iterations;
      if (!res.converged) {
        std::scoped_lock lock(mu);
        if (failure.empty())
          failure = "schur inner solve did not converge (column " +
                    std::to_string(c) + ", best residual " +
                    std::to_string(res.residual) + ")";
      }
    }
  });
  if (!failure.empty()) throw NumericError(failure);

  const MatrixXc u = uf.leftCols(p);
  SolveResult out;
  out.solver = "schur";
  out.current = MatrixXc::Zero(nA + nM, p);
  if (nM == 0) {
    out.current = u;
  } else {
    const MatrixXc f = uf.rightCols(nM);
    const MatrixXc schur = cDense - bt.transpose() * f;
    Eigen::PartialPivLU<MatrixXc> lu(schur);
    checkLu(lu, "schur complement");
    const MatrixXc i2 = -lu.solve(bt.transpose() * u);
    out.current.topRows(nA) = u - f * i2;
    out.current.bottomRows(nM) = i2;
  }
  for (int c = 0; c < p; ++c) {
    const double bn = v.v.col(c).norm();
    out.residual.push_back(
        (mv.apply(out.current.col(c)) - v.v.col(c)).norm() / (bn > 0 ? bn : 1.0));
    out.iterations.push_back(iters[c]);
  }
  return out;
}

}  // namespace arraymom
