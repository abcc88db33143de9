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

#ifndef ARRAYMOM_LINSOLVE_HPP
#define ARRAYMOM_LINSOLVE_HPP

#include <memory>
#include <string>
#include <vector>

#include "arraymom/toeplitz.hpp"

namespace arraymom {

// Unit-voltage excitations at the feed edge of selected element parts. Port
// n of the classic all-parts selection feeds edge i_1 + (n-1)*e5 of the
// part-ordered unknown vector.
struct ExcitationSet {
  MatrixXc v;                   // totalEdges x ports
  int feedLocalEdge = 0;        // i_1, 1-based edge within component 5
  std::vector<int> ports;       // element part indices
  std::vector<long> feedRows;   // 0-based rows of the feed edges
  int portCount() const { return static_cast<int>(ports.size()); }
};

ExcitationSet buildExcitation(const ArrayModel& model, int feedLocalEdge,
                              const std::vector<int>& ports);

struct SolveResult {
  MatrixXc current;              // totalEdges x ports
  std::vector<double> residual;  // relative, per column
  std::vector<int> iterations;   // 0 for direct solves
  std::string solver;
};

struct SolverOptions {
  double tol = 1e-8;
  int maxIter = 2000;
  int restart = 60;
  bool precondition = true;
  int threads = 1;
};

// FFT-accelerated application of Z^part from its Toeplitz representation.
// The element-element region uses a two-level circulant embedding, the
// Toeplitz B regions one-level embeddings, everything else is applied block
// by block.
class ToeplitzMatvec {
 public:
  ToeplitzMatvec(const ToeplitzRep& rep, const ArrayModel& model);
  ~ToeplitzMatvec();

  VectorXc apply(const VectorXc& x) const;
  VectorXc applyA(const VectorXc& xA) const;   // element block only
  VectorXc applyB(const VectorXc& xA) const;   // margin rows from element cols
  VectorXc applyBT(const VectorXc& xM) const;
  VectorXc applyC(const VectorXc& xM) const;
  VectorXc diagonal() const;                   // of Z^part

  long sizeA() const;
  long sizeM() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper around ToeplitzMatvec::apply.
VectorXc toeplitzMatvec(const ToeplitzRep& rep, const ArrayModel& model,
                        const VectorXc& x);

// LU on the reconstructed dense matrix; the reference path.
SolveResult denseSolve(const ToeplitzRep& rep, const ArrayModel& model,
                       const ExcitationSet& v);

// Restarted GMRES with the FFT matvec and optional Jacobi preconditioning.
SolveResult iterativeSolve(const ToeplitzRep& rep, const ArrayModel& model,
                           const ExcitationSet& v, const SolverOptions& opt);

// Schur-complement scheme: solves A [U F] = [V1 B^T] with the Toeplitz-aware
// iterative solver, then I2 = -(C - B F)^{-1} B U by dense factorization and
// I1 = U - F I2.
SolveResult schurSolve(const ToeplitzRep& rep, const ArrayModel& model,
                       const ExcitationSet& v, const SolverOptions& opt);

}  // namespace arraymom

#endif  // ARRAYMOM_LINSOLVE_HPP
