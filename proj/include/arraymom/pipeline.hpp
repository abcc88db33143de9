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

#ifndef ARRAYMOM_PIPELINE_HPP
#define ARRAYMOM_PIPELINE_HPP

#include <memory>
#include <optional>
#include <string>

#include "arraymom/config.hpp"
#include "arraymom/linsolve.hpp"
#include "arraymom/postproc.hpp"

namespace arraymom {

// Ties the modules together for one configuration: lazy model building,
// block caching, solving, and deterministic CSV emission. Every command
// writes its files under config().outputDir and returns a short summary.
class Session {
 public:
  explicit Session(RunConfig cfg);

  RunConfig& config() { return cfg_; }
  const RunConfig& config() const { return cfg_; }

  std::string cmdAssemble();
  std::string cmdSolve();
  std::string cmdFarfield();
  std::string cmdSparams();
  std::string cmdMemreport();

  // Runs the validation suite (array size capped at config().validateMaxN)
  // and writes validation.txt. Returns the report; the caller decides how a
  // failure maps to exit status.
  ValidationReport cmdValidate();

  // Building blocks, exposed for tests and in-process use.
  const ArrayModel& model();
  const ToeplitzRep& representation();
  const SolveResult& solution();
  const ExcitationSet& excitation();

 private:
  void ensureModel();
  void ensureRep();
  void ensureSolution();
  std::vector<int> portList();
  VectorXc excitationVector() const;
  std::string outPath(const std::string& name) const;

  RunConfig cfg_;
  std::optional<TriangleMesh> mesh_;
  std::optional<RwgBasis> basis_;
  std::optional<ArrayModel> model_;
  std::optional<ToeplitzRep> rep_;
  std::optional<ExcitationSet> ex_;
  std::optional<SolveResult> sol_;
};

}  // namespace arraymom

#endif  // ARRAYMOM_PIPELINE_HPP
