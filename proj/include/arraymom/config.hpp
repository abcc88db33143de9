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

#ifndef ARRAYMOM_CONFIG_HPP
#define ARRAYMOM_CONFIG_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "arraymom/partition.hpp"
#include "arraymom/toeplitz.hpp"

namespace arraymom {

// Run configuration, parsed from a flat key-value text file with dotted
// keys (`array.nx = 4`). See the README for the full key list.
struct RunConfig {
  std::string meshPath;
  std::array<BoundingBox, 9> boxes{};
  std::array<bool, 9> boxSet{};
  int nx = 1, ny = 1;
  double dx = 0.0, dy = 0.0;
  double frequencyHz = 0.0;   // one of frequency / wavenumber must be set
  double wavenumber = 0.0;
  int quadratureOrder = 7;
  int refinementDepth = 1;
  StorageMode mode = StorageMode::Sparse;
  std::string cacheFile = "blocks.ztoe";  // relative to outputDir; "none" disables
  std::string solver = "schur";           // dense | gmres | schur
  double solverTol = 1e-8;
  int solverMaxIter = 2000;
  int solverRestart = 60;
  int feedLocalEdge = 0;
  double z0 = 50.0;
  std::vector<int> ports;  // empty = "all"
  bool portsAll = true;
  std::vector<Complex> excitation;  // empty = uniform
  double copolAngle = 0.0;          // radians; 0 = x axis
  int cutPoints = 181;
  int powerNtheta = 90;
  int powerNphi = 72;
  std::vector<int> eepPorts;
  int threads = 0;  // 0 = hardware concurrency
  int validateMaxN = 3;
  std::string outputDir = "out";

  double resolvedWavenumber() const;
  KernelParams kernelParams() const;
  void validate() const;  // invariants: files exist, nx/ny >= 1, k > 0, ...
};

RunConfig parseRunConfigFile(const std::string& path);
RunConfig parseRunConfigText(const std::string& text, const std::string& origin);

// Applies one `key = value` override (the CLI flags funnel through this).
void applyConfigValue(RunConfig& cfg, const std::string& key,
                      const std::string& value);

struct ValidationCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string note;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

}  // namespace arraymom

#endif  // ARRAYMOM_CONFIG_HPP
