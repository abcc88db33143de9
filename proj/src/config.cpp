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

#include "arraymom/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace arraymom {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double toDouble(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw UserError("config: bad numeric value for " + key + ": '" + v + "'");
  }
}

int toInt(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw UserError("config: bad integer value for " + key + ": '" + v + "'");
  }
}

std::vector<double> toDoubleList(const std::string& key, const std::string& v) {
  std::istringstream in(v);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(toDouble(key, tok));
  return out;
}

std::vector<int> toIntList(const std::string& key, const std::string& v) {
  std::istringstream in(v);
  std::vector<int> out;
  std::string tok;
  while (in >> tok) out.push_back(toInt(key, tok));
  return out;
}

}  // namespace

double RunConfig::resolvedWavenumber() const {
  if (wavenumber > 0.0) return wavenumber;
  return 2.0 * M_PI * frequencyHz / kSpeedOfLight;
}

KernelParams RunConfig::kernelParams() const {
  KernelParams p;
  p.wavenumber = resolvedWavenumber();
  p.quadratureOrder = quadratureOrder;
  p.singularRefinementDepth = refinementDepth;
  return p;
}

void RunConfig::validate() const {
  if (meshPath.empty()) throw UserError("config: mesh.path is required");
  if (!std::ifstream(meshPath).good())
    throw UserError("config: mesh file does not exist: " + meshPath);
  for (int c = 0; c < 9; ++c)
    if (!boxSet[c])
      throw UserError("config: partition.box" + std::to_string(c + 1) +
                      " is required");
  if (nx < 1 || ny < 1) throw UserError("config: array.nx/ny must be >= 1");
  if (!(dx > 0.0) || !(dy > 0.0))
    throw UserError("config: array.dx/dy must be positive");
  if (!(frequencyHz > 0.0) && !(wavenumber > 0.0))
    throw UserError("config: kernel.frequency_hz or kernel.wavenumber must be "
                    "positive");
  if (solver != "dense" && solver != "gmres" && solver != "schur")
    throw UserError("config: solver.type must be dense|gmres|schur");
  if (!(z0 > 0.0)) throw UserError("config: feed.z0 must be positive");
  kernelParams().validate();
}

void applyConfigValue(RunConfig& cfg, const std::string& rawKey,
                      const std::string& rawValue) {
  const std::string key = trim(rawKey);
  const std::string value = trim(rawValue);
  if (key == "mesh.path") {
    cfg.meshPath = value;
  } else if (key.rfind("partition.box", 0) == 0) {
    const int idx = toInt(key, key.substr(13));
    if (idx < 1 || idx > 9)
      throw UserError("config: box index out of range in " + key);
    const auto nums = toDoubleList(key, value);
    if (nums.size() != 6)
      throw UserError("config: " + key + " needs 6 numbers (x0 y0 z0 x1 y1 z1)");
    cfg.boxes[idx - 1].min = Vec3(nums[0], nums[1], nums[2]);
    cfg.boxes[idx - 1].max = Vec3(nums[3], nums[4], nums[5]);
    cfg.boxes[idx - 1].validate();
    cfg.boxSet[idx - 1] = true;
  } else if (key == "array.nx") {
    cfg.nx = toInt(key, value);
  } else if (key == "array.ny") {
    cfg.ny = toInt(key, value);
  } else if (key == "array.dx") {
    cfg.dx = toDouble(key, value);
  } else if (key == "array.dy") {
    cfg.dy = toDouble(key, value);
  } else if (key == "kernel.frequency_hz") {
    cfg.frequencyHz = toDouble(key, value);
  } else if (key == "kernel.wavenumber") {
    cfg.wavenumber = toDouble(key, value);
  } else if (key == "kernel.quadrature_order") {
    cfg.quadratureOrder = toInt(key, value);
  } else if (key == "kernel.refinement_depth") {
    cfg.refinementDepth = toInt(key, value);
  } else if (key == "assembly.mode") {
    cfg.mode = parseStorageMode(value);
  } else if (key == "assembly.cache") {
    cfg.cacheFile = value;
  } else if (key == "solver.type") {
    cfg.solver = value;
  } else if (key == "solver.tol") {
    cfg.solverTol = toDouble(key, value);
  } else if (key == "solver.max_iter") {
    cfg.solverMaxIter = toInt(key, value);
  } else if (key == "solver.restart") {
    cfg.solverRestart = toInt(key, value);
  } else if (key == "feed.local_edge") {
    cfg.feedLocalEdge = toInt(key, value);
  } else if (key == "feed.z0") {
    cfg.z0 = toDouble(key, value);
  } else if (key == "ports") {
    if (value == "all") {
      cfg.portsAll = true;
      cfg.ports.clear();
    } else {
      cfg.portsAll = false;
      cfg.ports = toIntList(key, value);
    }
  } else if (key == "excitation") {
    cfg.excitation.clear();
    if (value != "uniform") {
      const auto nums = toDoubleList(key, value);
      if (nums.size() % 2 != 0)
        throw UserError("config: excitation needs re/im pairs or 'uniform'");
      for (size_t i = 0; i < nums.size(); i += 2)
        cfg.excitation.emplace_back(nums[i], nums[i + 1]);
    }
  } else if (key == "farfield.copol_axis") {
    if (value == "x")
      cfg.copolAngle = 0.0;
    else if (value == "y")
      cfg.copolAngle = M_PI / 2.0;
    else
      throw UserError("config: farfield.copol_axis must be x or y");
  } else if (key == "farfield.cut_points") {
    cfg.cutPoints = toInt(key, value);
  } else if (key == "farfield.power_ntheta") {
    cfg.powerNtheta = toInt(key, value);
  } else if (key == "farfield.power_nphi") {
    cfg.powerNphi = toInt(key, value);
  } else if (key == "farfield.eep_ports") {
    cfg.eepPorts = toIntList(key, value);
  } else if (key == "threads") {
    cfg.threads = toInt(key, value);
  } else if (key == "validate.max_n") {
    cfg.validateMaxN = toInt(key, value);
  } else if (key == "output.dir") {
    cfg.outputDir = value;
  } else {
    throw UserError("config: unknown key '" + key + "'");
  }
}

RunConfig parseRunConfigText(const std::string& text,
                             const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UserError(origin + ":" + std::to_string(lineno) +
                      ": expected 'key = value'");
    try {
      applyConfigValue(cfg, line.substr(0, eq), line.substr(eq + 1));
    } catch (const UserError& ex) {
      throw UserError(origin + ":" + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return cfg;
}

RunConfig parseRunConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseRunConfigText(buf.str(), path);
}

}  // namespace arraymom
