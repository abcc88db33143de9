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

#ifndef ARRAYMOM_COMMON_HPP
#define ARRAYMOM_COMMON_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace arraymom {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

// Free-space impedance in ohms.
inline constexpr double kEta0 = 376.730313668;

inline constexpr Complex kImagUnit{0.0, 1.0};

// Raised for bad user input: files, configuration, geometry that violates a
// documented precondition. Maps to exit code 1 in the CLI.
class UserError : public std::runtime_error {
 public:
  explicit UserError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a numerical procedure fails (singular matrix, solver
// non-convergence). Maps to exit code 2 in the CLI.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Runs fn(begin, end) on up to nthreads disjoint index subranges of
// [0, count). Results must be written to preallocated per-index slots so the
// output is independent of the schedule. nthreads <= 1 runs inline.
void parallelFor(long count, int nthreads,
                 const std::function<void(long, long)>& fn);

// Worker count actually used for a request; 0 means "hardware concurrency".
int resolveThreads(int requested);

}  // namespace arraymom

#endif  // ARRAYMOM_COMMON_HPP
