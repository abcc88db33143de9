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

#ifndef ARRAYMOM_FFT_HPP
#define ARRAYMOM_FFT_HPP

#include <cstddef>

#include "arraymom/common.hpp"

namespace arraymom {

// Smallest power of two >= n (n >= 1).
size_t nextPow2(size_t n);

// In-place iterative radix-2 transform; n must be a power of two. The
// inverse transform does not apply the 1/n scale.
void fftInPlace(Complex* data, size_t n, bool inverse);

}  // namespace arraymom

#endif  // ARRAYMOM_FFT_HPP
