/**
 * Copyright 2026 The Indistinguo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "indistinguo/matrix.hpp"

namespace indistinguo {

inline constexpr int kMaxPermanentDim = 20;
inline constexpr int kMaxNaivePermanentDim = 8;

/**
@brief Permanent via Ryser's inclusion-exclusion formula.

Column subsets are visited in Gray-code order so each step adds or removes a
single column from the running row sums, giving O(2^n n) work.

@throws Error(Dimension) for non-square input, Error(Capacity) above 20.
*/
Complex permanent(const ComplexMatrix& m);

/// Sum over all n! permutations. Reference path for testing only (n <= 8).
Complex permanent_naive(const ComplexMatrix& m);

} // namespace indistinguo
