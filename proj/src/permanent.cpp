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

#include "indistinguo/permanent.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>
#include <vector>

#include "indistinguo/errors.hpp"

namespace indistinguo {

namespace {

void check_square(const ComplexMatrix& m, int limit) {
    if (m.rows() != m.cols()) {
        fail(ErrorKind::Dimension, "permanent needs a square matrix");
    }
    if (m.rows() > limit) {
        fail(ErrorKind::Capacity,
             "permanent dimension " + std::to_string(m.rows()) + " exceeds " + std::to_string(limit));
    }
}

} // namespace

Complex permanent(const ComplexMatrix& m) {
    check_square(m, kMaxPermanentDim);
    const int n = static_cast<int>(m.rows());
    if (n == 0) {
        return {1.0, 0.0};
    }
    if (n == 1) {
        return m(0, 0);
    }

    std::vector<Complex> row_sum(n, Complex(0.0, 0.0));
    Complex total(0.0, 0.0);
    const std::uint64_t count = std::uint64_t{1} << n;
    std::uint64_t gray_prev = 0;
    for (std::uint64_t k = 1; k < count; ++k) {
        const std::uint64_t gray = k ^ (k >> 1);
        const std::uint64_t flipped = gray ^ gray_prev;
        const int col = std::countr_zero(flipped);
        const double sign = (gray & flipped) ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) {
            row_sum[i] += sign * m(i, col);
        }
        gray_prev = gray;

        Complex prod = row_sum[0];
        for (int i = 1; i < n; ++i) {
            prod *= row_sum[i];
        }
        const int size = std::popcount(gray);
        total += ((n - size) % 2 == 0) ? prod : -prod;
    }
    return total;
}

Complex permanent_naive(const ComplexMatrix& m) {
    check_square(m, kMaxNaivePermanentDim);
    const int n = static_cast<int>(m.rows());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Complex total(0.0, 0.0);
    do {
        Complex prod(1.0, 0.0);
        for (int i = 0; i < n; ++i) {
            prod *= m(i, perm[i]);
        }
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

} // namespace indistinguo
