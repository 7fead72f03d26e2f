// Copyright 2026 The bosonstat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BOSONSTAT_LINEAR_OPTICS_PERMANENT_HPP
#define BOSONSTAT_LINEAR_OPTICS_PERMANENT_HPP

#include <Eigen/Dense>
#include <array>
#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace bosonstat {

// Hard cap on permanent size; Ryser is O(2^k k) so anything beyond this is a
// caller bug, not a workload.
inline constexpr int kMaxPermanentDim = 12;

// Matrix permanent by Ryser's formula with Gray-code subset iteration:
//
//   perm(A) = (-1)^k sum_{S != empty} (-1)^{|S|} prod_i sum_{j in S} a_ij
//
// Consecutive subsets differ in one column, so the row sums are updated
// incrementally and each subset costs O(k).
template <typename Derived>
typename Derived::Scalar permanent(const Eigen::MatrixBase<Derived>& a) {
    using Scalar = typename Derived::Scalar;
    const int k = static_cast<int>(a.rows());
    if (k == 0 || a.rows() != a.cols()) {
        throw std::invalid_argument("permanent: matrix must be square and non-empty");
    }
    if (k > kMaxPermanentDim) {
        throw std::length_error("permanent: dimension exceeds supported maximum (12)");
    }

    std::array<Scalar, kMaxPermanentDim> row_sum{};
    Scalar total(0);
    std::uint32_t prev_gray = 0;
    const std::uint32_t count = 1u << k;
    for (std::uint32_t g = 1; g < count; ++g) {
        const std::uint32_t gray = g ^ (g >> 1);
        const std::uint32_t diff = gray ^ prev_gray;
        const int j = std::countr_zero(diff);
        if (gray & diff) {
            for (int i = 0; i < k; ++i) {
                row_sum[static_cast<std::size_t>(i)] += a(i, j);
            }
        } else {
            for (int i = 0; i < k; ++i) {
                row_sum[static_cast<std::size_t>(i)] -= a(i, j);
            }
        }
        Scalar prod(1);
        for (int i = 0; i < k; ++i) {
            prod *= row_sum[static_cast<std::size_t>(i)];
        }
        if ((k - std::popcount(gray)) & 1) {
            total -= prod;
        } else {
            total += prod;
        }
        prev_gray = gray;
    }
    return total;
}

}  // namespace bosonstat

#endif
