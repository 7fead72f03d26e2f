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

#ifndef BOSONSTAT_CORRELATORS_CDATASET_HPP
#define BOSONSTAT_CORRELATORS_CDATASET_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "bosonstat/detector/events.hpp"
#include "bosonstat/linear_optics/distribution.hpp"

namespace bosonstat {

// The C-dataset: two-mode correlators C_ij = <n_i n_j> - <n_i><n_j> for all
// output pairs i < j, stored in lexicographic pair order.
struct CDataset {
    int m = 0;
    int n = 0;
    std::vector<double> values;

    // 0-based position of pair (i, j), 1 <= i < j <= m.
    static std::size_t pair_index(int i, int j, int m) {
        if (!(i >= 1 && i < j && j <= m)) {
            throw std::invalid_argument("CDataset: pair indices must satisfy 1 <= i < j <= m");
        }
        auto im = static_cast<std::size_t>(i - 1);
        auto mm = static_cast<std::size_t>(m);
        return im * mm - im * (im + 1) / 2 + static_cast<std::size_t>(j - i - 1);
    }

    double value(int i, int j) const { return values[pair_index(i, j, m)]; }
    std::size_t size() const { return values.size(); }
};

// First and second moments of the occupation numbers under one distribution;
// enough to rebuild the C-dataset, and linear in the probability table (so
// mixtures of distributions mix moments with the same weights).
struct OccupationMoments {
    int m = 0;
    int n = 0;
    std::vector<double> first;        // <n_i>
    std::vector<double> second_pair;  // <n_i n_j>, pair order as CDataset

    CDataset to_cdataset() const {
        CDataset c{m, n, second_pair};
        std::size_t idx = 0;
        for (int i = 1; i <= m; ++i) {
            for (int j = i + 1; j <= m; ++j, ++idx) {
                c.values[idx] -= first[static_cast<std::size_t>(i - 1)] *
                                 first[static_cast<std::size_t>(j - 1)];
            }
        }
        return c;
    }
};

namespace detail {

template <typename WeightAt>
OccupationMoments moments_over(const ConfigurationSpace& space, WeightAt&& weight_at) {
    const int m = space.m();
    OccupationMoments mom;
    mom.m = m;
    mom.n = space.n();
    mom.first.assign(static_cast<std::size_t>(m), 0.0);
    mom.second_pair.assign(static_cast<std::size_t>(m) * (m - 1) / 2, 0.0);
    for (std::size_t ci = 0; ci < space.size(); ++ci) {
        double w = weight_at(ci);
        if (w == 0.0) {
            continue;
        }
        const Occupation& occ = space.config(ci);
        std::size_t idx = 0;
        for (int i = 0; i < m; ++i) {
            mom.first[static_cast<std::size_t>(i)] += w * occ[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < m; ++j, ++idx) {
                mom.second_pair[idx] +=
                    w * occ[static_cast<std::size_t>(i)] * occ[static_cast<std::size_t>(j)];
            }
        }
    }
    return mom;
}

}  // namespace detail

inline OccupationMoments occupation_moments(const OutputDistribution& dist) {
    return detail::moments_over(*dist.space, [&](std::size_t i) { return dist.probs[i]; });
}

inline OccupationMoments occupation_moments(const EventSample& events) {
    double total = events.total();
    if (total <= 0.0) {
        throw std::invalid_argument("occupation_moments: empty sample");
    }
    return detail::moments_over(*events.space,
                                [&](std::size_t i) { return events.weights[i] / total; });
}

// Exact correlators from a normalized distribution.
inline CDataset cdataset_exact(const OutputDistribution& dist) {
    return occupation_moments(dist).to_cdataset();
}

// Plug-in estimator from counted (or bias-corrected, real-weighted) events.
inline CDataset cdataset_estimate(const EventSample& events) {
    return occupation_moments(events).to_cdataset();
}

// sum_i Var(n_i); with fixed total photon number this equals -2 sum_{i<j} C_ij.
inline double occupation_variance_sum(const OutputDistribution& dist) {
    const int m = dist.m();
    std::vector<double> first(static_cast<std::size_t>(m), 0.0);
    std::vector<double> second(static_cast<std::size_t>(m), 0.0);
    for (std::size_t ci = 0; ci < dist.size(); ++ci) {
        double p = dist.probs[ci];
        const Occupation& occ = dist.space->config(ci);
        for (int i = 0; i < m; ++i) {
            double v = occ[static_cast<std::size_t>(i)];
            first[static_cast<std::size_t>(i)] += p * v;
            second[static_cast<std::size_t>(i)] += p * v * v;
        }
    }
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
        sum += second[static_cast<std::size_t>(i)] -
               first[static_cast<std::size_t>(i)] * first[static_cast<std::size_t>(i)];
    }
    return sum;
}

inline double cdataset_sum(const CDataset& c) {
    double s = 0.0;
    for (double v : c.values) {
        s += v;
    }
    return s;
}

}  // namespace bosonstat

#endif
