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
//
// Brute-force reference implementations used only by tests. They share no
// code with the library paths they check: the permanent oracle enumerates
// permutations, the photon-law oracles enumerate all m^n output routings.

#ifndef BOSONSTAT_TESTS_ORACLES_HPP
#define BOSONSTAT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "bosonstat/core/config_space.hpp"
#include "bosonstat/linear_optics/distribution.hpp"
#include "bosonstat/linear_optics/models.hpp"
#include "bosonstat/linear_optics/states.hpp"
#include "bosonstat/linear_optics/unitary.hpp"

namespace bosonstat::testing {

// Permanent as the literal sum over all k! permutations.
template <typename Derived>
typename Derived::Scalar naive_permanent(const Eigen::MatrixBase<Derived>& a) {
    using Scalar = typename Derived::Scalar;
    const int k = static_cast<int>(a.rows());
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    Scalar total(0);
    do {
        Scalar prod(1);
        for (int i = 0; i < k; ++i) {
            prod *= a(i, perm[static_cast<std::size_t>(i)]);
        }
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

namespace detail {

// Visits every assignment of n photons to m output modes.
template <typename Fn>
void for_each_routing(int n, int m, Fn&& fn) {
    std::vector<int> routing(static_cast<std::size_t>(n), 0);  // 0-based target modes
    while (true) {
        fn(routing);
        int i = n - 1;
        while (i >= 0 && routing[static_cast<std::size_t>(i)] == m - 1) {
            routing[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) {
            return;
        }
        ++routing[static_cast<std::size_t>(i)];
    }
}

inline double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) {
        f *= i;
    }
    return f;
}

}  // namespace detail

// Multi-photon amplitude expansion for indistinguishable bosons: sums
// prod_k U_{j_k, s_k} over the m^n routings reaching each configuration, with
// the sqrt(prod t_j! / prod s_i!) symmetrization factor.
inline OutputDistribution bosonic_oracle(const UnitaryMatrix& u, const InputState& input) {
    const int n = input.n();
    const int m = u.dim();
    auto space = ConfigurationSpace::get(n, m);
    std::vector<std::complex<double>> amplitude(space->size(), 0.0);
    Occupation occ(static_cast<std::size_t>(m));
    detail::for_each_routing(n, m, [&](const std::vector<int>& routing) {
        std::complex<double> term(1.0, 0.0);
        for (int k = 0; k < n; ++k) {
            term *= u.mat(routing[static_cast<std::size_t>(k)],
                          input.modes[static_cast<std::size_t>(k)] - 1);
        }
        std::fill(occ.begin(), occ.end(), 0);
        for (int target : routing) {
            occ[static_cast<std::size_t>(target)] += 1;
        }
        amplitude[space->index_of(occ)] += term;
    });
    double in_fact = 1.0;
    {
        Occupation in_occ = input.occupations(m);
        for (int c : in_occ) {
            in_fact *= detail::factorial(c);
        }
    }
    std::vector<double> probs(space->size());
    for (std::size_t i = 0; i < space->size(); ++i) {
        double out_fact = 1.0;
        for (int c : space->config(i)) {
            out_fact *= detail::factorial(c);
        }
        // |amp|^2 * prod t_j! / prod s_i!, amp being the routing sum.
        probs[i] = std::norm(amplitude[i]) * out_fact / in_fact;
    }
    return OutputDistribution::normalized(std::move(space), std::move(probs));
}

// Distinguishable particles: every routing contributes its product of
// single-photon intensities to its configuration.
inline OutputDistribution distinguishable_oracle(const UnitaryMatrix& u, const InputState& input) {
    const int n = input.n();
    const int m = u.dim();
    auto space = ConfigurationSpace::get(n, m);
    std::vector<double> probs(space->size(), 0.0);
    Occupation occ(static_cast<std::size_t>(m));
    detail::for_each_routing(n, m, [&](const std::vector<int>& routing) {
        double term = 1.0;
        for (int k = 0; k < n; ++k) {
            term *= std::norm(u.mat(routing[static_cast<std::size_t>(k)],
                                    input.modes[static_cast<std::size_t>(k)] - 1));
        }
        std::fill(occ.begin(), occ.end(), 0);
        for (int target : routing) {
            occ[static_cast<std::size_t>(target)] += 1;
        }
        probs[space->index_of(occ)] += term;
    });
    return OutputDistribution::normalized(std::move(space), std::move(probs));
}

// Grouping: per-block amplitude expansion (bosonic_oracle on the block's
// input modes) combined by explicit enumeration over sub-configuration pairs.
inline OutputDistribution grouping_oracle(const UnitaryMatrix& u, const InputState& input,
                                          const Partition& partition) {
    const int m = u.dim();
    std::vector<OutputDistribution> parts;
    for (const auto& block : partition) {
        std::vector<int> modes;
        for (int label : block) {
            modes.push_back(input.modes[static_cast<std::size_t>(label - 1)]);
        }
        parts.push_back(bosonic_oracle(u, InputState::of(std::move(modes), m)));
    }
    OutputDistribution acc = parts[0];
    for (std::size_t b = 1; b < parts.size(); ++b) {
        const OutputDistribution& next = parts[b];
        auto space = ConfigurationSpace::get(acc.n() + next.n(), m);
        std::vector<double> probs(space->size(), 0.0);
        Occupation sum(static_cast<std::size_t>(m));
        for (std::size_t i = 0; i < acc.size(); ++i) {
            for (std::size_t j = 0; j < next.size(); ++j) {
                for (std::size_t k = 0; k < sum.size(); ++k) {
                    sum[k] = acc.space->config(i)[k] + next.space->config(j)[k];
                }
                probs[space->index_of(sum)] += acc.probs[i] * next.probs[j];
            }
        }
        acc = OutputDistribution::normalized(std::move(space), std::move(probs));
    }
    return acc;
}

}  // namespace bosonstat::testing

#endif
