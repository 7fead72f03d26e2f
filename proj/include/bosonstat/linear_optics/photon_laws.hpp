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

#ifndef BOSONSTAT_LINEAR_OPTICS_PHOTON_LAWS_HPP
#define BOSONSTAT_LINEAR_OPTICS_PHOTON_LAWS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <variant>
#include <vector>

#include "bosonstat/core/config_space.hpp"
#include "bosonstat/linear_optics/distribution.hpp"
#include "bosonstat/linear_optics/models.hpp"
#include "bosonstat/linear_optics/permanent.hpp"
#include "bosonstat/linear_optics/states.hpp"
#include "bosonstat/linear_optics/unitary.hpp"

namespace bosonstat {

namespace detail {

inline double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) {
        f *= i;
    }
    return f;
}

inline double occupation_factorial(const Occupation& occ) {
    double f = 1.0;
    for (int c : occ) {
        f *= factorial(c);
    }
    return f;
}

// Rows of `source` repeated per output occupation, columns fixed by the
// input mode list (with repeats).
template <typename Mat>
Mat scattering_submatrix(const Mat& source, const InputState& input, const Occupation& out) {
    const int n = input.n();
    Mat sub(n, n);
    int r = 0;
    for (int mode = 0; mode < static_cast<int>(out.size()); ++mode) {
        for (int rep = 0; rep < out[static_cast<std::size_t>(mode)]; ++rep) {
            for (int c = 0; c < n; ++c) {
                sub(r, c) = source(mode, input.modes[static_cast<std::size_t>(c)] - 1);
            }
            ++r;
        }
    }
    return sub;
}

inline void check_input(const UnitaryMatrix& u, const InputState& input) {
    for (int mode : input.modes) {
        if (mode < 1 || mode > u.dim()) {
            throw std::invalid_argument("input mode index out of range for this unitary");
        }
    }
}

}  // namespace detail

// Exact n-photon output law for indistinguishable bosons:
//   P(T) = |perm(U_{S,T})|^2 / (prod_i s_i! prod_j t_j!)
// with the submatrix columns repeated per input occupation and rows per
// output occupation.
inline OutputDistribution bosonic_distribution(const UnitaryMatrix& u, const InputState& input) {
    detail::check_input(u, input);
    auto space = ConfigurationSpace::get(input.n(), u.dim());
    const double in_fact = detail::occupation_factorial(input.occupations(u.dim()));
    std::vector<double> probs(space->size());
    for (std::size_t i = 0; i < space->size(); ++i) {
        const Occupation& out = space->config(i);
        Eigen::MatrixXcd sub = detail::scattering_submatrix(u.mat, input, out);
        std::complex<double> perm = permanent(sub);
        probs[i] = std::norm(perm) / (in_fact * detail::occupation_factorial(out));
    }
    return OutputDistribution::normalized(std::move(space), std::move(probs));
}

// Output law for fully distinguishable particles. Each photon routes
// independently with P(j | s) = |U_{j,s}|^2; aggregating the m^n routings by
// configuration is the permanent of the elementwise |U|^2 submatrix divided
// by the output multiplicities.
inline OutputDistribution distinguishable_distribution(const UnitaryMatrix& u,
                                                       const InputState& input) {
    detail::check_input(u, input);
    auto space = ConfigurationSpace::get(input.n(), u.dim());
    Eigen::MatrixXd intensity = u.mat.cwiseAbs2();
    std::vector<double> probs(space->size());
    for (std::size_t i = 0; i < space->size(); ++i) {
        const Occupation& out = space->config(i);
        Eigen::MatrixXd sub = detail::scattering_submatrix(intensity, input, out);
        probs[i] = permanent(sub) / detail::occupation_factorial(out);
    }
    return OutputDistribution::normalized(std::move(space), std::move(probs));
}

// Classical convolution of two occupation-space distributions over the same
// mode count.
inline OutputDistribution convolve(const OutputDistribution& a, const OutputDistribution& b) {
    if (a.m() != b.m()) {
        throw std::invalid_argument("convolve: mode counts differ");
    }
    auto space = ConfigurationSpace::get(a.n() + b.n(), a.m());
    std::vector<double> probs(space->size(), 0.0);
    Occupation sum(static_cast<std::size_t>(a.m()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.probs[i] == 0.0) {
            continue;
        }
        const Occupation& occ_a = a.space->config(i);
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b.probs[j] == 0.0) {
                continue;
            }
            const Occupation& occ_b = b.space->config(j);
            for (std::size_t k = 0; k < sum.size(); ++k) {
                sum[k] = occ_a[k] + occ_b[k];
            }
            probs[space->index_of(sum)] += a.probs[i] * b.probs[j];
        }
    }
    return OutputDistribution::normalized(std::move(space), std::move(probs));
}

// Partial distinguishability by grouping: photons inside one block interfere
// as bosons, distinct blocks combine classically.
inline OutputDistribution grouping_distribution(const UnitaryMatrix& u, const InputState& input,
                                                const Partition& partition) {
    detail::check_input(u, input);
    validate_partition(partition, input.n());
    if (partition.size() == 1) {
        return bosonic_distribution(u, input);
    }
    OutputDistribution acc;
    bool first = true;
    for (const auto& block : partition) {
        std::vector<int> modes;
        modes.reserve(block.size());
        for (int label : block) {
            modes.push_back(input.modes[static_cast<std::size_t>(label - 1)]);
        }
        OutputDistribution part = bosonic_distribution(u, InputState::of(std::move(modes), u.dim()));
        acc = first ? std::move(part) : convolve(acc, part);
        first = false;
    }
    return acc;
}

// Mixture laws over the pure hypotheses; see DistinguishabilityModel.
inline OutputDistribution mixture_distribution(const UnitaryMatrix& u, const InputState& input,
                                               const DistinguishabilityModel& model) {
    const int n = input.n();
    validate_model(model, n);
    if (std::holds_alternative<Indistinguishable>(model)) {
        return bosonic_distribution(u, input);
    }
    if (std::holds_alternative<Distinguishable>(model)) {
        return distinguishable_distribution(u, input);
    }
    if (const auto* g = std::get_if<Grouping>(&model)) {
        return grouping_distribution(u, input, g->partition);
    }
    if (const auto* b = std::get_if<BetaMixture>(&model)) {
        const double w = b->beta * b->beta;
        if (w == 1.0) {
            return bosonic_distribution(u, input);
        }
        OutputDistribution grouped = grouping_distribution(u, input, b->grouping);
        if (w == 0.0) {
            return grouped;
        }
        OutputDistribution bosonic = bosonic_distribution(u, input);
        std::vector<double> probs(bosonic.size());
        for (std::size_t i = 0; i < probs.size(); ++i) {
            probs[i] = w * bosonic.probs[i] + (1.0 - w) * grouped.probs[i];
        }
        return OutputDistribution::normalized(bosonic.space, std::move(probs));
    }
    const auto& delta = std::get<DeltaMixture>(model).delta;
    // Each photon is in the common internal mode (weight delta_i) or its own
    // orthogonal one; expanding the product over photons gives one grouping
    // term per subset of "common" photons.
    auto space = ConfigurationSpace::get(n, u.dim());
    std::vector<double> probs(space->size(), 0.0);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double weight = 1.0;
        std::vector<int> common;
        Partition partition;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                weight *= delta[static_cast<std::size_t>(i)];
                common.push_back(i + 1);
            } else {
                weight *= 1.0 - delta[static_cast<std::size_t>(i)];
                partition.push_back({i + 1});
            }
        }
        if (weight == 0.0) {
            continue;
        }
        if (!common.empty()) {
            partition.push_back(std::move(common));
        }
        OutputDistribution term = grouping_distribution(u, input, partition);
        for (std::size_t i = 0; i < probs.size(); ++i) {
            probs[i] += weight * term.probs[i];
        }
    }
    return OutputDistribution::normalized(std::move(space), std::move(probs));
}

}  // namespace bosonstat

#endif
