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

#ifndef BOSONSTAT_LINEAR_OPTICS_DISTRIBUTION_HPP
#define BOSONSTAT_LINEAR_OPTICS_DISTRIBUTION_HPP

#include <cmath>
#include <cstdlib>
#include <memory>
#include <stdexcept>
#include <vector>

#include "bosonstat/core/config_space.hpp"

namespace bosonstat {

inline constexpr double kNormalizationTolerance = 1e-10;
// Raw probabilities below this are round-off, not physics; they are clamped
// to zero before normalization so no entry can come out negative.
inline constexpr double kProbabilityFloor = 1e-15;

// Normalized probability table over every n-photon configuration of m modes,
// dense in the canonical ConfigurationSpace order.
struct OutputDistribution {
    std::shared_ptr<const ConfigurationSpace> space;
    std::vector<double> probs;

    int n() const { return space->n(); }
    int m() const { return space->m(); }
    std::size_t size() const { return probs.size(); }

    double prob(const Occupation& occ) const { return probs[space->index_of(occ)]; }

    double normalization_residual() const {
        double s = 0.0;
        for (double p : probs) {
            s += p;
        }
        return std::abs(1.0 - s);
    }

    // Clamps sub-floor entries to zero, checks the raw sum is already within
    // tolerance of 1 and then rescales exactly.
    static OutputDistribution normalized(std::shared_ptr<const ConfigurationSpace> space,
                                         std::vector<double> raw) {
        if (raw.size() != space->size()) {
            throw std::invalid_argument("OutputDistribution: probability table size mismatch");
        }
        double sum = 0.0;
        for (double& p : raw) {
            if (p < kProbabilityFloor) {
                if (p < -kNormalizationTolerance) {
                    throw std::logic_error("OutputDistribution: negative probability");
                }
                p = 0.0;
            }
            sum += p;
        }
        if (std::abs(1.0 - sum) > kNormalizationTolerance) {
            throw std::logic_error("OutputDistribution: normalization residual " +
                                   std::to_string(std::abs(1.0 - sum)));
        }
        for (double& p : raw) {
            p /= sum;
        }
        return OutputDistribution{std::move(space), std::move(raw)};
    }
};

inline double total_variation_distance(const OutputDistribution& p, const OutputDistribution& q) {
    if (p.n() != q.n() || p.m() != q.m()) {
        throw std::invalid_argument("total_variation_distance: shape mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < p.probs.size(); ++i) {
        s += std::abs(p.probs[i] - q.probs[i]);
    }
    return 0.5 * s;
}

}  // namespace bosonstat

#endif
