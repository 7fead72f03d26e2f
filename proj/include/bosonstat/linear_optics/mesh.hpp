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

#ifndef BOSONSTAT_LINEAR_OPTICS_MESH_HPP
#define BOSONSTAT_LINEAR_OPTICS_MESH_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bosonstat/core/rng.hpp"
#include "bosonstat/linear_optics/unitary.hpp"

namespace bosonstat {

// How many random phases a mesh step consumes: one per mode (a full diagonal
// layer before the couplers) or one per coupler (a relative phase on the
// coupler's first arm).
enum class PhaseMode { PerMode, PerCoupler };

// A planar mesh of symmetric 50:50 couplers. Steps apply in listed order;
// couplers within a step act on disjoint adjacent mode pairs (1-based).
struct MeshLayout {
    int m = 0;
    std::vector<std::vector<std::pair<int, int>>> steps;
    PhaseMode phase_mode = PhaseMode::PerMode;

    void validate() const {
        UnitaryMatrix::require_dim(m);
        for (const auto& step : steps) {
            std::vector<bool> used(static_cast<std::size_t>(m), false);
            for (const auto& [a, b] : step) {
                if (a < 1 || b < 1 || a > m || b > m) {
                    throw std::invalid_argument("MeshLayout: coupler mode out of range");
                }
                if (b != a + 1) {
                    throw std::invalid_argument(
                        "MeshLayout: couplers must act on adjacent modes (a, a+1)");
                }
                if (used[static_cast<std::size_t>(a - 1)] || used[static_cast<std::size_t>(b - 1)]) {
                    throw std::invalid_argument("MeshLayout: overlapping couplers in one step");
                }
                used[static_cast<std::size_t>(a - 1)] = true;
                used[static_cast<std::size_t>(b - 1)] = true;
            }
        }
    }

    std::size_t phases_per_step(std::size_t step) const {
        return phase_mode == PhaseMode::PerMode ? static_cast<std::size_t>(m)
                                                : steps[step].size();
    }

    // Five alternating steps on 7 modes; the outermost modes are idle on the
    // even steps, so the ensemble cannot reach every 7-mode unitary.
    static MeshLayout default_7mode() {
        MeshLayout layout;
        layout.m = 7;
        std::vector<std::pair<int, int>> odd = {{1, 2}, {3, 4}, {5, 6}};
        std::vector<std::pair<int, int>> even = {{2, 3}, {4, 5}, {6, 7}};
        layout.steps = {odd, even, odd, even, odd};
        return layout;
    }
};

// Deterministic mesh assembly from explicit phases (radians). phases[t] holds
// the step-t phase layer, sized per MeshLayout::phases_per_step. Each step is
// a diagonal phase layer followed by the coupler layer
// (1/sqrt(2)) [[1, i], [i, 1]] on every listed pair.
inline UnitaryMatrix mesh_unitary(const MeshLayout& layout,
                                  const std::vector<std::vector<double>>& phases) {
    layout.validate();
    if (phases.size() != layout.steps.size()) {
        throw std::invalid_argument("mesh_unitary: one phase set per step required");
    }
    const int m = layout.m;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(m, m);
    const std::complex<double> i_unit(0.0, 1.0);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t t = 0; t < layout.steps.size(); ++t) {
        if (phases[t].size() != layout.phases_per_step(t)) {
            throw std::invalid_argument("mesh_unitary: phase count mismatch in step");
        }
        if (layout.phase_mode == PhaseMode::PerMode) {
            for (int mode = 0; mode < m; ++mode) {
                u.row(mode) *= std::exp(i_unit * phases[t][static_cast<std::size_t>(mode)]);
            }
        } else {
            for (std::size_t c = 0; c < layout.steps[t].size(); ++c) {
                int arm = layout.steps[t][c].first - 1;
                u.row(arm) *= std::exp(i_unit * phases[t][c]);
            }
        }
        for (const auto& [a, b] : layout.steps[t]) {
            Eigen::RowVectorXcd ra = u.row(a - 1);
            Eigen::RowVectorXcd rb = u.row(b - 1);
            u.row(a - 1) = inv_sqrt2 * (ra + i_unit * rb);
            u.row(b - 1) = inv_sqrt2 * (i_unit * ra + rb);
        }
    }
    return UnitaryMatrix(std::move(u));
}

// Mesh with every internal phase drawn uniformly in [0, 2pi).
inline UnitaryMatrix structured_random_unitary(const MeshLayout& layout, std::uint64_t seed) {
    layout.validate();
    Rng rng(seed);
    std::vector<std::vector<double>> phases(layout.steps.size());
    for (std::size_t t = 0; t < layout.steps.size(); ++t) {
        phases[t].resize(layout.phases_per_step(t));
        for (double& phi : phases[t]) {
            phi = rng.uniform(0.0, 6.283185307179586476925286766559);
        }
    }
    return mesh_unitary(layout, phases);
}

}  // namespace bosonstat

#endif
