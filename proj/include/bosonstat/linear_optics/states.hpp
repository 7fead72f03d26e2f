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

#ifndef BOSONSTAT_LINEAR_OPTICS_STATES_HPP
#define BOSONSTAT_LINEAR_OPTICS_STATES_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "bosonstat/core/config_space.hpp"

namespace bosonstat {

// n-photon input: a sorted list of 1-based mode indices, repeats allowed.
// Photon labels 1..n refer to positions in this list.
struct InputState {
    std::vector<int> modes;

    int n() const { return static_cast<int>(modes.size()); }

    static InputState of(std::vector<int> modes, int m) {
        if (modes.empty()) {
            throw std::invalid_argument("InputState: need at least one photon");
        }
        for (int mode : modes) {
            if (mode < 1 || mode > m) {
                throw std::invalid_argument("InputState: mode index out of range [1, m]");
            }
        }
        std::sort(modes.begin(), modes.end());
        return InputState{std::move(modes)};
    }

    // Occupation vector s_1..s_m of this input.
    Occupation occupations(int m) const {
        Occupation occ(static_cast<std::size_t>(m), 0);
        for (int mode : modes) {
            occ[static_cast<std::size_t>(mode - 1)] += 1;
        }
        return occ;
    }
};

}  // namespace bosonstat

#endif
