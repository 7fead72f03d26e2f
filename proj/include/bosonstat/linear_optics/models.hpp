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

#ifndef BOSONSTAT_LINEAR_OPTICS_MODELS_HPP
#define BOSONSTAT_LINEAR_OPTICS_MODELS_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bosonstat {

// Partition of photon labels 1..n. Photons in one block share an internal
// (spectral-temporal) mode and interfere; distinct blocks are mutually
// orthogonal and combine classically.
using Partition = std::vector<std::vector<int>>;

inline void validate_partition(const Partition& partition, int n) {
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    int covered = 0;
    for (const auto& block : partition) {
        if (block.empty()) {
            throw std::invalid_argument("Partition: empty block");
        }
        for (int label : block) {
            if (label < 1 || label > n) {
                throw std::invalid_argument("Partition: photon label out of range");
            }
            if (seen[static_cast<std::size_t>(label - 1)]) {
                throw std::invalid_argument("Partition: photon label repeated");
            }
            seen[static_cast<std::size_t>(label - 1)] = true;
            ++covered;
        }
    }
    if (covered != n) {
        throw std::invalid_argument("Partition: blocks must cover all photon labels");
    }
}

inline Partition singletons(int n) {
    Partition p;
    for (int i = 1; i <= n; ++i) {
        p.push_back({i});
    }
    return p;
}

// Parses "1,3;2" into {{1,3},{2}}.
inline Partition parse_partition(const std::string& text) {
    Partition p;
    std::vector<int> block;
    std::string token;
    auto flush_token = [&] {
        if (!token.empty()) {
            block.push_back(std::stoi(token));
            token.clear();
        }
    };
    auto flush_block = [&] {
        flush_token();
        if (!block.empty()) {
            p.push_back(block);
            block.clear();
        }
    };
    for (char c : text) {
        if (c == ',') {
            flush_token();
        } else if (c == ';') {
            flush_block();
        } else if (c >= '0' && c <= '9') {
            token.push_back(c);
        } else if (c != ' ') {
            throw std::invalid_argument("Partition: unexpected character in spec");
        }
    }
    flush_block();
    return p;
}

struct Indistinguishable {};
struct Distinguishable {};
struct Grouping {
    Partition partition;
};
// One indistinguishability parameter per photon: photon i is in the common
// internal mode with weight delta_i, else in its own orthogonal mode.
struct DeltaMixture {
    std::vector<double> delta;
};
// Convex mixture beta^2 * (fully indistinguishable) + (1-beta^2) * grouping.
struct BetaMixture {
    double beta = 1.0;
    Partition grouping;
};

using DistinguishabilityModel =
    std::variant<Indistinguishable, Distinguishable, Grouping, DeltaMixture, BetaMixture>;

inline void validate_model(const DistinguishabilityModel& model, int n) {
    if (const auto* g = std::get_if<Grouping>(&model)) {
        validate_partition(g->partition, n);
    } else if (const auto* d = std::get_if<DeltaMixture>(&model)) {
        if (static_cast<int>(d->delta.size()) != n) {
            throw std::invalid_argument("DeltaMixture: need one delta per photon");
        }
        for (double v : d->delta) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw std::invalid_argument("DeltaMixture: delta outside [0, 1]");
            }
        }
    } else if (const auto* b = std::get_if<BetaMixture>(&model)) {
        if (!(b->beta >= 0.0 && b->beta <= 1.0)) {
            throw std::invalid_argument("BetaMixture: beta outside [0, 1]");
        }
        validate_partition(b->grouping, n);
    }
}

inline std::string model_tag(const DistinguishabilityModel& model) {
    struct Visitor {
        std::string operator()(const Indistinguishable&) const { return "I"; }
        std::string operator()(const Distinguishable&) const { return "D"; }
        std::string operator()(const Grouping&) const { return "grouping"; }
        std::string operator()(const DeltaMixture& d) const {
            std::string s = "delta";
            for (double v : d.delta) {
                s += ":" + std::to_string(v);
            }
            return s;
        }
        std::string operator()(const BetaMixture& b) const {
            return "beta:" + std::to_string(b.beta);
        }
    };
    return std::visit(Visitor{}, model);
}

}  // namespace bosonstat

#endif
