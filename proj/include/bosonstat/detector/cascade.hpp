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

#ifndef BOSONSTAT_DETECTOR_CASCADE_HPP
#define BOSONSTAT_DETECTOR_CASCADE_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bosonstat/core/rng.hpp"
#include "bosonstat/detector/events.hpp"

namespace bosonstat {

// Two-layer in-fiber beamsplitter tree behind every output mode. The first
// (unbalanced) splitter sends a photon straight to port 1 with probability
// 1 - r1; the reflected arm feeds a second splitter dividing ports 2 and 3.
// Detectors are threshold: a port fires on one photon or many.
struct CascadeSpec {
    double first_layer_reflectivity = 0.66;
    double second_layer_reflectivity = 0.50;
    double trigger_efficiency = 1.0;
    // Per-mode transmission of the three ports; empty means unit efficiency.
    std::vector<std::array<double, 3>> port_efficiencies;

    std::array<double, 3> port_probabilities() const {
        const double r1 = first_layer_reflectivity;
        const double r2 = second_layer_reflectivity;
        return {1.0 - r1, r1 * r2, r1 * (1.0 - r2)};
    }

    double efficiency(int mode, int port) const {
        if (port_efficiencies.empty()) {
            return 1.0;
        }
        return port_efficiencies[static_cast<std::size_t>(mode - 1)]
                                [static_cast<std::size_t>(port - 1)];
    }

    void validate(int m) const {
        auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
        if (!in_unit(first_layer_reflectivity) || !in_unit(second_layer_reflectivity) ||
            !in_unit(trigger_efficiency)) {
            throw std::invalid_argument("CascadeSpec: probabilities must lie in [0, 1]");
        }
        if (!port_efficiencies.empty()) {
            if (static_cast<int>(port_efficiencies.size()) != m) {
                throw std::invalid_argument("CascadeSpec: need 3 port efficiencies per mode");
            }
            for (const auto& mode_eta : port_efficiencies) {
                for (double eta : mode_eta) {
                    if (!in_unit(eta)) {
                        throw std::invalid_argument("CascadeSpec: efficiency outside [0, 1]");
                    }
                }
            }
        }
    }
};

// One postselection window: the set of fired (mode, port) detectors plus the
// herald trigger.
struct ClickRecord {
    std::vector<std::pair<int, int>> ports;  // sorted, unique, 1-based
    bool trigger = false;
};

// Probability that c photons entering one cascade exit on c distinct ports
// (the photon-number resolution probability of that collision class).
inline double distinct_port_probability(const CascadeSpec& spec, int c) {
    auto p = spec.port_probabilities();
    switch (c) {
        case 0:
        case 1:
            return 1.0;
        case 2:
            return 2.0 * (p[0] * p[1] + p[0] * p[2] + p[1] * p[2]);
        case 3:
            return 6.0 * p[0] * p[1] * p[2];
        default:
            return 0.0;  // more photons than ports cannot be resolved
    }
}

// Product of per-mode resolution probabilities for a full configuration.
inline double configuration_resolution_probability(const CascadeSpec& spec,
                                                   const Occupation& occ) {
    double prob = 1.0;
    for (int c : occ) {
        prob *= distinct_port_probability(spec, c);
    }
    return prob;
}

// Classical intensity routing of every photon of every event through its
// mode's cascade. Input counts must be integers. Records come out grouped by
// the canonical configuration order of the sample.
inline std::vector<ClickRecord> route_through_cascade(const EventSample& events,
                                                      const CascadeSpec& spec,
                                                      std::uint64_t seed) {
    spec.validate(events.m());
    if (!events.has_integer_counts()) {
        throw std::invalid_argument("route_through_cascade: requires integer event counts");
    }
    auto port_prob = spec.port_probabilities();
    Rng rng(seed);
    std::vector<ClickRecord> records;
    records.reserve(static_cast<std::size_t>(events.total()));
    for (std::size_t ci = 0; ci < events.weights.size(); ++ci) {
        auto count = static_cast<std::int64_t>(std::llround(events.weights[ci]));
        const Occupation& occ = events.space->config(ci);
        for (std::int64_t e = 0; e < count; ++e) {
            ClickRecord rec;
            rec.trigger = rng.bernoulli(spec.trigger_efficiency);
            for (int mode = 1; mode <= events.m(); ++mode) {
                int photons = occ[static_cast<std::size_t>(mode - 1)];
                bool fired[3] = {false, false, false};
                for (int k = 0; k < photons; ++k) {
                    double u = rng.uniform();
                    int port = u < port_prob[0] ? 1 : (u < port_prob[0] + port_prob[1] ? 2 : 3);
                    if (rng.bernoulli(spec.efficiency(mode, port))) {
                        fired[port - 1] = true;
                    }
                }
                for (int port = 1; port <= 3; ++port) {
                    if (fired[port - 1]) {
                        rec.ports.emplace_back(mode, port);
                    }
                }
            }
            records.push_back(std::move(rec));
        }
    }
    return records;
}

struct ReconstructionReport {
    std::int64_t accepted = 0;
    std::int64_t dropped_no_trigger = 0;
    std::int64_t dropped_wrong_multiplicity = 0;
};

// Postselects n-fold click records and undoes the cascade biases: each record
// is weighted by the inverse of its collision class resolution probability
// and of the fired ports' efficiencies, then the weights are rescaled so
// their total equals the number of accepted records.
inline EventSample reconstruct_counts(const std::vector<ClickRecord>& records,
                                      const CascadeSpec& spec, int n, int m,
                                      ReconstructionReport* report = nullptr) {
    if (n < 1) {
        throw std::invalid_argument("reconstruct_counts: n must be >= 1");
    }
    spec.validate(m);
    EventSample out = EventSample::empty(n, m);
    ReconstructionReport rep;
    Occupation occ(static_cast<std::size_t>(m));
    for (const auto& rec : records) {
        if (!rec.trigger) {
            ++rep.dropped_no_trigger;
            continue;
        }
        if (static_cast<int>(rec.ports.size()) > n) {
            throw std::logic_error("reconstruct_counts: record with more fired ports than photons");
        }
        if (static_cast<int>(rec.ports.size()) < n) {
            ++rep.dropped_wrong_multiplicity;
            continue;
        }
        std::fill(occ.begin(), occ.end(), 0);
        double eta_product = 1.0;
        for (const auto& [mode, port] : rec.ports) {
            if (mode < 1 || mode > m || port < 1 || port > 3) {
                throw std::invalid_argument("reconstruct_counts: port outside detector layout");
            }
            occ[static_cast<std::size_t>(mode - 1)] += 1;
            eta_product *= spec.efficiency(mode, port);
        }
        double resolution = configuration_resolution_probability(spec, occ);
        if (resolution <= 0.0 || eta_product <= 0.0) {
            throw std::logic_error("reconstruct_counts: unresolvable record observed");
        }
        out.weights[out.space->index_of(occ)] += 1.0 / (resolution * eta_product);
        ++rep.accepted;
    }
    double total = out.total();
    if (total > 0.0) {
        double scale = static_cast<double>(rep.accepted) / total;
        for (double& w : out.weights) {
            w *= scale;
        }
    }
    if (report != nullptr) {
        *report = rep;
    }
    return out;
}

}  // namespace bosonstat

#endif
