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

#ifndef BOSONSTAT_CLASSIFY_CLOUD_HPP
#define BOSONSTAT_CLASSIFY_CLOUD_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bosonstat/core/rng.hpp"
#include "bosonstat/correlators/cdataset.hpp"
#include "bosonstat/correlators/features.hpp"
#include "bosonstat/linear_optics/haar.hpp"
#include "bosonstat/linear_optics/mesh.hpp"
#include "bosonstat/linear_optics/photon_laws.hpp"

namespace bosonstat {

// Which unitary ensemble a cloud is drawn from. Structured ensembles model a
// fixed physical circuit, so by default they also redraw the input modes per
// matrix; the Haar measure makes the input choice irrelevant.
struct EnsembleSpec {
    enum class Kind { Haar, Structured };

    Kind kind = Kind::Haar;
    int m = 0;                 // used by Haar; Structured takes it from the layout
    MeshLayout layout;         // Structured only
    bool vary_input = false;

    static EnsembleSpec haar(int m) {
        EnsembleSpec e;
        e.kind = Kind::Haar;
        e.m = m;
        return e;
    }

    static EnsembleSpec structured(MeshLayout layout, bool vary_input = true) {
        EnsembleSpec e;
        e.kind = Kind::Structured;
        e.layout = std::move(layout);
        e.m = e.layout.m;
        e.vary_input = vary_input;
        return e;
    }

    int modes() const { return kind == Kind::Haar ? m : layout.m; }

    std::string id() const {
        if (kind == Kind::Haar) {
            return "haar";
        }
        return std::string("structured:") + std::to_string(layout.steps.size()) + "-step" +
               (vary_input ? ":varied-input" : "");
    }
};

// A labeled set of feature-vector points, one per ensemble draw.
struct Cloud {
    std::string label;
    std::string ensemble;
    int n = 0;
    int m = 0;
    std::uint64_t seed = 0;
    std::vector<FeatureVector> points;

    int count() const { return static_cast<int>(points.size()); }
};

// The interferometer drawn for cloud point `index`. Derivation depends only
// on (master seed, index), never on the hypothesis, so clouds generated for
// different hypotheses at one master seed share their unitaries pairwise.
inline UnitaryMatrix ensemble_unitary(const EnsembleSpec& ensemble, std::uint64_t master_seed,
                                      std::uint64_t index) {
    std::uint64_t seed = derive_seed(master_seed, "unitary", index);
    if (ensemble.kind == EnsembleSpec::Kind::Haar) {
        return haar_random_unitary(ensemble.m, seed);
    }
    return structured_random_unitary(ensemble.layout, seed);
}

// Input state used for cloud point `index` (shared across hypotheses for the
// same reason as the unitary).
inline InputState ensemble_input(const EnsembleSpec& ensemble, const InputState& base,
                                 std::uint64_t master_seed, std::uint64_t index) {
    if (!ensemble.vary_input) {
        return base;
    }
    const int m = ensemble.modes();
    const int n = base.n();
    if (n > m) {
        throw std::invalid_argument("ensemble_input: more photons than modes");
    }
    Rng rng(derive_seed(master_seed, "input", index));
    std::vector<int> all(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        all[static_cast<std::size_t>(i)] = i + 1;
    }
    rng.partial_shuffle(all, static_cast<std::size_t>(n));
    all.resize(static_cast<std::size_t>(n));
    return InputState::of(std::move(all), m);
}

inline FeatureVector cloud_point(const EnsembleSpec& ensemble,
                                 const DistinguishabilityModel& hypothesis,
                                 const InputState& input, std::uint64_t master_seed,
                                 std::uint64_t index) {
    UnitaryMatrix u = ensemble_unitary(ensemble, master_seed, index);
    InputState in = ensemble_input(ensemble, input, master_seed, index);
    OutputDistribution dist = mixture_distribution(u, in, hypothesis);
    return summary_statistics(cdataset_exact(dist));
}

// Evaluates the hypothesis over `count` ensemble draws. Points are indexed,
// so any worker partition yields byte-identical clouds.
inline Cloud generate_cloud(const EnsembleSpec& ensemble,
                            const DistinguishabilityModel& hypothesis, const InputState& input,
                            int count, std::uint64_t master_seed, const std::string& label,
                            int jobs = 1) {
    if (count < 1) {
        throw std::invalid_argument("generate_cloud: count must be >= 1");
    }
    validate_model(hypothesis, input.n());
    Cloud cloud;
    cloud.label = label.empty() ? model_tag(hypothesis) : label;
    cloud.ensemble = ensemble.id();
    cloud.n = input.n();
    cloud.m = ensemble.modes();
    cloud.seed = master_seed;
    cloud.points.resize(static_cast<std::size_t>(count));
    if (jobs < 1) {
        jobs = 1;
    }
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) {
            cloud.points[static_cast<std::size_t>(i)] = cloud_point(
                ensemble, hypothesis, input, master_seed, static_cast<std::uint64_t>(i));
        }
        return cloud;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            for (int i = w; i < count; i += jobs) {
                cloud.points[static_cast<std::size_t>(i)] = cloud_point(
                    ensemble, hypothesis, input, master_seed, static_cast<std::uint64_t>(i));
            }
        });
    }
    for (auto& t : workers) {
        t.join();
    }
    return cloud;
}

}  // namespace bosonstat

#endif
