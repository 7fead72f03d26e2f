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

#ifndef BOSONSTAT_CLASSIFY_TRANSITION_HPP
#define BOSONSTAT_CLASSIFY_TRANSITION_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bosonstat/classify/classifiers.hpp"
#include "bosonstat/classify/cloud.hpp"
#include "bosonstat/classify/cloud_metrics.hpp"

namespace bosonstat {

struct TransitionPoint {
    double delta = 0.0;
    double centroid_nm = 0.0;
    double centroid_cv = 0.0;
    double tvd = 0.0;         // against the distinguishable cloud
    double similarity = 0.0;  // against the distinguishable cloud
};

struct TransitionOptions {
    int count = 2000;       // matrices per delta value
    int bins = 60;          // histogram bins per axis
    int tuned_photon = 0;   // 0: all photons share delta; i > 0: only photon i
    int jobs = 1;
};

// Sweeps the indistinguishability parameter and tracks the delta-cloud
// centroid plus its overlap with the fully distinguishable cloud. Clouds at
// every delta share unitaries with the reference cloud (same master seed), so
// delta = 0 reproduces it point by point.
inline std::vector<TransitionPoint> transition_analysis(const EnsembleSpec& ensemble,
                                                        const InputState& input,
                                                        const std::vector<double>& delta_grid,
                                                        const TransitionOptions& options,
                                                        std::uint64_t seed) {
    if (delta_grid.empty()) {
        throw std::invalid_argument("transition_analysis: empty delta grid");
    }
    for (double d : delta_grid) {
        if (!(d >= 0.0 && d <= 1.0)) {
            throw std::invalid_argument("transition_analysis: delta outside [0, 1]");
        }
    }
    if (options.bins < 10) {
        throw std::invalid_argument("transition_analysis: need at least 10 bins per axis");
    }
    if (options.tuned_photon < 0 || options.tuned_photon > input.n()) {
        throw std::invalid_argument("transition_analysis: tuned photon out of range");
    }
    Cloud reference = generate_cloud(ensemble, Distinguishable{}, input, options.count, seed,
                                     "D", options.jobs);
    std::vector<TransitionPoint> out;
    out.reserve(delta_grid.size());
    for (double d : delta_grid) {
        std::vector<double> deltas(static_cast<std::size_t>(input.n()), d);
        if (options.tuned_photon > 0) {
            // Tune one photon only; the others stay fully indistinguishable.
            deltas.assign(static_cast<std::size_t>(input.n()), 1.0);
            deltas[static_cast<std::size_t>(options.tuned_photon - 1)] = d;
        }
        Cloud c = generate_cloud(ensemble, DeltaMixture{deltas}, input, options.count, seed,
                                 "delta", options.jobs);
        TransitionPoint point;
        point.delta = d;
        point.centroid_nm = cloud_mean(c, Stat::NM);
        point.centroid_cv = cloud_mean(c, Stat::CV);
        CloudOverlap overlap = cloud_overlap(c, reference, Stat::NM, Stat::CV, options.bins);
        point.tvd = overlap.tvd;
        point.similarity = overlap.similarity;
        out.push_back(point);
    }
    return out;
}

struct MisassignmentPoint {
    double beta = 0.0;
    double p_to_indistinguishable = 0.0;  // mean over training sets
    double std_across_trainings = 0.0;
};

struct MisassignmentOptions {
    int training_sets = 100;
    int training_size = 1000;  // points per class per training set
    int samples = 1000;        // partial-distinguishability matrices per training set
    Partition grouping = {{1, 3}, {2}};
    double svm_c = 1.0;
    int svm_epochs = 200;
    int jobs = 1;
};

// P_{P -> I}: probability that a sample generated under the beta mixture is
// assigned to the indistinguishable class by a linear SVM trained on I/D
// clouds. Bosonic and grouping moments are cached per sample matrix, so the
// beta grid reuses the same unitaries.
inline std::vector<MisassignmentPoint> misassignment_curve(
    const EnsembleSpec& train_ensemble, const EnsembleSpec& sample_ensemble,
    const InputState& input, const std::vector<double>& beta_grid,
    const MisassignmentOptions& options, std::uint64_t seed) {
    for (double b : beta_grid) {
        if (!(b >= 0.0 && b <= 1.0)) {
            throw std::invalid_argument("misassignment_curve: beta outside [0, 1]");
        }
    }
    validate_partition(options.grouping, input.n());
    const FeatureSubset plane = nm_cv_plane();

    std::vector<std::vector<std::size_t>> assigned_i(
        beta_grid.size(), std::vector<std::size_t>(static_cast<std::size_t>(options.training_sets), 0));

    auto run_training_set = [&](int r) {
        const auto rr = static_cast<std::uint64_t>(r);
        std::vector<Cloud> train;
        train.push_back(generate_cloud(train_ensemble, Indistinguishable{}, input,
                                       options.training_size, derive_seed(seed, "train", rr),
                                       "I"));
        train.push_back(generate_cloud(train_ensemble, Distinguishable{}, input,
                                       options.training_size, derive_seed(seed, "train", rr),
                                       "D"));
        LinearSvmModel svm = svm_train_linear(train, plane, options.svm_c, options.svm_epochs,
                                              derive_seed(seed, "svm", rr));
        const std::uint64_t sample_master = derive_seed(seed, "sample", rr);
        for (int s = 0; s < options.samples; ++s) {
            const auto si = static_cast<std::uint64_t>(s);
            UnitaryMatrix u = ensemble_unitary(sample_ensemble, sample_master, si);
            InputState in = ensemble_input(sample_ensemble, input, sample_master, si);
            OccupationMoments bosonic = occupation_moments(bosonic_distribution(u, in));
            OccupationMoments grouped =
                occupation_moments(grouping_distribution(u, in, options.grouping));
            for (std::size_t bi = 0; bi < beta_grid.size(); ++bi) {
                const double w = beta_grid[bi] * beta_grid[bi];
                OccupationMoments mixed = bosonic;
                for (std::size_t k = 0; k < mixed.first.size(); ++k) {
                    mixed.first[k] = w * bosonic.first[k] + (1.0 - w) * grouped.first[k];
                }
                for (std::size_t k = 0; k < mixed.second_pair.size(); ++k) {
                    mixed.second_pair[k] =
                        w * bosonic.second_pair[k] + (1.0 - w) * grouped.second_pair[k];
                }
                FeatureVector f = summary_statistics(mixed.to_cdataset());
                if (svm.classify(f) == "I") {
                    ++assigned_i[bi][static_cast<std::size_t>(r)];
                }
            }
        }
    };

    int jobs = options.jobs < 1 ? 1 : options.jobs;
    if (jobs == 1) {
        for (int r = 0; r < options.training_sets; ++r) {
            run_training_set(r);
        }
    } else {
        std::vector<std::thread> workers;
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&, w] {
                for (int r = w; r < options.training_sets; r += jobs) {
                    run_training_set(r);
                }
            });
        }
        for (auto& t : workers) {
            t.join();
        }
    }

    std::vector<MisassignmentPoint> out;
    out.reserve(beta_grid.size());
    for (std::size_t bi = 0; bi < beta_grid.size(); ++bi) {
        double mean = 0.0, sq = 0.0;
        for (int r = 0; r < options.training_sets; ++r) {
            double frac = static_cast<double>(assigned_i[bi][static_cast<std::size_t>(r)]) /
                          static_cast<double>(options.samples);
            mean += frac;
            sq += frac * frac;
        }
        mean /= static_cast<double>(options.training_sets);
        sq /= static_cast<double>(options.training_sets);
        MisassignmentPoint p;
        p.beta = beta_grid[bi];
        p.p_to_indistinguishable = mean;
        p.std_across_trainings = std::sqrt(std::max(0.0, sq - mean * mean));
        out.push_back(p);
    }
    return out;
}

}  // namespace bosonstat

#endif
