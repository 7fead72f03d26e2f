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

#include <cmath>

#include "gtest/gtest.h"

#include "bosonstat/detector/cascade.hpp"
#include "bosonstat/detector/events.hpp"
#include "bosonstat/linear_optics/haar.hpp"
#include "bosonstat/linear_optics/photon_laws.hpp"

namespace bosonstat {
namespace {

UnitaryMatrix hom_coupler() {
    Eigen::MatrixXcd u(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    u << s, s, s, -s;
    return UnitaryMatrix(u);
}

TEST(SampleEvents, DeterministicDistributionPutsAllMassOnOneConfig) {
    OutputDistribution dist =
        bosonic_distribution(UnitaryMatrix::identity(7), InputState::of({1, 4, 5}, 7));
    EventSample events = sample_events(dist, 500, 1);
    EXPECT_DOUBLE_EQ(events.total(), 500.0);
    EXPECT_DOUBLE_EQ(events.weights[events.space->index_of({1, 0, 0, 1, 1, 0, 0})], 500.0);
}

TEST(SampleEvents, HomSuppressionSurvivesSampling) {
    OutputDistribution dist = bosonic_distribution(hom_coupler(), InputState::of({1, 2}, 2));
    EventSample events = sample_events(dist, 100000, 7);
    double p11 = events.weights[events.space->index_of({1, 1})] / events.total();
    EXPECT_LT(p11, 0.003);
}

TEST(SampleEvents, SeedsAreReproducible) {
    OutputDistribution dist =
        bosonic_distribution(haar_random_unitary(7, 4), InputState::of({1, 4, 5}, 7));
    EventSample a = sample_events(dist, 1000, 99);
    EventSample b = sample_events(dist, 1000, 99);
    EXPECT_EQ(a.weights, b.weights);
}

TEST(SampleEvents, MultinomialConcentration) {
    // TVD(empirical, exact) stays below 2 sqrt(|configs| / N) for >= 95% of
    // seeds; the bound is loose, so all 40 seeds should clear it.
    OutputDistribution dist =
        bosonic_distribution(haar_random_unitary(7, 12), InputState::of({1, 4, 5}, 7));
    const int n_draws = 10000;
    const double bound = 2.0 * std::sqrt(84.0 / n_draws);
    int within = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        EventSample events = sample_events(dist, n_draws, seed);
        if (total_variation_distance(events, dist) < bound) {
            ++within;
        }
    }
    EXPECT_GE(within, 38);
}

TEST(Tvd, BasicTables) {
    OutputDistribution ind = bosonic_distribution(hom_coupler(), InputState::of({1, 2}, 2));
    OutputDistribution dis =
        distinguishable_distribution(hom_coupler(), InputState::of({1, 2}, 2));
    EXPECT_DOUBLE_EQ(total_variation_distance(ind, ind), 0.0);
    EXPECT_NEAR(total_variation_distance(ind, dis), 0.5, 1e-12);

    // Disjoint-support deterministic distributions.
    auto id5 = UnitaryMatrix::identity(5);
    OutputDistribution a = bosonic_distribution(id5, InputState::of({1, 2}, 5));
    OutputDistribution b = bosonic_distribution(id5, InputState::of({3, 4}, 5));
    EXPECT_NEAR(total_variation_distance(a, b), 1.0, 1e-12);

    OutputDistribution other = bosonic_distribution(hom_coupler(), InputState::of({1, 1}, 2));
    EXPECT_THROW(total_variation_distance(a, other), std::invalid_argument);
}

TEST(Cascade, PortProbabilitiesFromDefaults) {
    CascadeSpec spec;
    auto p = spec.port_probabilities();
    EXPECT_NEAR(p[0], 0.34, 1e-12);
    EXPECT_NEAR(p[1], 0.33, 1e-12);
    EXPECT_NEAR(p[2], 0.33, 1e-12);
}

TEST(Cascade, PortProbabilitiesCloseForAnySpec) {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        CascadeSpec spec;
        spec.first_layer_reflectivity = rng.uniform();
        spec.second_layer_reflectivity = rng.uniform();
        auto p = spec.port_probabilities();
        EXPECT_DOUBLE_EQ(p[0] + p[1] + p[2], 1.0);
    }
}

TEST(Cascade, ZeroEfficiencyYieldsEmptyRecords) {
    OutputDistribution dist =
        bosonic_distribution(UnitaryMatrix::identity(7), InputState::of({1, 4, 5}, 7));
    EventSample events = sample_events(dist, 200, 3);
    CascadeSpec spec;
    spec.port_efficiencies.assign(7, {0.0, 0.0, 0.0});
    auto records = route_through_cascade(events, spec, 4);
    ASSERT_EQ(records.size(), 200u);
    for (const auto& rec : records) {
        EXPECT_TRUE(rec.ports.empty());
    }
}

TEST(Cascade, TripleBunchResolutionProbability) {
    CascadeSpec spec;
    // Direct enumeration over the 27 routings of three photons in one mode.
    auto p = spec.port_probabilities();
    double enumerated = 0.0;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            for (int c = 0; c < 3; ++c) {
                if (a != b && b != c && a != c) {
                    enumerated += p[a] * p[b] * p[c];
                }
            }
        }
    }
    EXPECT_NEAR(distinct_port_probability(spec, 3), enumerated, 1e-15);
    EXPECT_NEAR(enumerated, 0.2222, 1e-4);

    // Monte Carlo cross-check on actual routing.
    EventSample events = EventSample::empty(3, 1);
    events.weights[events.space->index_of({3})] = 20000.0;
    auto records = route_through_cascade(events, spec, 5);
    int three_fired = 0;
    for (const auto& rec : records) {
        three_fired += rec.ports.size() == 3 ? 1 : 0;
    }
    double rate = static_cast<double>(three_fired) / 20000.0;
    EXPECT_NEAR(rate, enumerated, 3.0 * std::sqrt(enumerated * (1 - enumerated) / 20000.0));
}

TEST(Cascade, DeterministicRecords) {
    OutputDistribution dist =
        bosonic_distribution(haar_random_unitary(7, 21), InputState::of({1, 4, 5}, 7));
    EventSample events = sample_events(dist, 500, 8);
    CascadeSpec spec;
    auto a = route_through_cascade(events, spec, 77);
    auto b = route_through_cascade(events, spec, 77);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].ports, b[i].ports);
        EXPECT_EQ(a[i].trigger, b[i].trigger);
    }
}

TEST(Reconstruct, BunchWeightsMatchResolutionProbabilities) {
    CascadeSpec spec;
    std::vector<ClickRecord> records;
    records.push_back({{{1, 1}, {1, 2}, {1, 3}}, true});   // 3-bunch in mode 1
    records.push_back({{{2, 1}, {5, 2}, {7, 3}}, true});   // collision-free
    ReconstructionReport report;
    EventSample out = reconstruct_counts(records, spec, 3, 7, &report);
    EXPECT_EQ(report.accepted, 2);
    double w3 = out.weights[out.space->index_of({3, 0, 0, 0, 0, 0, 0})];
    double w1 = out.weights[out.space->index_of({0, 1, 0, 0, 1, 0, 1})];
    // Weights are rescaled to sum to the accepted count; their ratio is the
    // inverse resolution-probability ratio (1/0.2222 vs 1).
    EXPECT_NEAR(w3 / w1, 1.0 / 0.222156, 1e-3);
    EXPECT_NEAR(out.total(), 2.0, 1e-12);
}

TEST(Reconstruct, DropsWrongMultiplicityAndNoTrigger) {
    CascadeSpec spec;
    std::vector<ClickRecord> records;
    records.push_back({{{1, 1}, {2, 1}}, true});            // lost photon
    records.push_back({{{1, 1}, {2, 1}, {3, 1}}, false});   // no trigger
    ReconstructionReport report;
    EventSample out = reconstruct_counts(records, spec, 3, 7, &report);
    EXPECT_EQ(report.accepted, 0);
    EXPECT_EQ(report.dropped_wrong_multiplicity, 1);
    EXPECT_EQ(report.dropped_no_trigger, 1);
    EXPECT_DOUBLE_EQ(out.total(), 0.0);
}

TEST(Reconstruct, RejectsOverfilledRecord) {
    CascadeSpec spec;
    std::vector<ClickRecord> records;
    records.push_back({{{1, 1}, {1, 2}, {2, 1}, {3, 1}}, true});
    EXPECT_THROW(reconstruct_counts(records, spec, 3, 7), std::logic_error);
}

TEST(Reconstruct, RoundTripRecoversFrequencies) {
    // sample -> cascade (unit efficiency) -> reconstruct stays within 1.5x
    // multinomial error of the source distribution.
    OutputDistribution dist =
        bosonic_distribution(haar_random_unitary(7, 31), InputState::of({1, 4, 5}, 7));
    const int n_draws = 100000;
    EventSample events = sample_events(dist, n_draws, 13);
    CascadeSpec spec;
    auto records = route_through_cascade(events, spec, 14);
    EventSample rebuilt = reconstruct_counts(records, spec, 3, 7);
    auto freq = rebuilt.frequencies();
    for (std::size_t i = 0; i < dist.size(); ++i) {
        double p = dist.probs[i];
        double err = 1.5 * 3.0 * std::sqrt(p * (1 - p) / n_draws + 1e-12);
        EXPECT_NEAR(freq[i], p, err) << "config " << i;
    }
    // Postselection soundness: everything reconstructed carries n photons.
    EXPECT_EQ(rebuilt.n(), 3);
}

TEST(Reconstruct, UnbiasedUnderNonUnitEfficiency) {
    OutputDistribution dist =
        bosonic_distribution(haar_random_unitary(7, 37), InputState::of({1, 4, 5}, 7));
    CascadeSpec spec;
    spec.port_efficiencies.assign(7, {0.9, 0.75, 0.8});
    spec.trigger_efficiency = 0.9;
    const int reps = 200;
    const int n_draws = 10000;
    std::vector<double> mean(dist.size(), 0.0);
    std::vector<double> sq(dist.size(), 0.0);
    for (int r = 0; r < reps; ++r) {
        EventSample events = sample_events(
            dist, n_draws, derive_seed(1u, "bias-events", static_cast<std::uint64_t>(r)));
        auto records = route_through_cascade(
            events, spec, derive_seed(1u, "bias-cascade", static_cast<std::uint64_t>(r)));
        auto freq = reconstruct_counts(records, spec, 3, 7).frequencies();
        for (std::size_t i = 0; i < freq.size(); ++i) {
            mean[i] += freq[i];
            sq[i] += freq[i] * freq[i];
        }
    }
    for (std::size_t i = 0; i < mean.size(); ++i) {
        mean[i] /= reps;
        double var = sq[i] / reps - mean[i] * mean[i];
        double se = std::sqrt(std::max(var, 0.0) / reps);
        EXPECT_NEAR(mean[i], dist.probs[i], 3.0 * se + 5e-6) << "config " << i;
    }
}

TEST(Bootstrap, SingleEventReproduced) {
    EventSample events = EventSample::empty(3, 7);
    events.weights[10] = 1.0;
    auto reps = bootstrap_resample(events, 1, 5);
    ASSERT_EQ(reps.size(), 1u);
    EXPECT_DOUBLE_EQ(reps[0].weights[10], 1.0);
    EXPECT_DOUBLE_EQ(reps[0].total(), 1.0);
}

TEST(Bootstrap, DeterministicSampleGivesIdenticalReplicates) {
    EventSample events = EventSample::empty(2, 3);
    events.weights[events.space->index_of({1, 1, 0})] = 400.0;
    auto reps = bootstrap_resample(events, 5, 6);
    for (const auto& rep : reps) {
        EXPECT_EQ(rep.weights, events.weights);
    }
}

TEST(Bootstrap, ReplicateSpreadMatchesBinomialError) {
    OutputDistribution dist = bosonic_distribution(hom_coupler(), InputState::of({1, 2}, 2));
    const int n_draws = 2000;
    EventSample events = sample_events(dist, n_draws, 3);
    auto index = events.space->index_of({2, 0});
    double f = events.weights[index] / events.total();
    auto reps = bootstrap_resample(events, 1000, 8);
    double mean = 0.0, sq = 0.0;
    for (const auto& rep : reps) {
        double fr = rep.weights[index] / rep.total();
        mean += fr;
        sq += fr * fr;
    }
    mean /= 1000.0;
    double sd = std::sqrt(sq / 1000.0 - mean * mean);
    double expected = std::sqrt(f * (1 - f) / n_draws);
    EXPECT_NEAR(sd, expected, 0.2 * expected);
}

}  // namespace
}  // namespace bosonstat
