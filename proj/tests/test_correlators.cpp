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

#include <algorithm>
#include <cmath>

#include "gtest/gtest.h"

#include "bosonstat/correlators/cdataset.hpp"
#include "bosonstat/correlators/features.hpp"
#include "bosonstat/correlators/resource.hpp"
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

TEST(CDataset, PairIndexingIsLexicographic) {
    EXPECT_EQ(CDataset::pair_index(1, 2, 7), 0u);
    EXPECT_EQ(CDataset::pair_index(1, 7, 7), 5u);
    EXPECT_EQ(CDataset::pair_index(2, 3, 7), 6u);
    EXPECT_EQ(CDataset::pair_index(6, 7, 7), 20u);
    EXPECT_THROW(CDataset::pair_index(3, 3, 7), std::invalid_argument);
    EXPECT_THROW(CDataset::pair_index(0, 1, 7), std::invalid_argument);
}

TEST(CDatasetExact, DeterministicDistributionHasZeroCorrelators) {
    OutputDistribution dist =
        bosonic_distribution(UnitaryMatrix::identity(7), InputState::of({1, 4, 5}, 7));
    CDataset c = cdataset_exact(dist);
    EXPECT_EQ(c.size(), 21u);
    for (double v : c.values) {
        EXPECT_DOUBLE_EQ(v, 0.0);
    }
}

TEST(CDatasetExact, HomTables) {
    CDataset ind = cdataset_exact(bosonic_distribution(hom_coupler(), InputState::of({1, 2}, 2)));
    EXPECT_NEAR(ind.value(1, 2), -1.0, 1e-12);
    CDataset dis =
        cdataset_exact(distinguishable_distribution(hom_coupler(), InputState::of({1, 2}, 2)));
    EXPECT_NEAR(dis.value(1, 2), -0.5, 1e-12);
}

TEST(CDatasetEstimate, PlugInConsistency) {
    OutputDistribution dist =
        bosonic_distribution(haar_random_unitary(7, 42), InputState::of({1, 4, 5}, 7));
    EventSample events{dist.space, dist.probs};
    for (double& w : events.weights) {
        w *= 5000.0;
    }
    CDataset exact = cdataset_exact(dist);
    CDataset estimated = cdataset_estimate(events);
    for (std::size_t i = 0; i < exact.values.size(); ++i) {
        EXPECT_NEAR(estimated.values[i], exact.values[i], 1e-12);
    }
}

TEST(CDatasetEstimate, SingleEventArithmetic) {
    EventSample events = EventSample::empty(3, 7);
    events.weights[events.space->index_of({1, 0, 0, 1, 1, 0, 0})] = 1.0;
    CDataset c = cdataset_estimate(events);
    // <n_1 n_4> = 1 and <n_1><n_4> = 1, so C_14 = 0 (and likewise everywhere).
    EXPECT_DOUBLE_EQ(c.value(1, 4), 0.0);
    EXPECT_DOUBLE_EQ(c.value(1, 2), 0.0);
}

TEST(CDatasetEstimate, RejectsEmptySample) {
    EventSample events = EventSample::empty(3, 7);
    EXPECT_THROW(cdataset_estimate(events), std::invalid_argument);
}

TEST(CDatasetEstimate, MeanSquaredErrorScalesInverselyWithSampleSize) {
    OutputDistribution dist =
        bosonic_distribution(haar_random_unitary(7, 17), InputState::of({1, 4, 5}, 7));
    CDataset exact = cdataset_exact(dist);
    auto mse_at = [&](int n_draws, std::uint64_t tag) {
        const int reps = 300;
        double mse = 0.0;
        for (int r = 0; r < reps; ++r) {
            EventSample events =
                sample_events(dist, n_draws, derive_seed(tag, "mse", static_cast<std::uint64_t>(r)));
            CDataset est = cdataset_estimate(events);
            for (std::size_t i = 0; i < est.values.size(); ++i) {
                double d = est.values[i] - exact.values[i];
                mse += d * d;
            }
        }
        return mse / reps;
    };
    double ratio = mse_at(200, 1) / mse_at(2000, 2);
    EXPECT_GT(ratio, 7.0);
    EXPECT_LT(ratio, 14.0);
}

TEST(CovarianceSumRule, HoldsForExactDistributions) {
    // sum_i Var(n_i) + 2 sum_{i<j} C_ij = 0 for photon-number-conserving
    // distributions; checked for both hypotheses over 100 unitaries.
    int checked = 0;
    for (int n = 2; n <= 3; ++n) {
        for (int m = 3; m <= 7; m += 2) {
            for (std::uint64_t s = 0; s < 9; ++s) {
                UnitaryMatrix u = haar_random_unitary(
                    m, derive_seed(3u, "sumrule", static_cast<std::uint64_t>(n * 100 + m) + s));
                std::vector<int> modes;
                for (int k = 0; k < n; ++k) {
                    modes.push_back(1 + (2 * k) % m);
                }
                InputState input = InputState::of(modes, m);
                for (int hyp = 0; hyp < 2; ++hyp) {
                    OutputDistribution dist = hyp == 0 ? bosonic_distribution(u, input)
                                                       : distinguishable_distribution(u, input);
                    double residual =
                        occupation_variance_sum(dist) + 2.0 * cdataset_sum(cdataset_exact(dist));
                    EXPECT_LT(std::abs(residual), 1e-8);
                }
                ++checked;
            }
        }
    }
    EXPECT_GE(checked, 50);
}

TEST(SummaryStatistics, HomSingleEntryDataset) {
    CDataset c = cdataset_exact(bosonic_distribution(hom_coupler(), InputState::of({1, 2}, 2)));
    FeatureVector f = summary_statistics(c);
    EXPECT_NEAR(f[Stat::NM], -2.0, 1e-12);
    EXPECT_DOUBLE_EQ(f[Stat::CV], 0.0);
    EXPECT_FALSE(f.is_degenerate(Stat::CV));
    EXPECT_TRUE(f.is_degenerate(Stat::S));  // zero dispersion
    EXPECT_DOUBLE_EQ(f[Stat::M], -1.0);
    EXPECT_DOUBLE_EQ(f[Stat::HM], 1.0);
    EXPECT_DOUBLE_EQ(f[Stat::ROC], 0.5);
}

TEST(SummaryStatistics, AllZeroDataset) {
    CDataset c{7, 3, std::vector<double>(21, 0.0)};
    FeatureVector f = summary_statistics(c);
    EXPECT_DOUBLE_EQ(f[Stat::NM], 0.0);
    EXPECT_DOUBLE_EQ(f[Stat::M], 0.0);
    EXPECT_DOUBLE_EQ(f[Stat::MD], 0.0);
    EXPECT_DOUBLE_EQ(f[Stat::IQR], 0.0);
    EXPECT_TRUE(f.is_degenerate(Stat::CV));
    EXPECT_TRUE(f.is_degenerate(Stat::S));
    EXPECT_TRUE(f.is_degenerate(Stat::HM));
    EXPECT_TRUE(f.is_degenerate(Stat::ROC));
    EXPECT_TRUE(f.is_degenerate(Stat::TVD));
    EXPECT_EQ(f.hm_excluded, 21);
}

TEST(SummaryStatistics, UniformMagnitudesGiveFlatShareCurve) {
    CDataset c{5, 2, std::vector<double>(10, -0.25)};
    FeatureVector f = summary_statistics(c);
    EXPECT_NEAR(f[Stat::TVD], 0.0, 1e-12);
    EXPECT_NEAR(f[Stat::ROC], 0.5, 1e-12);
    EXPECT_EQ(f.hm_excluded, 0);
}

TEST(SummaryStatistics, OrderStatisticsIgnoreEntryPermutation) {
    CDataset a{5, 3, {0.4, -1.2, 0.3, 2.0, -0.7, 0.1, 0.9, -0.2, 1.1, -0.5}};
    CDataset b = a;
    std::reverse(b.values.begin(), b.values.end());
    FeatureVector fa = summary_statistics(a);
    FeatureVector fb = summary_statistics(b);
    EXPECT_DOUBLE_EQ(fa[Stat::M], fb[Stat::M]);
    EXPECT_DOUBLE_EQ(fa[Stat::IQR], fb[Stat::IQR]);
    EXPECT_DOUBLE_EQ(fa[Stat::MD], fb[Stat::MD]);
}

TEST(SummaryStatistics, NormalizedMeanIsLinearInScale) {
    CDataset a{5, 3, {0.4, -1.2, 0.3, 2.0, -0.7, 0.1, 0.9, -0.2, 1.1, -0.5}};
    CDataset b = a;
    for (double& v : b.values) {
        v *= 3.5;
    }
    FeatureVector fa = summary_statistics(a);
    FeatureVector fb = summary_statistics(b);
    EXPECT_NEAR(fb[Stat::NM], 3.5 * fa[Stat::NM], 1e-12);
}

TEST(ModeSubsets, FullSizeSubsetReproducesFullAnalysis) {
    OutputDistribution dist =
        bosonic_distribution(haar_random_unitary(7, 5), InputState::of({1, 4, 5}, 7));
    EventSample events = sample_events(dist, 3000, 6);
    ModeSubsetAnalysis analysis = mode_subset_analysis(events, {7});
    ASSERT_EQ(analysis.points.size(), 1u);
    FeatureVector full = summary_statistics(cdataset_estimate(events));
    EXPECT_NEAR(analysis.points[0].nm, full[Stat::NM], 1e-12);
    EXPECT_NEAR(analysis.points[0].cv, full[Stat::CV], 1e-12);
    EXPECT_DOUBLE_EQ(analysis.points[0].kept_fraction, 1.0);
}

TEST(ModeSubsets, EnumeratesAllSizeFiveSubsets) {
    OutputDistribution dist =
        bosonic_distribution(haar_random_unitary(7, 5), InputState::of({1, 4, 5}, 7));
    EventSample events = sample_events(dist, 10000, 6);
    ModeSubsetAnalysis analysis = mode_subset_analysis(events, {5});
    ASSERT_EQ(analysis.per_size.size(), 1u);
    EXPECT_EQ(analysis.per_size[0].subsets_used + analysis.per_size[0].subsets_excluded, 21);
    EXPECT_EQ(analysis.per_size[0].subsets_used, 21);
}

TEST(ModeSubsets, SubsetsWithNoSurvivorsAreExcluded) {
    // All photons sit in modes {1, 2, 3}; any size-3 subset missing one of
    // those modes keeps no events.
    EventSample events = EventSample::empty(3, 4);
    events.weights[events.space->index_of({1, 1, 1, 0})] = 50.0;
    ModeSubsetAnalysis analysis = mode_subset_analysis(events, {3});
    EXPECT_EQ(analysis.per_size[0].subsets_used, 1);
    EXPECT_EQ(analysis.per_size[0].subsets_excluded, 3);
}

TEST(SampleSizeScan, FullSizeExtractionHasZeroSpread) {
    OutputDistribution dist =
        bosonic_distribution(haar_random_unitary(7, 9), InputState::of({1, 4, 5}, 7));
    EventSample events = sample_events(dist, 1000, 10);
    auto rows = sample_size_scan(events, 500, 40, 11);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows.back().size, 1000);
    EXPECT_NEAR(rows.back().std_nm, 0.0, 1e-12);
    EXPECT_NEAR(rows.back().std_cv, 0.0, 1e-12);
}

TEST(SampleSizeScan, SpreadShrinksAsInverseSqrtSize) {
    OutputDistribution dist =
        bosonic_distribution(haar_random_unitary(7, 9), InputState::of({1, 4, 5}, 7));
    EventSample events = sample_events(dist, 10000, 10);
    auto rows = sample_size_scan(events, 200, 300, 12);
    // Compare sizes 200 and 1800 (both far from the finite-population limit):
    // the ratio should be near sqrt(9) = 3 within 25%.
    double ratio = rows[0].std_nm / rows[8].std_nm;
    EXPECT_NEAR(ratio, 3.0, 0.75);
}

TEST(SampleSizeScan, RejectsOversizedStep) {
    EventSample events = EventSample::empty(3, 7);
    events.weights[0] = 100.0;
    EXPECT_THROW(sample_size_scan(events, 200, 10, 1), std::invalid_argument);
}

}  // namespace
}  // namespace bosonstat
