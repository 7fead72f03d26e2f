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

#include "bosonstat/classify/classifiers.hpp"
#include "bosonstat/classify/cloud.hpp"
#include "bosonstat/classify/cloud_metrics.hpp"
#include "bosonstat/classify/forest.hpp"
#include "bosonstat/classify/transition.hpp"

namespace bosonstat {
namespace {

FeatureVector make_point(double nm, double cv) {
    FeatureVector f;
    f.values[static_cast<std::size_t>(Stat::NM)] = nm;
    f.values[static_cast<std::size_t>(Stat::CV)] = cv;
    return f;
}

// Two Gaussian blobs in the NM-CV plane, `gap` pooled standard deviations
// apart.
std::vector<Cloud> blob_clouds(double gap, int count, std::uint64_t seed) {
    Rng rng(seed);
    Cloud a, b;
    a.label = "I";
    b.label = "D";
    a.n = b.n = 3;
    a.m = b.m = 7;
    for (int i = 0; i < count; ++i) {
        a.points.push_back(make_point(-gap / 2 + rng.gaussian(), 1.0 + rng.gaussian()));
        b.points.push_back(make_point(gap / 2 + rng.gaussian(), -1.0 + rng.gaussian()));
    }
    return {a, b};
}

InputState input145() { return InputState::of({1, 4, 5}, 7); }

Cloud haar_cloud(const DistinguishabilityModel& model, int count, std::uint64_t seed,
                 const std::string& label) {
    return generate_cloud(EnsembleSpec::haar(7), model, input145(), count, seed, label, 2);
}

TEST(GenerateCloud, DegenerateIdentityEnsembleIsFlagged) {
    MeshLayout identity_layout;
    identity_layout.m = 7;  // no steps: the mesh is the identity
    EnsembleSpec ensemble = EnsembleSpec::structured(identity_layout, false);
    Cloud c = generate_cloud(ensemble, Indistinguishable{}, input145(), 1, 3, "I");
    ASSERT_EQ(c.points.size(), 1u);
    EXPECT_TRUE(c.points[0].is_degenerate(Stat::CV));
    EXPECT_DOUBLE_EQ(c.points[0][Stat::NM], 0.0);
}

TEST(GenerateCloud, DeterministicAndThreadCountInvariant) {
    Cloud a = generate_cloud(EnsembleSpec::haar(7), Indistinguishable{}, input145(), 64, 5, "I", 1);
    Cloud b = generate_cloud(EnsembleSpec::haar(7), Indistinguishable{}, input145(), 64, 5, "I", 4);
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        EXPECT_EQ(a.points[i].values, b.points[i].values);
    }
}

TEST(GenerateCloud, HypothesesShareUnitaries) {
    // Same master seed: point i of the I cloud and of the D cloud come from
    // the same unitary, so a delta-mixture at its endpoints reproduces both.
    Cloud d = haar_cloud(Distinguishable{}, 16, 21, "D");
    Cloud d_via_delta = haar_cloud(DeltaMixture{{0, 0, 0}}, 16, 21, "delta0");
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        EXPECT_NEAR(d.points[i][Stat::NM], d_via_delta.points[i][Stat::NM], 1e-9);
        EXPECT_NEAR(d.points[i][Stat::CV], d_via_delta.points[i][Stat::CV], 1e-9);
    }
}

TEST(GenerateCloud, HaarCloudsSeparateInNmCvPlane) {
    Cloud i_cloud = haar_cloud(Indistinguishable{}, 3000, 33, "I");
    Cloud d_cloud = haar_cloud(Distinguishable{}, 3000, 33, "D");
    CloudOverlap overlap = cloud_overlap(i_cloud, d_cloud, Stat::NM, Stat::CV, 60);
    EXPECT_LT(overlap.similarity, 0.2);
}

TEST(NearestCentroid, CentroidPointGetsItsLabel) {
    auto clouds = blob_clouds(8.0, 400, 1);
    NearestCentroidModel model = nearest_centroid_train(clouds, nm_cv_plane());
    double mean_nm = cloud_mean(clouds[0], Stat::NM);
    double mean_cv = cloud_mean(clouds[0], Stat::CV);
    EXPECT_EQ(model.classify(make_point(mean_nm, mean_cv)), "I");
}

TEST(NearestCentroid, MidpointTieGoesToLexicographicallySmallerLabel) {
    Cloud a, b;
    a.label = "I";
    b.label = "D";
    a.points = {make_point(-1.0, 0.0), make_point(-1.0, 2.0)};
    b.points = {make_point(1.0, 0.0), make_point(1.0, 2.0)};
    NearestCentroidModel model = nearest_centroid_train({a, b}, nm_cv_plane());
    EXPECT_EQ(model.classify(make_point(0.0, 1.0)), "D");
}

TEST(Knn, SinglePointNeighborhoodReturnsItsLabel) {
    auto clouds = blob_clouds(6.0, 50, 2);
    KnnModel model = knn_train(clouds, 1, nm_cv_plane());
    EXPECT_EQ(model.classify(clouds[0].points[7]), "I");
    EXPECT_EQ(model.classify(clouds[1].points[7]), "D");
}

TEST(Knn, FullNeighborhoodAlwaysVotesMajorityClass) {
    auto clouds = blob_clouds(6.0, 40, 3);
    clouds[0].points.resize(15);  // unbalance: 15 I vs 40 D
    KnnModel model = knn_train(clouds, 55, nm_cv_plane());
    EXPECT_EQ(model.classify(make_point(-10.0, 1.0)), "D");
    EXPECT_EQ(model.classify(make_point(10.0, -1.0)), "D");
}

TEST(Knn, RejectsEvenOrOversizedK) {
    auto clouds = blob_clouds(6.0, 10, 4);
    EXPECT_THROW(knn_train(clouds, 2, nm_cv_plane()), std::invalid_argument);
    EXPECT_THROW(knn_train(clouds, 21, nm_cv_plane()), std::invalid_argument);
}

TEST(Knn, TunedKIsOddAndReasonable) {
    auto train = blob_clouds(3.0, 150, 5);
    auto validation = blob_clouds(3.0, 150, 6);
    int k = knn_tune_k(train, validation, nm_cv_plane(), 31);
    EXPECT_EQ(k % 2, 1);
    EXPECT_GE(k, 1);
    EXPECT_LE(k, 31);
}

TEST(StandardizationInvariance, RescalingOneFeatureKeepsAssignments) {
    auto clouds = blob_clouds(4.0, 200, 7);
    auto scaled = clouds;
    for (auto& cloud : scaled) {
        for (auto& p : cloud.points) {
            p.values[static_cast<std::size_t>(Stat::CV)] *= 1000.0;
        }
    }
    NearestCentroidModel nc = nearest_centroid_train(clouds, nm_cv_plane());
    NearestCentroidModel nc_scaled = nearest_centroid_train(scaled, nm_cv_plane());
    KnnModel knn = knn_train(clouds, 5, nm_cv_plane());
    KnnModel knn_scaled = knn_train(scaled, 5, nm_cv_plane());
    Rng rng(8);
    for (int t = 0; t < 100; ++t) {
        FeatureVector p = make_point(rng.uniform(-4.0, 4.0), rng.uniform(-3.0, 3.0));
        FeatureVector q = p;
        q.values[static_cast<std::size_t>(Stat::CV)] *= 1000.0;
        EXPECT_EQ(nc.classify(p), nc_scaled.classify(q));
        EXPECT_EQ(knn.classify(p), knn_scaled.classify(q));
    }
}

TEST(LinearSvm, SeparableBlobsReachZeroTrainingError) {
    auto clouds = blob_clouds(8.0, 300, 9);  // 4 sigma from either centroid
    LinearSvmModel model = svm_train_linear(clouds, nm_cv_plane(), 1.0, 200, 10);
    double err = error_probability([&](const FeatureVector& p) { return model.classify(p); },
                                   clouds[0], clouds[1]);
    EXPECT_DOUBLE_EQ(err, 0.0);
}

TEST(LinearSvm, LabelFlipNegatesWeights) {
    auto clouds = blob_clouds(5.0, 200, 11);
    auto flipped = clouds;
    flipped[0].label = "D";
    flipped[1].label = "I";
    LinearSvmModel a = svm_train_linear(clouds, nm_cv_plane(), 1.0, 100, 12);
    LinearSvmModel b = svm_train_linear(flipped, nm_cv_plane(), 1.0, 100, 12);
    ASSERT_EQ(a.weights.size(), b.weights.size());
    for (std::size_t i = 0; i < a.weights.size(); ++i) {
        EXPECT_NEAR(a.weights[i], -b.weights[i], 1e-12);
    }
    EXPECT_NEAR(a.bias, -b.bias, 1e-12);
}

TEST(LinearSvm, RejectsSingleClassTraining) {
    Cloud only;
    only.label = "I";
    only.points = {make_point(0, 0), make_point(1, 1)};
    EXPECT_THROW(svm_train_linear({only}, nm_cv_plane(), 1.0, 10, 1), std::invalid_argument);
}

TEST(ErrorProbability, PerfectAndConstantClassifiers) {
    auto clouds = blob_clouds(8.0, 100, 13);
    EXPECT_DOUBLE_EQ(
        error_probability([](const FeatureVector& p) { return p[Stat::NM] < 0 ? "I" : "D"; },
                          clouds[0], clouds[1]),
        0.0);
    EXPECT_DOUBLE_EQ(
        error_probability([](const FeatureVector&) { return "I"; }, clouds[0], clouds[1]), 0.5);
    Cloud empty;
    empty.label = "I";
    EXPECT_THROW(error_probability([](const FeatureVector&) { return "I"; }, empty, clouds[1]),
                 std::invalid_argument);
}

TEST(ClassifierOrdering, SvmBeatsCentroidOnHaarClouds) {
    std::vector<Cloud> train = {haar_cloud(Indistinguishable{}, 600, 101, "I"),
                                haar_cloud(Distinguishable{}, 600, 101, "D")};
    Cloud test_i = haar_cloud(Indistinguishable{}, 600, 707, "I");
    Cloud test_d = haar_cloud(Distinguishable{}, 600, 707, "D");
    NearestCentroidModel nc = nearest_centroid_train(train, nm_cv_plane());
    LinearSvmModel svm = svm_train_linear(train, nm_cv_plane(), 1.0, 200, 5);
    double err_nc = error_probability(
        [&](const FeatureVector& p) { return nc.classify(p); }, test_i, test_d);
    double err_svm = error_probability(
        [&](const FeatureVector& p) { return svm.classify(p); }, test_i, test_d);
    EXPECT_LT(err_svm, err_nc);
}

TEST(ClassifierOrdering, SvmErrorShrinksWithModeCount) {
    // Clouds separate further as m grows at fixed n = 3.
    std::vector<double> errs;
    for (int m : {7, 9, 11}) {
        InputState input = InputState::of({1, 3, 5}, m);
        std::uint64_t master = derive_seed(99u, "perr-m", static_cast<std::uint64_t>(m));
        std::vector<Cloud> train = {
            generate_cloud(EnsembleSpec::haar(m), Indistinguishable{}, input, 1000,
                           derive_seed(master, "train"), "I", 2),
            generate_cloud(EnsembleSpec::haar(m), Distinguishable{}, input, 1000,
                           derive_seed(master, "train"), "D", 2)};
        Cloud test_i = generate_cloud(EnsembleSpec::haar(m), Indistinguishable{}, input, 20000,
                                      derive_seed(master, "test"), "I", 2);
        Cloud test_d = generate_cloud(EnsembleSpec::haar(m), Distinguishable{}, input, 20000,
                                      derive_seed(master, "test"), "D", 2);
        auto svm = svm_train_linear(train, nm_cv_plane(), 1.0, 200, derive_seed(master, "svm"));
        errs.push_back(error_probability(
            [&](const FeatureVector& f) { return svm.classify(f); }, test_i, test_d));
    }
    EXPECT_LT(errs[1], errs[0]);
    EXPECT_LT(errs[2], errs[1]);
}

TEST(GenerateCloud, StructuredCentroidsDisplacedFromHaar) {
    InputState input = input145();
    Cloud haar = generate_cloud(EnsembleSpec::haar(7), Indistinguishable{}, input, 2000, 123,
                                "I", 2);
    Cloud mesh = generate_cloud(EnsembleSpec::structured(MeshLayout::default_7mode(), true),
                                Indistinguishable{}, input, 2000, 123, "I", 2);
    double d_nm = std::abs(cloud_mean(haar, Stat::NM) - cloud_mean(mesh, Stat::NM));
    double d_cv = std::abs(cloud_mean(haar, Stat::CV) - cloud_mean(mesh, Stat::CV));
    EXPECT_GT(d_nm, 0.05);
    EXPECT_GT(d_cv, 0.10);
}

TEST(RandomForest, SingleTreeSplitsThresholdSeparableData) {
    Cloud a, b;
    a.label = "I";
    b.label = "D";
    for (int i = 0; i < 50; ++i) {
        a.points.push_back(make_point(-2.0 - 0.01 * i, 0.0));
        b.points.push_back(make_point(2.0 + 0.01 * i, 0.0));
    }
    FeatureSubset nm_only = {static_cast<int>(Stat::NM)};
    RandomForestModel model = rf_train({a, b}, 1, 1.0, 1, 3, nm_only);
    ASSERT_EQ(model.trees.size(), 1u);
    int splits = 0;
    for (const auto& node : model.trees[0].nodes) {
        splits += node.feature >= 0 ? 1 : 0;
    }
    EXPECT_EQ(splits, 1);
    double err = error_probability([&](const FeatureVector& p) { return model.classify(p); }, a, b);
    EXPECT_DOUBLE_EQ(err, 0.0);
}

TEST(RandomForest, ConstantFeatureIsNeverChosen) {
    auto clouds = blob_clouds(4.0, 200, 15);
    // Stat::S stays identically zero in these synthetic clouds.
    FeatureSubset features = {static_cast<int>(Stat::NM), static_cast<int>(Stat::CV),
                              static_cast<int>(Stat::S)};
    RandomForestModel model = rf_train(clouds, 40, 0.63, 2, 16, features);
    auto scores = rf_feature_importance(model);
    EXPECT_DOUBLE_EQ(scores[2], 0.0);
    for (const auto& tree : model.trees) {
        for (const auto& node : tree.nodes) {
            EXPECT_NE(node.feature, 2);
        }
    }
}

TEST(RandomForest, ImportanceScoresNormalized) {
    auto clouds = blob_clouds(3.0, 300, 17);
    RandomForestModel model = rf_train(clouds, 50, 0.63, 3, 18);
    auto scores = rf_feature_importance(model);
    double total = 0.0;
    for (double s : scores) {
        EXPECT_GE(s, 0.0);
        total += s;
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
    // Only NM and CV vary in blob clouds; everything else is untouched.
    for (int f = 0; f < kStatCount; ++f) {
        if (f != static_cast<int>(Stat::NM) && f != static_cast<int>(Stat::CV)) {
            EXPECT_DOUBLE_EQ(scores[static_cast<std::size_t>(f)], 0.0);
        }
    }
}

TEST(RandomForest, ZeroImportanceFeatureDoesNotAffectAssignments) {
    auto clouds = blob_clouds(3.0, 250, 19);
    RandomForestModel model = rf_train(clouds, 60, 0.63, 3, 20);
    auto scores = rf_feature_importance(model);
    ASSERT_DOUBLE_EQ(scores[static_cast<std::size_t>(Stat::K)], 0.0);
    Rng rng(21);
    for (int t = 0; t < 200; ++t) {
        FeatureVector p = make_point(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
        FeatureVector q = p;
        q.values[static_cast<std::size_t>(Stat::K)] = rng.uniform(-100.0, 100.0);
        EXPECT_EQ(model.classify(p), model.classify(q));
    }
}

TEST(RandomForest, OutOfBagErrorBeatsCentroidOnHaarClouds) {
    std::vector<Cloud> train = {haar_cloud(Indistinguishable{}, 500, 22, "I"),
                                haar_cloud(Distinguishable{}, 500, 22, "D")};
    RandomForestModel model = rf_train(train, 100, 0.63, 3, 23);
    double oob = rf_oob_error(model, train);
    Cloud test_i = haar_cloud(Indistinguishable{}, 500, 24, "I");
    Cloud test_d = haar_cloud(Distinguishable{}, 500, 24, "D");
    NearestCentroidModel nc = nearest_centroid_train(train, nm_cv_plane());
    double err_nc = error_probability(
        [&](const FeatureVector& p) { return nc.classify(p); }, test_i, test_d);
    EXPECT_LT(oob, err_nc);
}

TEST(RandomForest, RejectsBadHyperparameters) {
    auto clouds = blob_clouds(3.0, 20, 25);
    EXPECT_THROW(rf_train(clouds, 0, 0.63, 3, 1), std::invalid_argument);
    EXPECT_THROW(rf_train(clouds, 5, 0.0, 3, 1), std::invalid_argument);
    EXPECT_THROW(rf_train(clouds, 5, 0.63, 11, 1), std::invalid_argument);
}

TEST(CloudOverlap, IdenticalAndDisjointClouds) {
    auto clouds = blob_clouds(30.0, 400, 26);
    CloudOverlap self = cloud_overlap(clouds[0], clouds[0], Stat::NM, Stat::CV, 60);
    EXPECT_NEAR(self.tvd, 0.0, 1e-12);
    EXPECT_NEAR(self.similarity, 1.0, 1e-12);
    CloudOverlap disjoint = cloud_overlap(clouds[0], clouds[1], Stat::NM, Stat::CV, 60);
    EXPECT_NEAR(disjoint.tvd, 1.0, 1e-12);
    EXPECT_NEAR(disjoint.similarity, 0.0, 1e-12);
    EXPECT_THROW(cloud_overlap(clouds[0], clouds[1], Stat::NM, Stat::CV, 5),
                 std::invalid_argument);
}

TEST(Transition, DeltaZeroCloudMatchesDistinguishableCloud) {
    TransitionOptions options;
    options.count = 300;
    options.bins = 30;
    options.jobs = 2;
    auto points =
        transition_analysis(EnsembleSpec::haar(7), input145(), {1.0, 0.5, 0.0}, options, 31);
    ASSERT_EQ(points.size(), 3u);
    EXPECT_NEAR(points[2].tvd, 0.0, 1e-12);       // identical ensembles, shared seeds
    EXPECT_NEAR(points[2].similarity, 1.0, 1e-12);
    EXPECT_GT(points[0].tvd, points[2].tvd);      // delta = 1 is far from D
    EXPECT_GT(points[0].tvd, 0.5);
}

TEST(Transition, RejectsBadGridAndBins) {
    TransitionOptions options;
    options.count = 10;
    EXPECT_THROW(
        transition_analysis(EnsembleSpec::haar(7), input145(), {0.5, 1.2}, options, 1),
        std::invalid_argument);
    options.bins = 5;
    EXPECT_THROW(transition_analysis(EnsembleSpec::haar(7), input145(), {0.5}, options, 1),
                 std::invalid_argument);
}

TEST(Misassignment, FullyIndistinguishableSamplesLandInI) {
    MisassignmentOptions options;
    options.training_sets = 8;
    options.training_size = 300;
    options.samples = 150;
    options.jobs = 2;
    auto curve = misassignment_curve(EnsembleSpec::haar(7), EnsembleSpec::haar(7),
                                     InputState::of({1, 2, 3}, 7), {1.0}, options, 32);
    ASSERT_EQ(curve.size(), 1u);
    EXPECT_GE(curve[0].p_to_indistinguishable, 0.95);
}

}  // namespace
}  // namespace bosonstat
