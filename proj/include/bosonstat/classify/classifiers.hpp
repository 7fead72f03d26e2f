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

#ifndef BOSONSTAT_CLASSIFY_CLASSIFIERS_HPP
#define BOSONSTAT_CLASSIFY_CLASSIFIERS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "bosonstat/classify/cloud.hpp"
#include "bosonstat/core/rng.hpp"
#include "bosonstat/correlators/features.hpp"

namespace bosonstat {

// Feature indices (Stat values) a classifier operates on. The canonical
// validation plane is {NM, CV}.
using FeatureSubset = std::vector<int>;

inline FeatureSubset nm_cv_plane() {
    return {static_cast<int>(Stat::NM), static_cast<int>(Stat::CV)};
}

inline FeatureSubset all_features() {
    FeatureSubset f(kStatCount);
    std::iota(f.begin(), f.end(), 0);
    return f;
}

// Zero-mean / unit-variance scaling fitted on the pooled training points.
// Distance-based methods and the SVM all standardize first; otherwise the
// larger-scaled feature dominates arbitrarily.
struct Standardizer {
    FeatureSubset features;
    std::vector<double> mean;
    std::vector<double> stdev;  // pooled population std; 1.0 where degenerate
    bool degenerate = false;    // some feature had zero pooled deviation

    static Standardizer fit(const std::vector<const Cloud*>& clouds,
                            const FeatureSubset& features) {
        Standardizer s;
        s.features = features;
        s.mean.assign(features.size(), 0.0);
        s.stdev.assign(features.size(), 0.0);
        std::size_t total = 0;
        for (const Cloud* c : clouds) {
            total += c->points.size();
        }
        if (total == 0) {
            throw std::invalid_argument("Standardizer: no training points");
        }
        for (const Cloud* c : clouds) {
            for (const auto& p : c->points) {
                for (std::size_t k = 0; k < features.size(); ++k) {
                    s.mean[k] += p.at(features[k]);
                }
            }
        }
        for (double& v : s.mean) {
            v /= static_cast<double>(total);
        }
        for (const Cloud* c : clouds) {
            for (const auto& p : c->points) {
                for (std::size_t k = 0; k < features.size(); ++k) {
                    double d = p.at(features[k]) - s.mean[k];
                    s.stdev[k] += d * d;
                }
            }
        }
        for (double& v : s.stdev) {
            v = std::sqrt(v / static_cast<double>(total));
            if (v == 0.0) {
                v = 1.0;
                s.degenerate = true;
            }
        }
        return s;
    }

    std::vector<double> apply(const FeatureVector& p) const {
        std::vector<double> x(features.size());
        for (std::size_t k = 0; k < features.size(); ++k) {
            x[k] = (p.at(features[k]) - mean[k]) / stdev[k];
        }
        return x;
    }
};

namespace detail {

inline double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline std::vector<const Cloud*> cloud_ptrs(const std::vector<Cloud>& clouds) {
    std::vector<const Cloud*> p;
    p.reserve(clouds.size());
    for (const auto& c : clouds) {
        p.push_back(&c);
    }
    return p;
}

inline void require_labels(const std::vector<Cloud>& clouds, std::size_t at_least) {
    std::vector<std::string> labels;
    for (const auto& c : clouds) {
        if (std::find(labels.begin(), labels.end(), c.label) == labels.end()) {
            labels.push_back(c.label);
        }
    }
    if (labels.size() < at_least) {
        throw std::invalid_argument("classifier training requires >= " +
                                    std::to_string(at_least) + " distinct labels");
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Nearest centroid

struct NearestCentroidModel {
    Standardizer standardizer;
    std::vector<std::string> labels;               // sorted
    std::vector<std::vector<double>> centroids;    // standardized space

    // Ties go to the lexicographically smaller label (labels are sorted).
    std::string classify(const FeatureVector& p) const {
        auto x = standardizer.apply(p);
        std::size_t best = 0;
        double best_d = detail::sq_distance(x, centroids[0]);
        for (std::size_t i = 1; i < centroids.size(); ++i) {
            double d = detail::sq_distance(x, centroids[i]);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        return labels[best];
    }
};

inline NearestCentroidModel nearest_centroid_train(const std::vector<Cloud>& train,
                                                   const FeatureSubset& features) {
    detail::require_labels(train, 2);
    NearestCentroidModel model;
    model.standardizer = Standardizer::fit(detail::cloud_ptrs(train), features);
    for (const auto& c : train) {
        if (std::find(model.labels.begin(), model.labels.end(), c.label) == model.labels.end()) {
            model.labels.push_back(c.label);
        }
    }
    std::sort(model.labels.begin(), model.labels.end());
    model.centroids.assign(model.labels.size(), std::vector<double>(features.size(), 0.0));
    std::vector<std::size_t> counts(model.labels.size(), 0);
    for (const auto& c : train) {
        auto li = static_cast<std::size_t>(
            std::find(model.labels.begin(), model.labels.end(), c.label) - model.labels.begin());
        for (const auto& p : c.points) {
            auto x = model.standardizer.apply(p);
            for (std::size_t k = 0; k < x.size(); ++k) {
                model.centroids[li][k] += x[k];
            }
            ++counts[li];
        }
    }
    for (std::size_t li = 0; li < model.centroids.size(); ++li) {
        if (counts[li] == 0) {
            throw std::invalid_argument("nearest_centroid_train: empty class");
        }
        for (double& v : model.centroids[li]) {
            v /= static_cast<double>(counts[li]);
        }
    }
    return model;
}

// ---------------------------------------------------------------------------
// k nearest neighbors

struct KnnModel {
    Standardizer standardizer;
    int k = 1;
    std::vector<std::vector<double>> points;  // standardized, insertion order
    std::vector<std::uint8_t> point_label;    // index into labels
    std::vector<std::string> labels;          // sorted

    // Distance ties resolve by insertion order; k is odd so two-class votes
    // cannot tie.
    std::string classify(const FeatureVector& p) const {
        auto x = standardizer.apply(p);
        std::vector<std::pair<double, std::size_t>> d(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            d[i] = {detail::sq_distance(x, points[i]), i};
        }
        auto kk = static_cast<std::size_t>(k);
        std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(kk), d.end());
        std::vector<int> votes(labels.size(), 0);
        for (std::size_t i = 0; i < kk; ++i) {
            ++votes[point_label[d[i].second]];
        }
        auto best = static_cast<std::size_t>(
            std::max_element(votes.begin(), votes.end()) - votes.begin());
        return labels[best];
    }
};

inline KnnModel knn_train(const std::vector<Cloud>& train, int k, const FeatureSubset& features) {
    detail::require_labels(train, 2);
    if (k < 1 || k % 2 == 0) {
        throw std::invalid_argument("knn_train: k must be odd and positive");
    }
    KnnModel model;
    model.k = k;
    model.standardizer = Standardizer::fit(detail::cloud_ptrs(train), features);
    for (const auto& c : train) {
        if (std::find(model.labels.begin(), model.labels.end(), c.label) == model.labels.end()) {
            model.labels.push_back(c.label);
        }
    }
    std::sort(model.labels.begin(), model.labels.end());
    for (const auto& c : train) {
        auto li = static_cast<std::uint8_t>(
            std::find(model.labels.begin(), model.labels.end(), c.label) - model.labels.begin());
        for (const auto& p : c.points) {
            model.points.push_back(model.standardizer.apply(p));
            model.point_label.push_back(li);
        }
    }
    if (static_cast<std::size_t>(k) > model.points.size()) {
        throw std::invalid_argument("knn_train: k exceeds training size");
    }
    return model;
}

// ---------------------------------------------------------------------------
// Linear SVM (hinge loss, deterministic epoch-ordered subgradient descent)

struct LinearSvmModel {
    Standardizer standardizer;
    std::vector<std::string> labels;  // sorted; labels[0] is the +1 side
    std::vector<double> weights;      // standardized space
    double bias = 0.0;

    double decision(const FeatureVector& p) const {
        auto x = standardizer.apply(p);
        double s = bias;
        for (std::size_t i = 0; i < x.size(); ++i) {
            s += weights[i] * x[i];
        }
        return s;
    }

    std::string classify(const FeatureVector& p) const {
        return decision(p) >= 0.0 ? labels[0] : labels[1];
    }
};

// Pegasos-style primal subgradient descent on the regularized hinge loss with
// lambda = 1 / (C * N); the bias rides along as an unregularized coordinate.
// Sample order is shuffled once from `seed` and kept fixed across epochs.
inline LinearSvmModel svm_train_linear(const std::vector<Cloud>& train,
                                       const FeatureSubset& features, double regularization_c,
                                       int epochs, std::uint64_t seed) {
    if (regularization_c <= 0.0 || epochs < 1) {
        throw std::invalid_argument("svm_train_linear: C and epochs must be positive");
    }
    LinearSvmModel model;
    model.standardizer = Standardizer::fit(detail::cloud_ptrs(train), features);
    for (const auto& c : train) {
        if (std::find(model.labels.begin(), model.labels.end(), c.label) == model.labels.end()) {
            model.labels.push_back(c.label);
        }
    }
    if (model.labels.size() != 2) {
        throw std::invalid_argument("svm_train_linear: exactly two labels required");
    }
    std::sort(model.labels.begin(), model.labels.end());

    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    for (const auto& c : train) {
        double y = c.label == model.labels[0] ? 1.0 : -1.0;
        for (const auto& p : c.points) {
            xs.push_back(model.standardizer.apply(p));
            ys.push_back(y);
        }
    }
    const std::size_t n = xs.size();
    const std::size_t dim = features.size();
    const double lambda = 1.0 / (regularization_c * static_cast<double>(n));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(seed, "svm-order"));
    rng.shuffle(order);

    std::vector<double> w(dim, 0.0);
    double b = 0.0;
    std::uint64_t t = 0;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        for (std::size_t idx : order) {
            ++t;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const auto& x = xs[idx];
            const double y = ys[idx];
            double margin = b;
            for (std::size_t k = 0; k < dim; ++k) {
                margin += w[k] * x[k];
            }
            const double shrink = 1.0 - 1.0 / static_cast<double>(t);
            for (double& wk : w) {
                wk *= shrink;
            }
            if (y * margin < 1.0) {
                const double step = eta * y;
                for (std::size_t k = 0; k < dim; ++k) {
                    w[k] += step * x[k];
                }
                b += step;
            }
        }
    }
    model.weights = std::move(w);
    model.bias = b;
    return model;
}

// ---------------------------------------------------------------------------
// Evaluation

using ClassifierFn = std::function<std::string(const FeatureVector&)>;

// Symmetric error probability (P_{a->b} + P_{b->a}) / 2 on two labeled test
// clouds.
inline double error_probability(const ClassifierFn& classify, const Cloud& test_a,
                                const Cloud& test_b) {
    if (test_a.points.empty() || test_b.points.empty()) {
        throw std::invalid_argument("error_probability: empty test cloud");
    }
    auto rate = [&](const Cloud& c) {
        std::size_t wrong = 0;
        for (const auto& p : c.points) {
            if (classify(p) != c.label) {
                ++wrong;
            }
        }
        return static_cast<double>(wrong) / static_cast<double>(c.points.size());
    };
    return 0.5 * (rate(test_a) + rate(test_b));
}

// Validation scan over odd k; smallest k wins ties. Mirrors the tuning used
// before reporting k-NN error probabilities.
inline int knn_tune_k(const std::vector<Cloud>& train, const std::vector<Cloud>& validation,
                      const FeatureSubset& features, int k_max) {
    int best_k = 1;
    double best_err = 2.0;
    for (int k = 1; k <= k_max; k += 2) {
        KnnModel model = knn_train(train, k, features);
        double err = error_probability([&](const FeatureVector& p) { return model.classify(p); },
                                       validation.at(0), validation.at(1));
        if (err < best_err) {
            best_err = err;
            best_k = k;
        }
    }
    return best_k;
}

}  // namespace bosonstat

#endif
