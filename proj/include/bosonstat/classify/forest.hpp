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

#ifndef BOSONSTAT_CLASSIFY_FOREST_HPP
#define BOSONSTAT_CLASSIFY_FOREST_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "bosonstat/classify/classifiers.hpp"
#include "bosonstat/classify/cloud.hpp"
#include "bosonstat/core/rng.hpp"

namespace bosonstat {

struct TreeNode {
    int feature = -1;        // -1 marks a leaf
    double threshold = 0.0;  // go left when x[feature] <= threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t label = -1;          // leaf majority vote
    std::int32_t sample_count = 0;    // training samples reaching the node
    double impurity_decrease = 0.0;   // Gini decrease of the split, 0 for leaves
};

struct DecisionTree {
    std::vector<TreeNode> nodes;       // node 0 is the root
    std::vector<std::uint32_t> bag;    // training indices the tree saw

    std::int32_t classify_index(const std::vector<double>& x) const {
        std::int32_t at = 0;
        while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
            const TreeNode& node = nodes[static_cast<std::size_t>(at)];
            at = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                             : node.right;
        }
        return nodes[static_cast<std::size_t>(at)].label;
    }
};

struct RandomForestModel {
    FeatureSubset features;
    std::vector<std::string> labels;  // sorted
    std::vector<DecisionTree> trees;
    double bag_fraction = 0.63;
    int features_per_split = 3;
    std::uint64_t seed = 0;

    std::string classify(const FeatureVector& p) const {
        std::vector<double> x(features.size());
        for (std::size_t k = 0; k < features.size(); ++k) {
            x[k] = p.at(features[k]);
        }
        std::vector<int> votes(labels.size(), 0);
        for (const auto& tree : trees) {
            ++votes[static_cast<std::size_t>(tree.classify_index(x))];
        }
        auto best = static_cast<std::size_t>(
            std::max_element(votes.begin(), votes.end()) - votes.begin());
        return labels[best];
    }
};

namespace detail {

struct ForestTrainingData {
    std::vector<std::vector<double>> x;  // row per sample, column per feature
    std::vector<std::int32_t> y;
    std::size_t n_labels = 0;
};

inline double gini(const std::vector<std::int32_t>& counts, std::int32_t total) {
    if (total == 0) {
        return 0.0;
    }
    double g = 1.0;
    for (std::int32_t c : counts) {
        double f = static_cast<double>(c) / static_cast<double>(total);
        g -= f * f;
    }
    return g;
}

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double impurity_decrease = 0.0;
    double weighted_child_gini = 0.0;
};

// Exhaustive threshold search over `candidates` features: sort the node's
// samples by feature value and scan boundaries between distinct values.
inline SplitChoice best_split(const ForestTrainingData& data,
                              const std::vector<std::uint32_t>& members,
                              const std::vector<int>& candidates, double node_gini) {
    SplitChoice best;
    const auto total = static_cast<std::int32_t>(members.size());
    std::vector<std::pair<double, std::int32_t>> column(members.size());
    std::vector<std::int32_t> left_counts(data.n_labels);
    std::vector<std::int32_t> right_counts(data.n_labels);
    for (int feature : candidates) {
        for (std::size_t i = 0; i < members.size(); ++i) {
            const auto row = members[i];
            column[i] = {data.x[row][static_cast<std::size_t>(feature)], data.y[row]};
        }
        std::sort(column.begin(), column.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::fill(left_counts.begin(), left_counts.end(), 0);
        std::fill(right_counts.begin(), right_counts.end(), 0);
        for (const auto& [value, label] : column) {
            ++right_counts[static_cast<std::size_t>(label)];
        }
        std::int32_t n_left = 0;
        for (std::size_t i = 0; i + 1 < column.size(); ++i) {
            auto label = static_cast<std::size_t>(column[i].second);
            ++left_counts[label];
            --right_counts[label];
            ++n_left;
            if (column[i].first == column[i + 1].first) {
                continue;
            }
            double weighted =
                (static_cast<double>(n_left) * gini(left_counts, n_left) +
                 static_cast<double>(total - n_left) * gini(right_counts, total - n_left)) /
                static_cast<double>(total);
            if (!best.found || weighted < best.weighted_child_gini) {
                best.found = true;
                best.feature = feature;
                best.threshold = 0.5 * (column[i].first + column[i + 1].first);
                best.weighted_child_gini = weighted;
                best.impurity_decrease = node_gini - weighted;
            }
        }
    }
    return best;
}

inline std::int32_t grow_node(DecisionTree& tree, const ForestTrainingData& data,
                              std::vector<std::uint32_t> members, int features_per_split,
                              const FeatureSubset& feature_ids, Rng& rng) {
    std::vector<std::int32_t> counts(data.n_labels, 0);
    for (auto row : members) {
        ++counts[static_cast<std::size_t>(data.y[row])];
    }
    const auto total = static_cast<std::int32_t>(members.size());
    const double node_gini = gini(counts, total);

    auto make_leaf = [&]() {
        TreeNode leaf;
        leaf.sample_count = total;
        leaf.label = static_cast<std::int32_t>(
            std::max_element(counts.begin(), counts.end()) - counts.begin());
        tree.nodes.push_back(leaf);
        return static_cast<std::int32_t>(tree.nodes.size() - 1);
    };

    // Grown until pure or out of samples.
    if (total < 2 || node_gini == 0.0) {
        return make_leaf();
    }

    std::vector<int> candidate_positions(feature_ids.size());
    std::iota(candidate_positions.begin(), candidate_positions.end(), 0);
    rng.partial_shuffle(candidate_positions,
                        std::min<std::size_t>(static_cast<std::size_t>(features_per_split),
                                              candidate_positions.size()));
    std::vector<int> candidates(
        candidate_positions.begin(),
        candidate_positions.begin() +
            static_cast<std::ptrdiff_t>(std::min<std::size_t>(
                static_cast<std::size_t>(features_per_split), candidate_positions.size())));

    SplitChoice split = best_split(data, members, candidates, node_gini);
    if (!split.found || split.impurity_decrease <= 0.0) {
        return make_leaf();
    }

    std::vector<std::uint32_t> left_members, right_members;
    for (auto row : members) {
        if (data.x[row][static_cast<std::size_t>(split.feature)] <= split.threshold) {
            left_members.push_back(row);
        } else {
            right_members.push_back(row);
        }
    }
    members.clear();
    members.shrink_to_fit();

    TreeNode node;
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.sample_count = total;
    node.impurity_decrease = split.impurity_decrease;
    tree.nodes.push_back(node);
    auto index = static_cast<std::int32_t>(tree.nodes.size() - 1);
    auto left = grow_node(tree, data, std::move(left_members), features_per_split, feature_ids, rng);
    auto right =
        grow_node(tree, data, std::move(right_members), features_per_split, feature_ids, rng);
    tree.nodes[static_cast<std::size_t>(index)].left = left;
    tree.nodes[static_cast<std::size_t>(index)].right = right;
    return index;
}

}  // namespace detail

// Bagged forest of Gini decision trees; each split considers
// `features_per_split` randomly drawn features. Bags are without-replacement
// subsets of floor(bag_fraction * N) samples; the rest are the tree's
// out-of-bag points.
inline RandomForestModel rf_train(const std::vector<Cloud>& train, int n_trees,
                                  double bag_fraction, int features_per_split,
                                  std::uint64_t seed,
                                  const FeatureSubset& features = all_features()) {
    if (n_trees < 1) {
        throw std::invalid_argument("rf_train: need at least one tree");
    }
    if (!(bag_fraction > 0.0 && bag_fraction <= 1.0)) {
        throw std::invalid_argument("rf_train: bag_fraction must be in (0, 1]");
    }
    if (features_per_split < 1 ||
        features_per_split > static_cast<int>(features.size())) {
        throw std::invalid_argument("rf_train: features_per_split must be in [1, F]");
    }
    detail::require_labels(train, 2);

    RandomForestModel model;
    model.features = features;
    model.bag_fraction = bag_fraction;
    model.features_per_split = features_per_split;
    model.seed = seed;
    for (const auto& c : train) {
        if (std::find(model.labels.begin(), model.labels.end(), c.label) == model.labels.end()) {
            model.labels.push_back(c.label);
        }
    }
    std::sort(model.labels.begin(), model.labels.end());

    detail::ForestTrainingData data;
    data.n_labels = model.labels.size();
    for (const auto& c : train) {
        auto li = static_cast<std::int32_t>(
            std::find(model.labels.begin(), model.labels.end(), c.label) - model.labels.begin());
        for (const auto& p : c.points) {
            std::vector<double> row(features.size());
            for (std::size_t k = 0; k < features.size(); ++k) {
                row[k] = p.at(features[k]);
            }
            data.x.push_back(std::move(row));
            data.y.push_back(li);
        }
    }
    const auto n = static_cast<std::uint32_t>(data.x.size());
    auto bag_size = static_cast<std::size_t>(bag_fraction * static_cast<double>(n));
    bag_size = std::max<std::size_t>(1, std::min<std::size_t>(bag_size, n));

    model.trees.reserve(static_cast<std::size_t>(n_trees));
    for (int t = 0; t < n_trees; ++t) {
        Rng rng(derive_seed(seed, "tree", static_cast<std::uint64_t>(t)));
        std::vector<std::uint32_t> all(n);
        std::iota(all.begin(), all.end(), 0u);
        rng.partial_shuffle(all, bag_size);
        DecisionTree tree;
        tree.bag.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(bag_size));
        std::sort(tree.bag.begin(), tree.bag.end());
        detail::grow_node(tree, data, tree.bag, features_per_split, features, rng);
        model.trees.push_back(std::move(tree));
    }
    return model;
}

// Mean decrease in impurity: per feature, the sum over its split nodes of
// (node sample fraction) x (Gini decrease), averaged over trees and
// normalized to unit total.
inline std::vector<double> rf_feature_importance(const RandomForestModel& model) {
    std::vector<double> scores(model.features.size(), 0.0);
    for (const auto& tree : model.trees) {
        const double bag_size = static_cast<double>(tree.bag.size());
        for (const auto& node : tree.nodes) {
            if (node.feature >= 0) {
                scores[static_cast<std::size_t>(node.feature)] +=
                    (static_cast<double>(node.sample_count) / bag_size) * node.impurity_decrease;
            }
        }
    }
    double total = 0.0;
    for (double& s : scores) {
        s /= static_cast<double>(model.trees.size());
        total += s;
    }
    if (total > 0.0) {
        for (double& s : scores) {
            s /= total;
        }
    }
    return scores;
}

// Importance scores sorted most-important-first as (feature id, score).
inline std::vector<std::pair<int, double>> rf_importance_ranking(const RandomForestModel& model) {
    auto scores = rf_feature_importance(model);
    std::vector<std::pair<int, double>> ranked;
    ranked.reserve(scores.size());
    for (std::size_t k = 0; k < scores.size(); ++k) {
        ranked.emplace_back(model.features[k], scores[k]);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return ranked;
}

// Out-of-bag error: each training point is voted on only by trees whose bag
// missed it. Points seen by every tree are skipped.
inline double rf_oob_error(const RandomForestModel& model, const std::vector<Cloud>& train) {
    std::vector<std::vector<double>> x;
    std::vector<std::int32_t> y;
    for (const auto& c : train) {
        auto li = static_cast<std::int32_t>(
            std::find(model.labels.begin(), model.labels.end(), c.label) - model.labels.begin());
        for (const auto& p : c.points) {
            std::vector<double> row(model.features.size());
            for (std::size_t k = 0; k < model.features.size(); ++k) {
                row[k] = p.at(model.features[k]);
            }
            x.push_back(std::move(row));
            y.push_back(li);
        }
    }
    std::vector<std::vector<int>> votes(x.size(), std::vector<int>(model.labels.size(), 0));
    std::vector<bool> in_bag(x.size());
    for (const auto& tree : model.trees) {
        std::fill(in_bag.begin(), in_bag.end(), false);
        for (auto row : tree.bag) {
            in_bag[row] = true;
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!in_bag[i]) {
                ++votes[i][static_cast<std::size_t>(tree.classify_index(x[i]))];
            }
        }
    }
    std::size_t evaluated = 0, wrong = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        int total = 0;
        for (int v : votes[i]) {
            total += v;
        }
        if (total == 0) {
            continue;
        }
        auto best = static_cast<std::int32_t>(
            std::max_element(votes[i].begin(), votes[i].end()) - votes[i].begin());
        ++evaluated;
        wrong += best != y[i] ? 1 : 0;
    }
    if (evaluated == 0) {
        throw std::invalid_argument("rf_oob_error: no out-of-bag points");
    }
    return static_cast<double>(wrong) / static_cast<double>(evaluated);
}

}  // namespace bosonstat

#endif
