/*
 * Copyright 2026 The sysdetect Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sysdetect/random.hpp"
#include "sysdetect/training_set.hpp"

namespace sysdetect {

struct ForestParams {
  std::size_t tree_count = 100;
  std::size_t max_features = 0;      // 0: ceil(sqrt(d))
  std::size_t max_depth = 0;         // 0: unlimited
  std::size_t min_samples_split = 2;

  bool operator==(const ForestParams &) const = default;
};

/// Flat tree node. A split sends x[feature] <= threshold left and the rest
/// right; for presence bits the threshold is 0.5, i.e. {0} / {1}.
struct TreeNode {
  std::int32_t feature = -1; // -1 for leaves
  double threshold = 0.0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  std::uint32_t malicious = 0; // training rows reaching this node
  std::uint32_t benign = 0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode &) const = default;
};

/// nodes[0] is the root.
struct DecisionTree {
  std::vector<TreeNode> nodes;

  Label classify(std::span<const double> x) const;
  std::size_t depth() const;
  bool operator==(const DecisionTree &) const = default;
};

struct RFModel {
  ForestParams params;
  std::uint64_t seed = 0;
  std::size_t feature_count = 0;
  std::vector<DecisionTree> trees;

  bool operator==(const RFModel &) const = default;
};

/// Row indices of the bootstrap sample used for tree \p tree_index:
/// n draws with replacement from a stream derived from (seed, tree_index).
std::vector<std::size_t> bootstrap_sample(std::size_t n, std::uint64_t seed,
                                          std::size_t tree_index);

/// Grows one CART tree on \p rows (duplicates allowed) using Gini impurity.
DecisionTree grow_tree(const TrainingSet &train, std::span<const std::size_t> rows,
                       const ForestParams &params, Rng &rng);

RFModel train_random_forest(const TrainingSet &train, const ForestParams &params,
                            std::uint64_t seed);

struct ForestVotes {
  std::size_t malicious = 0;
  std::size_t benign = 0;
};

ForestVotes forest_votes(const RFModel &model, std::span<const double> x);

/// Majority vote, ties to malicious; score is the malicious vote fraction.
Prediction predict_random_forest(const RFModel &model, std::span<const double> x);

} // namespace sysdetect
