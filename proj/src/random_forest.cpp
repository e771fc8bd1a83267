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
#include "sysdetect/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "sysdetect/error.hpp"

namespace sysdetect {
namespace {

double gini(double malicious, double benign) {
  const double n = malicious + benign;
  if (n == 0) {
    return 0.0;
  }
  const double pm = malicious / n;
  const double pb = benign / n;
  return 1.0 - pm * pm - pb * pb;
}

struct SplitChoice {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double decrease = 0.0;
};

class TreeGrower {
public:
  TreeGrower(const TrainingSet &train, const ForestParams &params, Rng &rng)
      : train_(train), params_(params), rng_(rng) {
    const std::size_t d = train.feature_count();
    max_features_ = params.max_features != 0
                        ? std::min(params.max_features, d)
                        : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
    features_.resize(d);
  }

  DecisionTree grow(std::vector<std::size_t> rows) {
    tree_.nodes.clear();
    build(rows, 0);
    return std::move(tree_);
  }

private:
  std::uint32_t build(std::vector<std::size_t> &rows, std::size_t depth) {
    const auto id = static_cast<std::uint32_t>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    TreeNode node;
    for (std::size_t r : rows) {
      ++(train_.label(r) == Label::Malicious ? node.malicious : node.benign);
    }

    const bool pure = node.malicious == 0 || node.benign == 0;
    const bool depth_capped = params_.max_depth != 0 && depth >= params_.max_depth;
    const bool too_small = rows.size() < params_.min_samples_split;
    SplitChoice split;
    if (!pure && !depth_capped && !too_small) {
      split = choose_split(rows, node);
    }
    if (!split.found) {
      tree_.nodes[id] = node;
      return id;
    }

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t r : rows) {
      (train_.row(r)[split.feature] <= split.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    node.feature = static_cast<std::int32_t>(split.feature);
    node.threshold = split.threshold;
    node.left = build(left, depth + 1);
    node.right = build(right, depth + 1);
    tree_.nodes[id] = node;
    return id;
  }

  // Visits features in random order until max_features non-constant ones
  // have been evaluated, so constant candidates never end a branch early.
  SplitChoice choose_split(const std::vector<std::size_t> &rows, const TreeNode &node) {
    std::iota(features_.begin(), features_.end(), std::size_t{0});
    const double parent = gini(node.malicious, node.benign);
    const double n = static_cast<double>(rows.size());

    SplitChoice best;
    std::size_t evaluated = 0;
    for (std::size_t i = 0; i < features_.size() && evaluated < max_features_; ++i) {
      const std::size_t pick = i + rng_.index(features_.size() - i);
      std::swap(features_[i], features_[pick]);
      const std::size_t f = features_[i];

      column_.clear();
      for (std::size_t r : rows) {
        column_.push_back({train_.row(r)[f], train_.label(r)});
      }
      std::sort(column_.begin(), column_.end(),
                [](const auto &x, const auto &y) { return x.first < y.first; });
      if (column_.front().first == column_.back().first) {
        continue;
      }
      ++evaluated;

      double left_m = 0;
      double left_b = 0;
      for (std::size_t k = 0; k + 1 < column_.size(); ++k) {
        ++(column_[k].second == Label::Malicious ? left_m : left_b);
        if (column_[k].first == column_[k + 1].first) {
          continue;
        }
        const double right_m = node.malicious - left_m;
        const double right_b = node.benign - left_b;
        const double nl = left_m + left_b;
        const double nr = right_m + right_b;
        const double decrease =
            parent - (nl / n) * gini(left_m, left_b) - (nr / n) * gini(right_m, right_b);
        if (!best.found || decrease > best.decrease) {
          best.found = true;
          best.feature = f;
          best.threshold = column_[k].first + (column_[k + 1].first - column_[k].first) / 2.0;
          best.decrease = decrease;
        }
      }
    }
    return best;
  }

  const TrainingSet &train_;
  const ForestParams &params_;
  Rng &rng_;
  std::size_t max_features_ = 1;
  std::vector<std::size_t> features_;
  std::vector<std::pair<double, Label>> column_;
  DecisionTree tree_;
};

} // namespace

Label DecisionTree::classify(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto &n = nodes[i];
    i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes[i].malicious >= nodes[i].benign ? Label::Malicious : Label::Benign;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  std::size_t deepest = 0;
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes[i].is_leaf()) {
      stack.push_back({nodes[i].left, d + 1});
      stack.push_back({nodes[i].right, d + 1});
    }
  }
  return deepest;
}

std::vector<std::size_t> bootstrap_sample(std::size_t n, std::uint64_t seed,
                                          std::size_t tree_index) {
  Rng rng(mix_seed(seed, tree_index));
  std::vector<std::size_t> rows(n);
  for (auto &r : rows) {
    r = rng.index(n);
  }
  return rows;
}

DecisionTree grow_tree(const TrainingSet &train, std::span<const std::size_t> rows,
                       const ForestParams &params, Rng &rng) {
  if (rows.empty()) {
    throw UsageError("cannot grow a tree on zero rows");
  }
  TreeGrower grower(train, params, rng);
  return grower.grow({rows.begin(), rows.end()});
}

RFModel train_random_forest(const TrainingSet &train, const ForestParams &params,
                            std::uint64_t seed) {
  if (params.tree_count == 0) {
    throw UsageError("random forest needs at least one tree");
  }
  if (params.min_samples_split < 2) {
    throw UsageError("min_samples_split must be at least 2");
  }
  if (train.feature_count() == 0) {
    throw UsageError("random forest needs at least one feature");
  }
  require_both_classes(train);

  RFModel model;
  model.params = params;
  model.seed = seed;
  model.feature_count = train.feature_count();
  model.trees.resize(params.tree_count);

  // Each tree owns its RNG stream, so the forest does not depend on how
  // trees are spread over threads.
  auto grow_one = [&](std::size_t t) {
    auto rows = bootstrap_sample(train.size(), seed, t);
    Rng rng(mix_seed(~seed, t));
    model.trees[t] = grow_tree(train, rows, params, rng);
  };
  const std::size_t workers =
      std::min<std::size_t>(params.tree_count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t t = 0; t < params.tree_count; ++t) {
      grow_one(t);
    }
  } else {
    std::vector<std::exception_ptr> failures(workers);
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t t = w; t < params.tree_count; t += workers) {
              grow_one(t);
            }
          } catch (...) {
            failures[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto &f : failures) {
      if (f) {
        std::rethrow_exception(f);
      }
    }
  }
  return model;
}

ForestVotes forest_votes(const RFModel &model, std::span<const double> x) {
  require_dimension(x, model.feature_count);
  ForestVotes votes;
  for (const auto &tree : model.trees) {
    ++(tree.classify(x) == Label::Malicious ? votes.malicious : votes.benign);
  }
  return votes;
}

Prediction predict_random_forest(const RFModel &model, std::span<const double> x) {
  auto votes = forest_votes(model, x);
  const std::size_t total = votes.malicious + votes.benign;
  Prediction p;
  p.label = votes.malicious >= votes.benign ? Label::Malicious : Label::Benign;
  p.score = total == 0 ? 0.0 : static_cast<double>(votes.malicious) / static_cast<double>(total);
  return p;
}

} // namespace sysdetect
