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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sysdetect/featurizer.hpp"
#include "sysdetect/model.hpp"

namespace sysdetect {

/// Malicious is the positive class.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }
  ConfusionCounts &operator+=(const ConfusionCounts &o) {
    tp += o.tp;
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const ConfusionCounts &) const = default;
};

ConfusionCounts confusion(std::span<const Label> predicted, std::span<const Label> actual);

/// Ratios whose denominator is zero are std::nullopt and print as "n/a".
struct Metrics {
  std::optional<double> tpr;
  std::optional<double> fpr;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f_measure;
  std::optional<double> ppv;
  std::optional<double> npv;
  double accuracy = 0.0;

  bool operator==(const Metrics &) const = default;
};

Metrics compute_metrics(const ConfusionCounts &c);

struct HoldoutSplit {
  Dataset train;
  Dataset test;
};

/// Stratified split. The training size is round(n * fraction); each class
/// gets floor(n_c * fraction) rows and the remaining slots go to the classes
/// with the largest fractional parts (malicious first on ties). Rows keep
/// their dataset order within each partition.
HoldoutSplit holdout_split(const Dataset &ds, double train_fraction, std::uint64_t seed);

/// Test-row indices of each fold. Rows of each class are shuffled and dealt
/// round-robin, the benign deal continuing where the malicious one stopped,
/// so fold sizes and per-class fold counts each differ by at most one.
/// Requires 2 <= k <= smallest class count.
std::vector<std::vector<std::size_t>> stratified_kfold(const Dataset &ds, std::size_t k,
                                                       std::uint64_t seed);

struct CrossValidation {
  ConfusionCounts pooled;
  Metrics metrics; // from the pooled counts
  std::vector<ConfusionCounts> fold_counts;
  std::vector<Metrics> fold_metrics;
};

CrossValidation cross_validate(const Dataset &ds, ClassifierKind kind,
                               const ClassifierParams &params, std::size_t k,
                               std::uint64_t seed);

struct ReportRow {
  ClassifierKind kind;
  CrossValidation result;
};

struct ComparisonReport {
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  std::vector<ReportRow> rows;
};

/// Cross-validates each classifier on the same folds.
ComparisonReport compare_classifiers(const Dataset &ds, std::span<const ClassifierKind> kinds,
                                     const ClassifierParams &params, std::size_t k,
                                     std::uint64_t seed);

/// `classifier,tpr,fpr,precision,recall,f_measure,ppv,npv,accuracy`
std::string report_csv(const ComparisonReport &report);
/// Same columns, aligned for terminals.
std::string report_table(const ComparisonReport &report);

} // namespace sysdetect
