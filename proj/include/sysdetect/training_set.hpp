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

#include <span>
#include <vector>

#include "sysdetect/featurizer.hpp"

namespace sysdetect {

/// Dense numeric design matrix (row-major) with one label per row.
class TrainingSet {
public:
  explicit TrainingSet(std::size_t feature_count) : features_(feature_count) {}

  std::size_t feature_count() const { return features_; }
  std::size_t size() const { return labels_.size(); }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * features_, features_};
  }
  Label label(std::size_t i) const { return labels_[i]; }
  std::span<const Label> labels() const { return labels_; }

  void add(std::span<const double> x, Label y);

  std::size_t count(Label y) const;

private:
  std::size_t features_;
  std::vector<double> values_;
  std::vector<Label> labels_;
};

/// Bits followed by the detection count as the last column.
std::vector<double> feature_row(const FeatureVector &row);

/// One row per dataset row; width is vocabulary size + 1.
TrainingSet to_training_set(const Dataset &ds);

/// Throws DataError unless both classes are present.
void require_both_classes(const TrainingSet &ts);

/// Throws UsageError if x.size() != expected.
void require_dimension(std::span<const double> x, std::size_t expected);

struct Prediction {
  Label label = Label::Malicious;
  double score = 0.0;
};

} // namespace sysdetect
