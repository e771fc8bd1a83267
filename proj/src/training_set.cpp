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
#include "sysdetect/training_set.hpp"

#include <algorithm>

#include "sysdetect/error.hpp"

namespace sysdetect {

void TrainingSet::add(std::span<const double> x, Label y) {
  require_dimension(x, features_);
  values_.insert(values_.end(), x.begin(), x.end());
  labels_.push_back(y);
}

std::size_t TrainingSet::count(Label y) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), y));
}

std::vector<double> feature_row(const FeatureVector &row) {
  std::vector<double> x;
  x.reserve(row.bits.size() + 1);
  for (auto bit : row.bits) {
    x.push_back(bit);
  }
  x.push_back(static_cast<double>(row.detection_count));
  return x;
}

TrainingSet to_training_set(const Dataset &ds) {
  ds.validate();
  TrainingSet ts(ds.vocabulary.size() + 1);
  for (const auto &row : ds.rows) {
    ts.add(feature_row(row), *row.label);
  }
  return ts;
}

void require_both_classes(const TrainingSet &ts) {
  if (ts.count(Label::Malicious) == 0 || ts.count(Label::Benign) == 0) {
    throw DataError("degenerate labels: training data needs both malicious "
                    "and benign rows");
  }
}

void require_dimension(std::span<const double> x, std::size_t expected) {
  if (x.size() != expected) {
    throw UsageError("feature vector has " + std::to_string(x.size()) +
                     " values, model expects " + std::to_string(expected));
  }
}

} // namespace sysdetect
