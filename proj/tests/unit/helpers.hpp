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

#include <string>
#include <vector>

#include "sysdetect/featurizer.hpp"
#include "sysdetect/random.hpp"
#include "sysdetect/training_set.hpp"

namespace testing {

using sysdetect::Label;
inline constexpr Label M = Label::Malicious;
inline constexpr Label B = Label::Benign;

/// Dataset with features f0..f{d-1}; rows[i] are the bits of app i.
inline sysdetect::Dataset make_dataset(const std::vector<std::vector<std::uint8_t>> &rows,
                                       const std::vector<Label> &labels,
                                       std::vector<std::uint64_t> det = {}) {
  const std::size_t d = rows.empty() ? 1 : rows.front().size();
  std::vector<std::string> names;
  for (std::size_t j = 0; j < d; ++j) {
    names.push_back("f" + std::to_string(j));
  }
  sysdetect::Dataset ds;
  ds.vocabulary = sysdetect::FeatureVocabulary::from_names(names);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ds.rows.push_back({"app" + std::to_string(i), rows[i], det.empty() ? 0 : det[i], labels[i]});
  }
  return ds;
}

inline sysdetect::TrainingSet make_training(const std::vector<std::vector<double>> &rows,
                                            const std::vector<Label> &labels) {
  sysdetect::TrainingSet ts(rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ts.add(rows[i], labels[i]);
  }
  return ts;
}

/// n rows where bit 0 equals the label and the other d-1 bits are noise.
inline sysdetect::Dataset separable_dataset(std::size_t n, std::size_t d, std::uint64_t seed) {
  sysdetect::Rng rng(seed);
  std::vector<std::vector<std::uint8_t>> rows;
  std::vector<Label> labels;
  for (std::size_t i = 0; i < n; ++i) {
    const Label y = i % 2 == 0 ? M : B;
    std::vector<std::uint8_t> bits(d);
    bits[0] = y == M ? 1 : 0;
    for (std::size_t j = 1; j < d; ++j) {
      bits[j] = rng.bernoulli(0.5) ? 1 : 0;
    }
    rows.push_back(bits);
    labels.push_back(y);
  }
  std::vector<std::uint64_t> det(n);
  for (auto &v : det) {
    v = rng.index(4);
  }
  return make_dataset(rows, labels, det);
}

} // namespace testing
