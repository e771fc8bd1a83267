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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sysdetect/featurizer.hpp"
#include "sysdetect/naive_bayes.hpp"
#include "sysdetect/random_forest.hpp"
#include "sysdetect/sgd.hpp"

namespace sysdetect {

enum class ClassifierKind { NaiveBayes, RandomForest, Sgd };

inline constexpr ClassifierKind kAllClassifiers[] = {
    ClassifierKind::NaiveBayes, ClassifierKind::RandomForest, ClassifierKind::Sgd};

/// "nb", "rf", "sgd"
std::string_view short_name(ClassifierKind kind);
/// "NaiveBayes", "RandomForest", "SGD"
std::string_view display_name(ClassifierKind kind);
std::optional<ClassifierKind> parse_classifier(std::string_view text);

struct ClassifierParams {
  ForestParams forest;
  SgdParams sgd;
  double variance_floor = kDefaultVarianceFloor;

  bool operator==(const ClassifierParams &) const = default;
};

/// Name of the trailing numeric column in every feature vector.
inline constexpr std::string_view kDetectionCountFeature = "det_count";

/// A trained classifier together with the feature names it expects.
struct Model {
  ClassifierKind kind = ClassifierKind::NaiveBayes;
  std::uint64_t seed = 0;
  std::vector<std::string> feature_names; // syscalls then det_count
  std::variant<NBModel, RFModel, SGDModel> impl;

  bool operator==(const Model &) const = default;
};

std::vector<std::string> feature_names(const FeatureVocabulary &vocab);

Model train_model(ClassifierKind kind, const TrainingSet &train,
                  std::vector<std::string> names, const ClassifierParams &params,
                  std::uint64_t seed);
Model train_model(ClassifierKind kind, const Dataset &train,
                  const ClassifierParams &params, std::uint64_t seed);

Prediction predict(const Model &model, std::span<const double> x);

/// Builds the model's input vector for \p row by feature name. Throws
/// DataError if the dataset lacks one of the model's syscalls.
std::vector<double> align_row(const Model &model, const FeatureVocabulary &vocab,
                              const FeatureVector &row);

/// Versioned JSON document; doubles round-trip exactly.
std::string serialize_model(const Model &model);
Model deserialize_model(std::string_view text);

void save_model(const Model &model, const std::filesystem::path &path);
Model load_model(const std::filesystem::path &path);

} // namespace sysdetect
