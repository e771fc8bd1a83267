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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sysdetect/collector.hpp"
#include "sysdetect/evaluation.hpp"
#include "sysdetect/feature_selector.hpp"
#include "sysdetect/model.hpp"

namespace sysdetect {

struct PipelineConfig {
  std::filesystem::path traces_dir = "traces";
  std::filesystem::path labels_path = "labels.csv";
  std::filesystem::path vocabulary_path; // empty: build from the traces
  std::filesystem::path output_dir = "out";
  std::size_t k = kDefaultTopFeatures;
  std::uint64_t seed = 1;
  std::size_t folds = 10;
  std::vector<ClassifierKind> classifiers{std::begin(kAllClassifiers),
                                          std::end(kAllClassifiers)};
  ClassifierParams params;
  std::chrono::seconds collect_duration = kDefaultTraceDuration;
  std::string command_template = kDefaultCommandTemplate;
};

/// Recognised keys, in the order `config_keys()` lists them:
/// traces_dir labels vocabulary output_dir k seed folds classifier
/// rf.trees rf.max_features rf.max_depth rf.min_samples_split
/// sgd.eta0 sgd.lambda sgd.epochs nb.variance_floor
/// collect.duration collect.command
const std::vector<std::string> &config_keys();

/// Throws UsageError for unknown keys or unparsable values.
void set_config_value(PipelineConfig &cfg, std::string_view key, std::string_view value);
std::string get_config_value(const PipelineConfig &cfg, std::string_view key);

/// Flat `key = value` lines; `#` starts a comment line.
void load_config_file(PipelineConfig &cfg, const std::filesystem::path &path);

/// Applies SYSDETECT_<KEY> variables, e.g. rf.trees -> SYSDETECT_RF_TREES.
void apply_environment(PipelineConfig &cfg);
std::string environment_name(std::string_view key);

/// `*.strace` files of a directory, sorted by name.
std::vector<std::filesystem::path> list_trace_files(const std::filesystem::path &dir);

/// Parses every trace, builds or loads the vocabulary and assembles the
/// labeled presence dataset.
Dataset build_dataset(const PipelineConfig &cfg);

/// parse -> vocabulary -> vectorize -> select top k -> cross-validate.
/// Writes into cfg.output_dir:
///   vocabulary.txt dataset.csv scores.csv reduced.csv reduced.arff
///   report.csv report.txt model_<nb|rf|sgd>.json
ComparisonReport run_pipeline(const PipelineConfig &cfg);

} // namespace sysdetect
