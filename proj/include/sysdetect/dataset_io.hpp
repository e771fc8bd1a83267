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
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "sysdetect/featurizer.hpp"

namespace sysdetect {

/// Header `app_id,label,det_count,<feature names...>`, one row per app.
void write_dataset_csv(std::ostream &out, const Dataset &ds);
/// Throws DataError ("line N: ...") on malformed input.
Dataset read_dataset_csv(std::istream &in);

void save_dataset_csv(const Dataset &ds, const std::filesystem::path &path);
Dataset load_dataset_csv(const std::filesystem::path &path);

/// Weka ARFF: presence bits as {0,1}, det_count numeric, class nominal.
void write_arff(std::ostream &out, const Dataset &ds);
void save_arff(const Dataset &ds, const std::filesystem::path &path);

/// One syscall name per line; blank lines are ignored, order is kept.
FeatureVocabulary read_vocabulary(std::istream &in);
FeatureVocabulary load_vocabulary(const std::filesystem::path &path);
void save_vocabulary(const FeatureVocabulary &vocab, const std::filesystem::path &path);

struct LabelRecord {
  Label label = Label::Benign;
  std::uint64_t detection_count = 0;
};

/// CSV `app_id,label[,detection_count]` with an optional header line whose
/// first field is `app_id`.
std::map<std::string, LabelRecord> read_labels(std::istream &in);
std::map<std::string, LabelRecord> load_labels(const std::filesystem::path &path);

/// Splits one CSV record; double-quoted fields may contain commas and "".
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_field(std::string_view value);

} // namespace sysdetect
