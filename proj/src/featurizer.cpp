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
#include "sysdetect/featurizer.hpp"

#include <algorithm>
#include <unordered_set>

#include "sysdetect/error.hpp"

namespace sysdetect {

std::string_view to_string(Label label) {
  return label == Label::Malicious ? "malicious" : "benign";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "malicious") {
    return Label::Malicious;
  }
  if (text == "benign") {
    return Label::Benign;
  }
  return std::nullopt;
}

FeatureVocabulary FeatureVocabulary::from_names(std::vector<std::string> names) {
  FeatureVocabulary vocab;
  vocab.index_.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].empty()) {
      throw DataError("vocabulary entry " + std::to_string(i + 1) + " is empty");
    }
    if (!vocab.index_.emplace(names[i], i).second) {
      throw DataError("duplicate vocabulary entry '" + names[i] + "'");
    }
  }
  vocab.names_ = std::move(names);
  return vocab;
}

std::optional<std::size_t> FeatureVocabulary::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

FeatureVocabulary build_vocabulary(std::span<const TraceProfile> profiles) {
  if (profiles.empty()) {
    throw DataError("no profiles");
  }
  std::set<std::string> all;
  for (const auto &p : profiles) {
    for (const auto &[name, count] : p.name_counts) {
      all.insert(name);
    }
  }
  return FeatureVocabulary::from_names({all.begin(), all.end()});
}

VectorizeResult vectorize(const std::set<std::string> &app_syscalls,
                          const FeatureVocabulary &vocab) {
  std::unordered_set<std::string_view> present(app_syscalls.begin(),
                                               app_syscalls.end());
  VectorizeResult result;
  result.bits.resize(vocab.size(), 0);
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (present.contains(vocab[i])) {
      result.bits[i] = 1;
    }
  }
  for (const auto &name : app_syscalls) {
    if (!vocab.contains(name)) {
      result.leftover.insert(name);
    }
  }
  return result;
}

VectorizeResult vectorize(const TraceProfile &profile,
                          const FeatureVocabulary &vocab) {
  auto names = distinct_syscalls(profile);
  return vectorize(std::set<std::string>(names.begin(), names.end()), vocab);
}

std::size_t Dataset::count(Label label) const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(),
                    [&](const FeatureVector &r) { return r.label == label; }));
}

void Dataset::validate() const {
  for (const auto &row : rows) {
    if (!row.label) {
      throw DataError("unlabeled app '" + row.app_id + "'");
    }
    if (row.bits.size() != vocabulary.size()) {
      throw DataError("row '" + row.app_id + "' has " +
                      std::to_string(row.bits.size()) + " bits, expected " +
                      std::to_string(vocabulary.size()));
    }
  }
}

void require_both_classes(const Dataset &ds) {
  if (!ds.has_both_classes()) {
    throw DataError("degenerate labels: dataset needs both malicious and "
                    "benign rows (have " +
                    std::to_string(ds.count(Label::Malicious)) + " malicious, " +
                    std::to_string(ds.count(Label::Benign)) + " benign)");
  }
}

Dataset assemble_dataset(std::span<const AppBits> vectors,
                         const std::map<std::string, std::uint64_t> &detection_counts,
                         const std::map<std::string, Label> &labels,
                         FeatureVocabulary vocab) {
  Dataset ds;
  ds.rows.reserve(vectors.size());
  for (const auto &v : vectors) {
    auto label = labels.find(v.app_id);
    if (label == labels.end()) {
      throw DataError("unlabeled app '" + v.app_id + "'");
    }
    if (v.bits.size() != vocab.size()) {
      throw DataError("app '" + v.app_id + "' has " + std::to_string(v.bits.size()) +
                      " bits but the vocabulary has " + std::to_string(vocab.size()));
    }
    FeatureVector row;
    row.app_id = v.app_id;
    row.bits = v.bits;
    auto det = detection_counts.find(v.app_id);
    row.detection_count = det == detection_counts.end() ? 0 : det->second;
    row.label = label->second;
    ds.rows.push_back(std::move(row));
  }
  ds.vocabulary = std::move(vocab);
  return ds;
}

Dataset subset_rows(const Dataset &ds, std::span<const std::size_t> rows) {
  Dataset out;
  out.vocabulary = ds.vocabulary;
  out.rows.reserve(rows.size());
  for (std::size_t r : rows) {
    out.rows.push_back(ds.rows.at(r));
  }
  return out;
}

Dataset project_columns(const Dataset &ds, std::span<const std::size_t> columns) {
  std::vector<std::string> names;
  names.reserve(columns.size());
  for (std::size_t c : columns) {
    if (c >= ds.vocabulary.size()) {
      throw UsageError("feature index " + std::to_string(c) + " out of range");
    }
    names.push_back(ds.vocabulary[c]);
  }
  Dataset out;
  out.vocabulary = FeatureVocabulary::from_names(std::move(names));
  out.rows.reserve(ds.rows.size());
  for (const auto &row : ds.rows) {
    FeatureVector projected = row;
    projected.bits.clear();
    for (std::size_t c : columns) {
      projected.bits.push_back(row.bits.at(c));
    }
    out.rows.push_back(std::move(projected));
  }
  return out;
}

} // namespace sysdetect
