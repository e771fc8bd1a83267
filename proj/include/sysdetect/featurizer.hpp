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
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sysdetect/trace_parser.hpp"

namespace sysdetect {

enum class Label { Malicious = 0, Benign = 1 };

std::string_view to_string(Label label);
std::optional<Label> parse_label(std::string_view text);

/// Ordered list of unique syscall names; position i is feature column i.
class FeatureVocabulary {
public:
  FeatureVocabulary() = default;

  /// Keeps the given order. Throws DataError on empty or duplicate names.
  static FeatureVocabulary from_names(std::vector<std::string> names);

  const std::vector<std::string> &names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  const std::string &operator[](std::size_t i) const { return names_[i]; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  bool contains(std::string_view name) const {
    return index_of(name).has_value();
  }

  bool operator==(const FeatureVocabulary &other) const {
    return names_ == other.names_;
  }

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Sorted union of the distinct syscalls of every profile.
FeatureVocabulary build_vocabulary(std::span<const TraceProfile> profiles);

struct VectorizeResult {
  std::vector<std::uint8_t> bits;
  std::set<std::string> leftover; // syscalls the vocabulary does not know
};

/// Presence bits of \p app_syscalls over \p vocab, plus the names that were
/// not matched. Linear in the total length of the names involved.
VectorizeResult vectorize(const std::set<std::string> &app_syscalls,
                          const FeatureVocabulary &vocab);
VectorizeResult vectorize(const TraceProfile &profile,
                          const FeatureVocabulary &vocab);

struct FeatureVector {
  std::string app_id;
  std::vector<std::uint8_t> bits;
  std::uint64_t detection_count = 0;
  std::optional<Label> label;

  bool operator==(const FeatureVector &) const = default;
};

struct Dataset {
  FeatureVocabulary vocabulary;
  std::vector<FeatureVector> rows;

  std::size_t size() const { return rows.size(); }
  std::size_t count(Label label) const;
  bool has_both_classes() const {
    return count(Label::Malicious) > 0 && count(Label::Benign) > 0;
  }

  /// Throws DataError unless every row is labeled and as wide as the
  /// vocabulary.
  void validate() const;

  bool operator==(const Dataset &) const = default;
};

/// Throws DataError("degenerate labels ...") unless both classes occur.
void require_both_classes(const Dataset &ds);

struct AppBits {
  std::string app_id;
  std::vector<std::uint8_t> bits;
};

/// Builds labeled rows in input order. Missing detection counts become 0.
Dataset assemble_dataset(std::span<const AppBits> vectors,
                         const std::map<std::string, std::uint64_t> &detection_counts,
                         const std::map<std::string, Label> &labels,
                         FeatureVocabulary vocab);

/// Row restricted to the given rows, in the given order.
Dataset subset_rows(const Dataset &ds, std::span<const std::size_t> rows);

/// Dataset restricted to the given bit columns, in the given order.
Dataset project_columns(const Dataset &ds, std::span<const std::size_t> columns);

} // namespace sysdetect
