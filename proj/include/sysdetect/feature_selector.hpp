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
#include <ostream>
#include <span>
#include <vector>

#include "sysdetect/featurizer.hpp"

namespace sysdetect {

/// 2x2 counts of feature presence against class:
///
///              malicious  benign
///   present        a        b
///   absent         c        d
struct ContingencyTable {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t c = 0;
  std::uint64_t d = 0;

  std::uint64_t total() const { return a + b + c + d; }
  bool operator==(const ContingencyTable &) const = default;
};

ContingencyTable contingency(const Dataset &ds, std::size_t feature_index);

/// Pearson's statistic without continuity correction,
/// N (ad - bc)^2 / ((a+b)(c+d)(a+c)(b+d)). Zero when any marginal is zero.
/// Throws DataError on an empty table.
double chi_square(const ContingencyTable &t);

struct FeatureScore {
  std::size_t feature_index = 0;
  double chi2 = 0.0;
  ContingencyTable table;
};

/// Scores every column, ordered by descending chi2 then ascending index.
std::vector<FeatureScore> rank_features(const Dataset &ds);

inline constexpr std::size_t kDefaultTopFeatures = 18;

struct Selection {
  std::vector<FeatureScore> ranking;  // every feature, best first
  std::vector<std::size_t> selected;  // first k of ranking
  Dataset reduced;                    // selected columns plus detection count
};

Selection select_top_k(const Dataset &ds, std::size_t k);

/// CSV report `rank,feature_name,chi2,a,b,c,d`, one line per ranked feature.
void write_score_report(std::ostream &out, const FeatureVocabulary &vocab,
                        std::span<const FeatureScore> ranking);

} // namespace sysdetect
