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
#include "sysdetect/feature_selector.hpp"

#include <algorithm>
#include <cstdio>

#include "sysdetect/error.hpp"

namespace sysdetect {

ContingencyTable contingency(const Dataset &ds, std::size_t feature_index) {
  if (feature_index >= ds.vocabulary.size()) {
    throw UsageError("feature index " + std::to_string(feature_index) +
                     " out of range (vocabulary has " +
                     std::to_string(ds.vocabulary.size()) + " features)");
  }
  ContingencyTable t;
  for (const auto &row : ds.rows) {
    const bool present = row.bits.at(feature_index) != 0;
    const bool malicious = row.label == Label::Malicious;
    if (present) {
      ++(malicious ? t.a : t.b);
    } else {
      ++(malicious ? t.c : t.d);
    }
  }
  return t;
}

double chi_square(const ContingencyTable &t) {
  const std::uint64_t n = t.total();
  if (n == 0) {
    throw DataError("empty table");
  }
  const double present = static_cast<double>(t.a + t.b);
  const double absent = static_cast<double>(t.c + t.d);
  const double malicious = static_cast<double>(t.a + t.c);
  const double benign = static_cast<double>(t.b + t.d);
  if (present == 0 || absent == 0 || malicious == 0 || benign == 0) {
    return 0.0;
  }
  const double diff = static_cast<double>(t.a) * static_cast<double>(t.d) -
                      static_cast<double>(t.b) * static_cast<double>(t.c);
  return static_cast<double>(n) * (diff / (present * absent)) *
         (diff / (malicious * benign));
}

std::vector<FeatureScore> rank_features(const Dataset &ds) {
  std::vector<FeatureScore> scores;
  scores.reserve(ds.vocabulary.size());
  for (std::size_t i = 0; i < ds.vocabulary.size(); ++i) {
    FeatureScore s;
    s.feature_index = i;
    s.table = contingency(ds, i);
    s.chi2 = ds.rows.empty() ? 0.0 : chi_square(s.table);
    scores.push_back(s);
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const FeatureScore &x, const FeatureScore &y) {
                     return x.chi2 > y.chi2;
                   });
  return scores;
}

Selection select_top_k(const Dataset &ds, std::size_t k) {
  if (k < 1 || k > ds.vocabulary.size()) {
    throw UsageError("k must be in [1, " + std::to_string(ds.vocabulary.size()) +
                     "], got " + std::to_string(k));
  }
  ds.validate();
  require_both_classes(ds);

  Selection sel;
  sel.ranking = rank_features(ds);
  sel.selected.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    sel.selected.push_back(sel.ranking[i].feature_index);
  }
  sel.reduced = project_columns(ds, sel.selected);
  return sel;
}

void write_score_report(std::ostream &out, const FeatureVocabulary &vocab,
                        std::span<const FeatureScore> ranking) {
  out << "rank,feature_name,chi2,a,b,c,d\n";
  char buf[64];
  for (std::size_t r = 0; r < ranking.size(); ++r) {
    const auto &s = ranking[r];
    std::snprintf(buf, sizeof buf, "%.6f", s.chi2);
    out << (r + 1) << ',' << vocab[s.feature_index] << ',' << buf << ','
        << s.table.a << ',' << s.table.b << ',' << s.table.c << ','
        << s.table.d << '\n';
  }
}

} // namespace sysdetect
