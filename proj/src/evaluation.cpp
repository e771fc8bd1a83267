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
#include "sysdetect/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sysdetect/error.hpp"
#include "sysdetect/log.hpp"
#include "sysdetect/random.hpp"

namespace sysdetect {
namespace {

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) {
    return std::nullopt;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

std::array<std::vector<std::size_t>, 2> rows_by_class(const Dataset &ds) {
  std::array<std::vector<std::size_t>, 2> rows;
  for (std::size_t i = 0; i < ds.rows.size(); ++i) {
    if (!ds.rows[i].label) {
      throw DataError("unlabeled app '" + ds.rows[i].app_id + "'");
    }
    rows[static_cast<int>(*ds.rows[i].label)].push_back(i);
  }
  return rows;
}

std::string format_metric(const std::optional<double> &v) {
  if (!v) {
    return "n/a";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

std::vector<std::string> metric_fields(const Metrics &m) {
  return {format_metric(m.tpr),       format_metric(m.fpr), format_metric(m.precision),
          format_metric(m.recall),    format_metric(m.f_measure),
          format_metric(m.ppv),       format_metric(m.npv),
          format_metric(m.accuracy)};
}

const std::vector<std::string> kReportColumns = {
    "classifier", "tpr", "fpr", "precision", "recall", "f_measure", "ppv", "npv", "accuracy"};

} // namespace

ConfusionCounts confusion(std::span<const Label> predicted, std::span<const Label> actual) {
  if (predicted.size() != actual.size()) {
    throw UsageError("predicted and actual label counts differ");
  }
  if (predicted.empty()) {
    throw UsageError("no predictions to score");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool pm = predicted[i] == Label::Malicious;
    const bool am = actual[i] == Label::Malicious;
    if (pm && am) {
      ++c.tp;
    } else if (!pm && !am) {
      ++c.tn;
    } else if (pm) {
      ++c.fp;
    } else {
      ++c.fn;
    }
  }
  return c;
}

Metrics compute_metrics(const ConfusionCounts &c) {
  if (c.total() == 0) {
    throw UsageError("metrics need at least one record");
  }
  Metrics m;
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.ppv = m.precision;
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.tpr = m.recall;
  m.fpr = ratio(c.fp, c.fp + c.tn);
  m.npv = ratio(c.tn, c.tn + c.fn);
  // 2pr/(p+r) reduces to 2tp/(2tp+fp+fn); one rounding keeps it inside [min, max].
  if (m.precision && m.recall && c.tp > 0) {
    m.f_measure = static_cast<double>(2 * c.tp) / static_cast<double>(2 * c.tp + c.fp + c.fn);
  }
  m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  return m;
}

HoldoutSplit holdout_split(const Dataset &ds, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw UsageError("train fraction must be in (0, 1)");
  }
  require_both_classes(ds);
  auto by_class = rows_by_class(ds);

  Rng rng(seed);
  for (auto &rows : by_class) {
    rng.shuffle(std::span<std::size_t>(rows));
  }

  const auto n = static_cast<double>(ds.size());
  const auto target = static_cast<std::size_t>(std::llround(n * train_fraction));
  std::array<std::size_t, 2> take{};
  std::array<double, 2> remainder{};
  std::size_t allocated = 0;
  for (int c = 0; c < 2; ++c) {
    const double exact = static_cast<double>(by_class[c].size()) * train_fraction;
    take[c] = static_cast<std::size_t>(std::floor(exact));
    remainder[c] = exact - std::floor(exact);
    allocated += take[c];
  }
  while (allocated < target) {
    int c = remainder[0] >= remainder[1] ? 0 : 1;
    if (take[c] == by_class[c].size()) {
      c = 1 - c;
    }
    ++take[c];
    remainder[c] = -1.0;
    ++allocated;
  }

  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < by_class[c].size(); ++i) {
      (i < take[c] ? train_rows : test_rows).push_back(by_class[c][i]);
    }
  }
  if (train_rows.empty() || test_rows.empty()) {
    throw UsageError("train fraction leaves an empty partition");
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {subset_rows(ds, train_rows), subset_rows(ds, test_rows)};
}

std::vector<std::vector<std::size_t>> stratified_kfold(const Dataset &ds, std::size_t k,
                                                       std::uint64_t seed) {
  auto by_class = rows_by_class(ds);
  const std::size_t smallest = std::min(by_class[0].size(), by_class[1].size());
  if (k < 2 || k > smallest) {
    throw UsageError("fold count must be in [2, " + std::to_string(smallest) +
                     "] (smallest class size), got " + std::to_string(k));
  }
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t next = 0;
  for (auto &rows : by_class) {
    rng.shuffle(std::span<std::size_t>(rows));
    for (std::size_t r : rows) {
      folds[next].push_back(r);
      next = (next + 1) % k;
    }
  }
  for (auto &f : folds) {
    std::sort(f.begin(), f.end());
  }
  return folds;
}

CrossValidation cross_validate(const Dataset &ds, ClassifierKind kind,
                               const ClassifierParams &params, std::size_t k,
                               std::uint64_t seed) {
  ds.validate();
  auto folds = stratified_kfold(ds, k, seed);
  CrossValidation cv;
  std::vector<char> in_test(ds.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::fill(in_test.begin(), in_test.end(), 0);
    for (std::size_t r : folds[f]) {
      in_test[r] = 1;
    }
    std::vector<std::size_t> train_rows;
    for (std::size_t r = 0; r < ds.size(); ++r) {
      if (!in_test[r]) {
        train_rows.push_back(r);
      }
    }
    const Model model = train_model(kind, subset_rows(ds, train_rows), params, mix_seed(seed, f));

    std::vector<Label> predicted;
    std::vector<Label> actual;
    for (std::size_t r : folds[f]) {
      predicted.push_back(predict(model, feature_row(ds.rows[r])).label);
      actual.push_back(*ds.rows[r].label);
    }
    const auto counts = confusion(predicted, actual);
    cv.fold_counts.push_back(counts);
    cv.fold_metrics.push_back(compute_metrics(counts));
    cv.pooled += counts;
  }
  cv.metrics = compute_metrics(cv.pooled);
  return cv;
}

ComparisonReport compare_classifiers(const Dataset &ds, std::span<const ClassifierKind> kinds,
                                     const ClassifierParams &params, std::size_t k,
                                     std::uint64_t seed) {
  ComparisonReport report;
  report.folds = k;
  report.seed = seed;
  for (auto kind : kinds) {
    report.rows.push_back({kind, cross_validate(ds, kind, params, k, seed)});
    log_info(std::string(display_name(kind)) + ": " + std::to_string(k) +
             "-fold accuracy " + format_metric(report.rows.back().result.metrics.accuracy));
  }
  return report;
}

std::string report_csv(const ComparisonReport &report) {
  std::ostringstream out;
  for (std::size_t i = 0; i < kReportColumns.size(); ++i) {
    out << (i ? "," : "") << kReportColumns[i];
  }
  out << '\n';
  for (const auto &row : report.rows) {
    out << display_name(row.kind);
    for (const auto &field : metric_fields(row.result.metrics)) {
      out << ',' << field;
    }
    out << '\n';
  }
  return out.str();
}

std::string report_table(const ComparisonReport &report) {
  std::vector<std::vector<std::string>> cells{kReportColumns};
  for (const auto &row : report.rows) {
    std::vector<std::string> line{std::string(display_name(row.kind))};
    for (auto &f : metric_fields(row.result.metrics)) {
      line.push_back(std::move(f));
    }
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(kReportColumns.size(), 0);
  for (const auto &line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      width[i] = std::max(width[i], line[i].size());
    }
  }
  std::ostringstream out;
  for (const auto &line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i == 0) {
        out << line[i] << std::string(width[i] - line[i].size(), ' ');
      } else {
        out << "  " << std::string(width[i] - line[i].size(), ' ') << line[i];
      }
    }
    out << '\n';
  }
  out << "(" << report.folds << "-fold stratified cross-validation, pooled counts, seed "
      << report.seed << ")\n";
  return out.str();
}

} // namespace sysdetect
