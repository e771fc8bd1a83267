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
#include "sysdetect/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sysdetect/error.hpp"

namespace sysdetect {

NBModel train_naive_bayes(const TrainingSet &train, double variance_floor) {
  if (train.feature_count() == 0) {
    throw UsageError("naive Bayes needs at least one feature");
  }
  if (!(variance_floor > 0)) {
    throw UsageError("variance floor must be positive");
  }
  require_both_classes(train);

  const std::size_t d = train.feature_count();
  NBModel model;
  model.feature_count = d;
  model.variance_floor = variance_floor;
  std::array<std::size_t, 2> counts{};
  for (int c = 0; c < 2; ++c) {
    model.means[c].assign(d, 0.0);
    model.variances[c].assign(d, 0.0);
  }

  for (std::size_t i = 0; i < train.size(); ++i) {
    const int c = static_cast<int>(train.label(i));
    ++counts[c];
    auto x = train.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      model.means[c][j] += x[j];
    }
  }
  for (int c = 0; c < 2; ++c) {
    for (auto &m : model.means[c]) {
      m /= static_cast<double>(counts[c]);
    }
  }
  // Second pass keeps the variance exact for constant columns.
  for (std::size_t i = 0; i < train.size(); ++i) {
    const int c = static_cast<int>(train.label(i));
    auto x = train.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double dev = x[j] - model.means[c][j];
      model.variances[c][j] += dev * dev;
    }
  }
  for (int c = 0; c < 2; ++c) {
    for (auto &v : model.variances[c]) {
      v = std::max(v / static_cast<double>(counts[c]), variance_floor);
    }
    model.priors[c] = static_cast<double>(counts[c]) / static_cast<double>(train.size());
  }
  return model;
}

std::array<double, 2> nb_log_scores(const NBModel &model, std::span<const double> x) {
  require_dimension(x, model.feature_count);
  const double log_two_pi = std::log(2.0 * std::numbers::pi);
  std::array<double, 2> scores{};
  for (int c = 0; c < 2; ++c) {
    double s = std::log(model.priors[c]);
    for (std::size_t j = 0; j < model.feature_count; ++j) {
      const double var = model.variances[c][j];
      const double dev = x[j] - model.means[c][j];
      s += -0.5 * (log_two_pi + std::log(var)) - dev * dev / (2.0 * var);
    }
    scores[c] = s;
  }
  return scores;
}

Label nb_decide(const std::array<double, 2> &log_scores) {
  // Gaps within summation rounding count as ties, which go to malicious.
  const double scale =
      std::max({1.0, std::abs(log_scores[0]), std::abs(log_scores[1])});
  return log_scores[0] >= log_scores[1] - kNbTieTolerance * scale ? Label::Malicious
                                                                  : Label::Benign;
}

Prediction predict_naive_bayes(const NBModel &model, std::span<const double> x) {
  auto scores = nb_log_scores(model, x);
  return {nb_decide(scores), scores[0] - scores[1]};
}

} // namespace sysdetect
