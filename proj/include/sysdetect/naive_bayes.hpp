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

#include <array>
#include <span>
#include <vector>

#include "sysdetect/training_set.hpp"

namespace sysdetect {

inline constexpr double kDefaultVarianceFloor = 1e-9;

/// Relative log-score gap treated as a tie.
inline constexpr double kNbTieTolerance = 1e-12;

/// Gaussian naive Bayes over the mean/variance table of each class.
/// Arrays are indexed by Label (malicious = 0, benign = 1).
struct NBModel {
  std::size_t feature_count = 0;
  double variance_floor = kDefaultVarianceFloor;
  std::array<double, 2> priors{};
  std::array<std::vector<double>, 2> means;
  std::array<std::vector<double>, 2> variances; // population, floored

  bool operator==(const NBModel &) const = default;
};

NBModel train_naive_bayes(const TrainingSet &train,
                          double variance_floor = kDefaultVarianceFloor);

/// log prior + sum of log Gaussian densities, per class.
std::array<double, 2> nb_log_scores(const NBModel &model, std::span<const double> x);

/// Malicious when its log score is at least the benign one.
Label nb_decide(const std::array<double, 2> &log_scores);

/// score = malicious log score - benign log score.
Prediction predict_naive_bayes(const NBModel &model, std::span<const double> x);

} // namespace sysdetect
