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
#include <span>
#include <vector>

#include "sysdetect/training_set.hpp"

namespace sysdetect {

struct SgdParams {
  double eta0 = 0.01;     // initial learning rate
  double lambda = 1e-4;   // L2 penalty
  std::size_t epochs = 100;

  bool operator==(const SgdParams &) const = default;
};

/// Linear classifier w.x + b; malicious when the margin is >= 0.
struct SGDModel {
  SgdParams params;
  std::uint64_t seed = 0;
  std::vector<double> weights;
  double bias = 0.0;

  bool operator==(const SGDModel &) const = default;
};

/// Hinge loss with L2 penalty on the weights (not the bias), labels
/// malicious = +1 and benign = -1. Each epoch visits a fresh seeded
/// permutation; step t uses eta0 / (1 + eta0 * lambda * t).
SGDModel train_sgd(const TrainingSet &train, const SgdParams &params,
                   std::uint64_t seed);

double sgd_margin(const SGDModel &model, std::span<const double> x);

/// score is the signed margin.
Prediction predict_sgd(const SGDModel &model, std::span<const double> x);

} // namespace sysdetect
