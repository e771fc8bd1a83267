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
#include "sysdetect/sgd.hpp"

#include <numeric>

#include "sysdetect/error.hpp"
#include "sysdetect/random.hpp"

namespace sysdetect {

SGDModel train_sgd(const TrainingSet &train, const SgdParams &params,
                   std::uint64_t seed) {
  if (!(params.eta0 > 0)) {
    throw UsageError("sgd eta0 must be positive");
  }
  if (!(params.lambda >= 0)) {
    throw UsageError("sgd lambda must be non-negative");
  }
  require_both_classes(train);

  const std::size_t d = train.feature_count();
  SGDModel model;
  model.params = params;
  model.seed = seed;
  model.weights.assign(d, 0.0);

  Rng rng(seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::uint64_t step = 0;
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t i : order) {
      const double eta =
          params.eta0 / (1.0 + params.eta0 * params.lambda * static_cast<double>(step));
      ++step;
      auto x = train.row(i);
      const double y = train.label(i) == Label::Malicious ? 1.0 : -1.0;
      const double margin = y * sgd_margin(model, x);
      const double shrink = 1.0 - eta * params.lambda;
      for (auto &w : model.weights) {
        w *= shrink;
      }
      if (margin < 1.0) {
        for (std::size_t j = 0; j < d; ++j) {
          model.weights[j] += eta * y * x[j];
        }
        model.bias += eta * y;
      }
    }
  }
  return model;
}

double sgd_margin(const SGDModel &model, std::span<const double> x) {
  require_dimension(x, model.weights.size());
  double m = model.bias;
  for (std::size_t j = 0; j < x.size(); ++j) {
    m += model.weights[j] * x[j];
  }
  return m;
}

Prediction predict_sgd(const SGDModel &model, std::span<const double> x) {
  const double m = sgd_margin(model, x);
  return {m >= 0.0 ? Label::Malicious : Label::Benign, m};
}

} // namespace sysdetect
