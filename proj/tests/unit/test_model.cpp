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
#include <doctest.h>

#include <cstring>

#include "helpers.hpp"
#include "sysdetect/error.hpp"
#include "sysdetect/model.hpp"
#include "temp_dir.hpp"

using namespace sysdetect;
using namespace testing;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

ClassifierParams small_params() {
  ClassifierParams p;
  p.forest.tree_count = 20;
  return p;
}

} // namespace

TEST_CASE("classifier names") {
  CHECK(parse_classifier("nb") == ClassifierKind::NaiveBayes);
  CHECK(parse_classifier("rf") == ClassifierKind::RandomForest);
  CHECK(parse_classifier("sgd") == ClassifierKind::Sgd);
  CHECK_FALSE(parse_classifier("svm").has_value());
  CHECK(display_name(ClassifierKind::Sgd) == "SGD");
}

TEST_CASE("feature names append the detection count") {
  auto v = FeatureVocabulary::from_names({"read", "open"});
  CHECK(feature_names(v) == std::vector<std::string>{"read", "open", "det_count"});
}

TEST_CASE("serialize round trip is exact for every classifier") {
  auto ds = separable_dataset(50, 7, 31);
  for (auto kind : kAllClassifiers) {
    CAPTURE(short_name(kind));
    auto m = train_model(kind, ds, small_params(), 9);
    const std::string text = serialize_model(m);
    auto back = deserialize_model(text);
    CHECK(back == m);
    CHECK(serialize_model(back) == text);
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
      std::vector<double> x(m.feature_names.size());
      for (auto &v : x) {
        v = rng.uniform() * 3;
      }
      auto p = predict(m, x);
      auto q = predict(back, x);
      CHECK(p.label == q.label);
      CHECK(same_bits(p.score, q.score));
    }
  }
}

TEST_CASE("awkward doubles survive serialization") {
  Model m;
  m.kind = ClassifierKind::Sgd;
  m.feature_names = {"a", "b", "c", "det_count"};
  SGDModel s;
  s.weights = {0.1, 1.0 / 3.0, 5e-324, -1.7976931348623157e308};
  s.bias = -0.0;
  m.impl = s;
  auto back = deserialize_model(serialize_model(m));
  const auto &w = std::get<SGDModel>(back.impl).weights;
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK(same_bits(w[i], s.weights[i]));
  }
}

TEST_CASE("save and load") {
  TempDir dir;
  auto m = train_model(ClassifierKind::NaiveBayes, separable_dataset(20, 3, 1), {}, 1);
  save_model(m, dir / "m.json");
  CHECK(load_model(dir / "m.json") == m);
  CHECK_THROWS_AS(load_model(dir / "missing.json"), DataError);
}

TEST_CASE("malformed model text") {
  CHECK_THROWS_AS(deserialize_model("not json"), DataError);
  CHECK_THROWS_AS(deserialize_model("{}"), DataError);
  CHECK_THROWS_AS(deserialize_model(R"({"format":"sysdetect-model","version":99})"), DataError);
  auto m = train_model(ClassifierKind::Sgd, separable_dataset(20, 3, 1), {}, 1);
  std::string text = serialize_model(m);
  text.replace(text.find("\"sgd\""), 5, "\"svm\"");
  CHECK_THROWS_AS(deserialize_model(text), DataError);
}

TEST_CASE("align_row maps columns by name") {
  auto ds = separable_dataset(20, 3, 2);
  auto m = train_model(ClassifierKind::NaiveBayes, ds, {}, 1);
  auto vocab = FeatureVocabulary::from_names({"f2", "extra", "f0", "f1"});
  FeatureVector row{"x", {1, 1, 0, 1}, 3, std::nullopt};
  CHECK(align_row(m, vocab, row) == std::vector<double>{0, 1, 1, 3});
  auto narrow = FeatureVocabulary::from_names({"f0", "f1"});
  CHECK_THROWS_AS(align_row(m, narrow, FeatureVector{"x", {1, 0}, 0, std::nullopt}), DataError);
}
