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
#include "sysdetect/model.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "sysdetect/error.hpp"

namespace sysdetect {

using json = nlohmann::json;

namespace {

constexpr std::string_view kFormat = "sysdetect-model";
constexpr int kVersion = 1;

json encode(const NBModel &m) {
  return {{"variance_floor", m.variance_floor},
          {"priors", m.priors},
          {"means", m.means},
          {"variances", m.variances}};
}

json encode(const RFModel &m) {
  json trees = json::array();
  for (const auto &tree : m.trees) {
    json t = {{"feature", json::array()}, {"threshold", json::array()},
              {"left", json::array()},    {"right", json::array()},
              {"malicious", json::array()}, {"benign", json::array()}};
    for (const auto &n : tree.nodes) {
      t["feature"].push_back(n.feature);
      t["threshold"].push_back(n.threshold);
      t["left"].push_back(n.left);
      t["right"].push_back(n.right);
      t["malicious"].push_back(n.malicious);
      t["benign"].push_back(n.benign);
    }
    trees.push_back(std::move(t));
  }
  return {{"params",
           {{"tree_count", m.params.tree_count},
            {"max_features", m.params.max_features},
            {"max_depth", m.params.max_depth},
            {"min_samples_split", m.params.min_samples_split}}},
          {"trees", std::move(trees)}};
}

json encode(const SGDModel &m) {
  return {{"params",
           {{"eta0", m.params.eta0},
            {"lambda", m.params.lambda},
            {"epochs", m.params.epochs}}},
          {"weights", m.weights},
          {"bias", m.bias}};
}

NBModel decode_nb(const json &j, std::size_t d) {
  NBModel m;
  m.feature_count = d;
  m.variance_floor = j.at("variance_floor").get<double>();
  m.priors = j.at("priors").get<std::array<double, 2>>();
  m.means = j.at("means").get<std::array<std::vector<double>, 2>>();
  m.variances = j.at("variances").get<std::array<std::vector<double>, 2>>();
  for (int c = 0; c < 2; ++c) {
    if (m.means[c].size() != d || m.variances[c].size() != d) {
      throw DataError("naive Bayes table width does not match feature names");
    }
  }
  return m;
}

RFModel decode_rf(const json &j, std::size_t d, std::uint64_t seed) {
  RFModel m;
  m.feature_count = d;
  m.seed = seed;
  const auto &p = j.at("params");
  m.params.tree_count = p.at("tree_count").get<std::size_t>();
  m.params.max_features = p.at("max_features").get<std::size_t>();
  m.params.max_depth = p.at("max_depth").get<std::size_t>();
  m.params.min_samples_split = p.at("min_samples_split").get<std::size_t>();
  for (const auto &t : j.at("trees")) {
    const auto feature = t.at("feature").get<std::vector<std::int32_t>>();
    const auto threshold = t.at("threshold").get<std::vector<double>>();
    const auto left = t.at("left").get<std::vector<std::uint32_t>>();
    const auto right = t.at("right").get<std::vector<std::uint32_t>>();
    const auto mal = t.at("malicious").get<std::vector<std::uint32_t>>();
    const auto ben = t.at("benign").get<std::vector<std::uint32_t>>();
    const std::size_t n = feature.size();
    if (n == 0 || threshold.size() != n || left.size() != n || right.size() != n ||
        mal.size() != n || ben.size() != n) {
      throw DataError("malformed tree in model file");
    }
    DecisionTree tree;
    tree.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto &node = tree.nodes[i];
      node = {feature[i], threshold[i], left[i], right[i], mal[i], ben[i]};
      if (!node.is_leaf() &&
          (static_cast<std::size_t>(node.feature) >= d || node.left >= n ||
           node.right >= n || node.left <= i || node.right <= i)) {
        throw DataError("malformed tree node in model file");
      }
    }
    m.trees.push_back(std::move(tree));
  }
  if (m.trees.size() != m.params.tree_count) {
    throw DataError("model file tree count does not match its parameters");
  }
  return m;
}

SGDModel decode_sgd(const json &j, std::size_t d, std::uint64_t seed) {
  SGDModel m;
  m.seed = seed;
  const auto &p = j.at("params");
  m.params.eta0 = p.at("eta0").get<double>();
  m.params.lambda = p.at("lambda").get<double>();
  m.params.epochs = p.at("epochs").get<std::size_t>();
  m.weights = j.at("weights").get<std::vector<double>>();
  m.bias = j.at("bias").get<double>();
  if (m.weights.size() != d) {
    throw DataError("sgd weight count does not match feature names");
  }
  return m;
}

} // namespace

std::string_view short_name(ClassifierKind kind) {
  switch (kind) {
  case ClassifierKind::NaiveBayes:
    return "nb";
  case ClassifierKind::RandomForest:
    return "rf";
  case ClassifierKind::Sgd:
    return "sgd";
  }
  return "nb";
}

std::string_view display_name(ClassifierKind kind) {
  switch (kind) {
  case ClassifierKind::NaiveBayes:
    return "NaiveBayes";
  case ClassifierKind::RandomForest:
    return "RandomForest";
  case ClassifierKind::Sgd:
    return "SGD";
  }
  return "NaiveBayes";
}

std::optional<ClassifierKind> parse_classifier(std::string_view text) {
  for (auto kind : kAllClassifiers) {
    if (text == short_name(kind)) {
      return kind;
    }
  }
  return std::nullopt;
}

std::vector<std::string> feature_names(const FeatureVocabulary &vocab) {
  std::vector<std::string> names = vocab.names();
  names.emplace_back(kDetectionCountFeature);
  return names;
}

Model train_model(ClassifierKind kind, const TrainingSet &train,
                  std::vector<std::string> names, const ClassifierParams &params,
                  std::uint64_t seed) {
  if (names.size() != train.feature_count()) {
    throw UsageError("feature name count does not match training width");
  }
  Model model;
  model.kind = kind;
  model.seed = seed;
  model.feature_names = std::move(names);
  switch (kind) {
  case ClassifierKind::NaiveBayes:
    model.impl = train_naive_bayes(train, params.variance_floor);
    break;
  case ClassifierKind::RandomForest:
    model.impl = train_random_forest(train, params.forest, seed);
    break;
  case ClassifierKind::Sgd:
    model.impl = train_sgd(train, params.sgd, seed);
    break;
  }
  return model;
}

Model train_model(ClassifierKind kind, const Dataset &train,
                  const ClassifierParams &params, std::uint64_t seed) {
  return train_model(kind, to_training_set(train), feature_names(train.vocabulary),
                     params, seed);
}

Prediction predict(const Model &model, std::span<const double> x) {
  return std::visit(
      [&](const auto &m) -> Prediction {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, NBModel>) {
          return predict_naive_bayes(m, x);
        } else if constexpr (std::is_same_v<T, RFModel>) {
          return predict_random_forest(m, x);
        } else {
          return predict_sgd(m, x);
        }
      },
      model.impl);
}

std::vector<double> align_row(const Model &model, const FeatureVocabulary &vocab,
                              const FeatureVector &row) {
  std::vector<double> x;
  x.reserve(model.feature_names.size());
  for (std::size_t i = 0; i + 1 < model.feature_names.size(); ++i) {
    auto idx = vocab.index_of(model.feature_names[i]);
    if (!idx) {
      throw DataError("dataset has no column for model feature '" +
                      model.feature_names[i] + "'");
    }
    x.push_back(row.bits.at(*idx));
  }
  x.push_back(static_cast<double>(row.detection_count));
  return x;
}

std::string serialize_model(const Model &model) {
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["classifier"] = short_name(model.kind);
  doc["seed"] = model.seed;
  doc["feature_names"] = model.feature_names;
  doc[std::string(short_name(model.kind))] =
      std::visit([](const auto &m) { return encode(m); }, model.impl);
  return doc.dump(1) + "\n";
}

Model deserialize_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception &e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kFormat) {
      throw DataError("not a sysdetect model file");
    }
    const int version = doc.at("version").get<int>();
    if (version != kVersion) {
      throw DataError("unsupported model version " + std::to_string(version));
    }
    auto kind = parse_classifier(doc.at("classifier").get<std::string>());
    if (!kind) {
      throw DataError("unknown classifier in model file");
    }
    Model model;
    model.kind = *kind;
    model.seed = doc.at("seed").get<std::uint64_t>();
    model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    const std::size_t d = model.feature_names.size();
    if (d == 0) {
      throw DataError("model file lists no features");
    }
    const auto &body = doc.at(std::string(short_name(*kind)));
    switch (*kind) {
    case ClassifierKind::NaiveBayes:
      model.impl = decode_nb(body, d);
      break;
    case ClassifierKind::RandomForest:
      model.impl = decode_rf(body, d, model.seed);
      break;
    case ClassifierKind::Sgd:
      model.impl = decode_sgd(body, d, model.seed);
      break;
    }
    return model;
  } catch (const json::exception &e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const Model &model, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write model file '" + path.string() + "'");
  }
  out << serialize_model(model);
  if (!out) {
    throw DataError("failed writing model file '" + path.string() + "'");
  }
}

Model load_model(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open model file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_model(buf.str());
}

} // namespace sysdetect
