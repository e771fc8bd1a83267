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
#include "sysdetect/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>

#include "sysdetect/dataset_io.hpp"
#include "sysdetect/error.hpp"
#include "sysdetect/log.hpp"
#include "sysdetect/trace_parser.hpp"

namespace sysdetect {
namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T> T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const std::string s = trim(text);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw UsageError("invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

double parse_real(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  char *end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw UsageError("invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return v;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<ClassifierKind> parse_classifiers(std::string_view text) {
  const std::string s = trim(text);
  if (s == "all") {
    return {std::begin(kAllClassifiers), std::end(kAllClassifiers)};
  }
  std::vector<ClassifierKind> kinds;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    auto item = trim(std::string_view(s).substr(start, comma - start));
    auto kind = parse_classifier(item);
    if (!kind) {
      throw UsageError("unknown classifier '" + item + "' (expected nb, rf, sgd or all)");
    }
    if (std::find(kinds.begin(), kinds.end(), *kind) == kinds.end()) {
      kinds.push_back(*kind);
    }
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return kinds;
}

struct KeyHandler {
  std::string key;
  std::function<void(PipelineConfig &, std::string_view)> set;
  std::function<std::string(const PipelineConfig &)> get;
};

template <typename T> std::string str(T v) { return std::to_string(v); }

const std::vector<KeyHandler> &handlers() {
  static const std::vector<KeyHandler> table = {
      {"traces_dir", [](auto &c, auto v) { c.traces_dir = trim(v); },
       [](const auto &c) { return c.traces_dir.string(); }},
      {"labels", [](auto &c, auto v) { c.labels_path = trim(v); },
       [](const auto &c) { return c.labels_path.string(); }},
      {"vocabulary", [](auto &c, auto v) { c.vocabulary_path = trim(v); },
       [](const auto &c) { return c.vocabulary_path.string(); }},
      {"output_dir", [](auto &c, auto v) { c.output_dir = trim(v); },
       [](const auto &c) { return c.output_dir.string(); }},
      {"k", [](auto &c, auto v) { c.k = parse_number<std::size_t>("k", v); },
       [](const auto &c) { return str(c.k); }},
      {"seed", [](auto &c, auto v) { c.seed = parse_number<std::uint64_t>("seed", v); },
       [](const auto &c) { return str(c.seed); }},
      {"folds", [](auto &c, auto v) { c.folds = parse_number<std::size_t>("folds", v); },
       [](const auto &c) { return str(c.folds); }},
      {"classifier", [](auto &c, auto v) { c.classifiers = parse_classifiers(v); },
       [](const auto &c) {
         std::string out;
         for (auto k : c.classifiers) {
           out += (out.empty() ? "" : ",") + std::string(short_name(k));
         }
         return out;
       }},
      {"rf.trees",
       [](auto &c, auto v) { c.params.forest.tree_count = parse_number<std::size_t>("rf.trees", v); },
       [](const auto &c) { return str(c.params.forest.tree_count); }},
      {"rf.max_features",
       [](auto &c, auto v) {
         c.params.forest.max_features = parse_number<std::size_t>("rf.max_features", v);
       },
       [](const auto &c) { return str(c.params.forest.max_features); }},
      {"rf.max_depth",
       [](auto &c, auto v) { c.params.forest.max_depth = parse_number<std::size_t>("rf.max_depth", v); },
       [](const auto &c) { return str(c.params.forest.max_depth); }},
      {"rf.min_samples_split",
       [](auto &c, auto v) {
         c.params.forest.min_samples_split = parse_number<std::size_t>("rf.min_samples_split", v);
       },
       [](const auto &c) { return str(c.params.forest.min_samples_split); }},
      {"sgd.eta0", [](auto &c, auto v) { c.params.sgd.eta0 = parse_real("sgd.eta0", v); },
       [](const auto &c) { return format_real(c.params.sgd.eta0); }},
      {"sgd.lambda", [](auto &c, auto v) { c.params.sgd.lambda = parse_real("sgd.lambda", v); },
       [](const auto &c) { return format_real(c.params.sgd.lambda); }},
      {"sgd.epochs",
       [](auto &c, auto v) { c.params.sgd.epochs = parse_number<std::size_t>("sgd.epochs", v); },
       [](const auto &c) { return str(c.params.sgd.epochs); }},
      {"nb.variance_floor",
       [](auto &c, auto v) { c.params.variance_floor = parse_real("nb.variance_floor", v); },
       [](const auto &c) { return format_real(c.params.variance_floor); }},
      {"collect.duration",
       [](auto &c, auto v) {
         c.collect_duration = std::chrono::seconds(parse_number<long long>("collect.duration", v));
       },
       [](const auto &c) { return str(c.collect_duration.count()); }},
      {"collect.command", [](auto &c, auto v) { c.command_template = trim(v); },
       [](const auto &c) { return c.command_template; }},
  };
  return table;
}

const KeyHandler &handler(std::string_view key) {
  for (const auto &h : handlers()) {
    if (h.key == key) {
      return h;
    }
  }
  throw UsageError("unknown configuration key '" + std::string(key) + "'");
}

// Runs one pipeline stage, prefixing any error with the stage name.
template <typename F> auto stage(const char *name, F &&f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error &e) {
    const std::string msg = std::string("stage '") + name + "': " + e.what();
    switch (e.kind()) {
    case ErrorKind::Usage:
      throw UsageError(msg);
    case ErrorKind::Data:
      throw DataError(msg);
    default:
      throw Error(e.kind(), msg);
    }
  } catch (const std::exception &e) {
    throw Error(ErrorKind::Internal, std::string("stage '") + name + "': " + e.what());
  }
}

void write_text(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) {
    throw DataError("cannot write '" + path.string() + "'");
  }
}

} // namespace

const std::vector<std::string> &config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto &h : handlers()) {
      k.push_back(h.key);
    }
    return k;
  }();
  return keys;
}

void set_config_value(PipelineConfig &cfg, std::string_view key, std::string_view value) {
  handler(key).set(cfg, value);
}

std::string get_config_value(const PipelineConfig &cfg, std::string_view key) {
  return handler(key).get(cfg);
}

void load_config_file(PipelineConfig &cfg, const fs::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot open config file '" + path.string() + "'");
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') {
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      set_config_value(cfg, trim(t.substr(0, eq)), t.substr(eq + 1));
    } catch (const UsageError &e) {
      throw UsageError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::string environment_name(std::string_view key) {
  std::string name = "SYSDETECT_";
  for (char c : key) {
    name += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return name;
}

void apply_environment(PipelineConfig &cfg) {
  for (const auto &key : config_keys()) {
    if (const char *v = std::getenv(environment_name(key).c_str())) {
      try {
        set_config_value(cfg, key, v);
      } catch (const UsageError &e) {
        throw UsageError(environment_name(key) + ": " + e.what());
      }
    }
  }
}

std::vector<fs::path> list_trace_files(const fs::path &dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw DataError("trace directory '" + dir.string() + "' does not exist");
  }
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".strace") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

Dataset build_dataset(const PipelineConfig &cfg) {
  auto profiles = stage("parse", [&] {
    const auto files = list_trace_files(cfg.traces_dir);
    if (files.empty()) {
      throw DataError("no .strace files in '" + cfg.traces_dir.string() + "'");
    }
    std::vector<TraceProfile> out;
    std::uint64_t unparseable = 0;
    for (const auto &f : files) {
      out.push_back(parse_trace_file(f, f.stem().string()));
      unparseable += out.back().unparseable_lines;
    }
    log_info("parse: " + std::to_string(out.size()) + " traces, " +
             std::to_string(unparseable) + " unparseable lines");
    return out;
  });

  auto labels = stage("labels", [&] { return load_labels(cfg.labels_path); });

  auto vocab = stage("vocabulary", [&] {
    auto v = cfg.vocabulary_path.empty() ? build_vocabulary(profiles)
                                         : load_vocabulary(cfg.vocabulary_path);
    log_info("vocabulary: " + std::to_string(v.size()) + " syscalls");
    return v;
  });

  return stage("vectorize", [&] {
    std::vector<AppBits> vectors;
    std::map<std::string, std::uint64_t> det;
    std::map<std::string, Label> label_of;
    std::size_t unknown = 0;
    for (const auto &p : profiles) {
      auto v = vectorize(p, vocab);
      unknown += v.leftover.size();
      vectors.push_back({p.app_id, std::move(v.bits)});
    }
    for (const auto &[app, rec] : labels) {
      label_of[app] = rec.label;
      det[app] = rec.detection_count;
    }
    Dataset ds = assemble_dataset(vectors, det, label_of, vocab);
    if (labels.size() > ds.size()) {
      log_info("vectorize: " + std::to_string(labels.size() - ds.size()) +
               " labeled apps have no trace");
    }
    log_info("vectorize: " + std::to_string(ds.size()) + " rows (" +
             std::to_string(ds.count(Label::Malicious)) + " malicious, " +
             std::to_string(ds.count(Label::Benign)) + " benign), " +
             std::to_string(ds.vocabulary.size()) + " features, " + std::to_string(unknown) +
             " out-of-vocabulary syscall names");
    return ds;
  });
}

ComparisonReport run_pipeline(const PipelineConfig &cfg) {
  if (cfg.k < 1) {
    throw UsageError("k must be at least 1");
  }
  if (cfg.classifiers.empty()) {
    throw UsageError("no classifiers selected");
  }
  const Dataset full = build_dataset(cfg);

  const auto &out = cfg.output_dir;
  stage("output", [&] {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) {
      throw DataError("cannot create output directory '" + out.string() + "': " + ec.message());
    }
    save_vocabulary(full.vocabulary, out / "vocabulary.txt");
    save_dataset_csv(full, out / "dataset.csv");
    return 0;
  });

  const Selection sel = stage("select", [&] {
    auto s = select_top_k(full, cfg.k);
    log_info("select: kept " + std::to_string(s.selected.size()) + " of " +
             std::to_string(full.vocabulary.size()) + " syscalls (+ det_count = " +
             std::to_string(s.reduced.vocabulary.size() + 1) + " features)");
    std::ofstream scores(out / "scores.csv", std::ios::binary);
    write_score_report(scores, full.vocabulary, s.ranking);
    if (!scores.flush()) {
      throw DataError("cannot write scores.csv");
    }
    save_dataset_csv(s.reduced, out / "reduced.csv");
    save_arff(s.reduced, out / "reduced.arff");
    return s;
  });

  auto report = stage("evaluate", [&] {
    return compare_classifiers(sel.reduced, cfg.classifiers, cfg.params, cfg.folds, cfg.seed);
  });

  stage("train", [&] {
    for (auto kind : cfg.classifiers) {
      auto model = train_model(kind, sel.reduced, cfg.params, cfg.seed);
      save_model(model, out / ("model_" + std::string(short_name(kind)) + ".json"));
    }
    log_info("train: wrote " + std::to_string(cfg.classifiers.size()) + " model files");
    return 0;
  });

  stage("report", [&] {
    write_text(out / "report.csv", report_csv(report));
    write_text(out / "report.txt", report_table(report));
    return 0;
  });
  return report;
}

} // namespace sysdetect
