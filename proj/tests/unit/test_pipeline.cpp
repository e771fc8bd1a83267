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

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sysdetect/dataset_io.hpp"
#include "sysdetect/error.hpp"
#include "sysdetect/pipeline.hpp"
#include "sysdetect/synthetic.hpp"
#include "temp_dir.hpp"

using namespace sysdetect;
using namespace testing;

namespace {

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

PipelineConfig config_for(const SyntheticCorpus &corpus, const std::filesystem::path &out) {
  PipelineConfig cfg;
  cfg.traces_dir = corpus.traces_dir;
  cfg.labels_path = corpus.labels_path;
  cfg.output_dir = out;
  return cfg;
}

void write_file(const std::filesystem::path &p, const std::string &text) {
  std::ofstream(p, std::ios::binary) << text;
}

} // namespace

TEST_CASE("config values parse and print") {
  PipelineConfig cfg;
  CHECK(get_config_value(cfg, "k") == "18");
  CHECK(get_config_value(cfg, "seed") == "1");
  CHECK(get_config_value(cfg, "folds") == "10");
  CHECK(get_config_value(cfg, "classifier") == "nb,rf,sgd");
  CHECK(get_config_value(cfg, "collect.duration") == "300");
  set_config_value(cfg, "classifier", "sgd, nb");
  CHECK(cfg.classifiers == std::vector<ClassifierKind>{ClassifierKind::Sgd, ClassifierKind::NaiveBayes});
  set_config_value(cfg, "sgd.lambda", "0.5");
  CHECK(cfg.params.sgd.lambda == 0.5);
  set_config_value(cfg, "rf.trees", "7");
  CHECK(cfg.params.forest.tree_count == 7);
  CHECK_THROWS_AS(set_config_value(cfg, "k", "ten"), UsageError);
  CHECK_THROWS_AS(set_config_value(cfg, "k", "-1"), UsageError);
  CHECK_THROWS_AS(set_config_value(cfg, "colour", "blue"), UsageError);
  CHECK_THROWS_AS(set_config_value(cfg, "classifier", "svm"), UsageError);
  for (const auto &key : config_keys()) {
    CAPTURE(key);
    PipelineConfig copy = cfg;
    set_config_value(copy, key, get_config_value(cfg, key));
    CHECK(get_config_value(copy, key) == get_config_value(cfg, key));
  }
}

TEST_CASE("config precedence: defaults, file, environment") {
  TempDir dir;
  write_file(dir / "c.conf", "# comment\nk = 5\nseed=9\n\nfolds = 4\n");
  PipelineConfig cfg;
  load_config_file(cfg, dir / "c.conf");
  CHECK(cfg.k == 5);
  CHECK(cfg.seed == 9);
  ::setenv("SYSDETECT_SEED", "42", 1);
  ::setenv("SYSDETECT_RF_TREES", "11", 1);
  apply_environment(cfg);
  ::unsetenv("SYSDETECT_SEED");
  ::unsetenv("SYSDETECT_RF_TREES");
  CHECK(cfg.k == 5);
  CHECK(cfg.seed == 42);
  CHECK(cfg.folds == 4);
  CHECK(cfg.params.forest.tree_count == 11);
  CHECK(environment_name("nb.variance_floor") == "SYSDETECT_NB_VARIANCE_FLOOR");

  write_file(dir / "bad.conf", "k 5\n");
  try {
    load_config_file(cfg, dir / "bad.conf");
    FAIL("expected error");
  } catch (const UsageError &e) {
    CHECK(std::string(e.what()).find("bad.conf:1") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config_file(cfg, dir / "none.conf"), UsageError);
}

TEST_CASE("trace files are listed in sorted order") {
  TempDir dir;
  for (const char *n : {"b.strace", "a.strace", "notes.txt"}) {
    write_file(dir / n, "");
  }
  auto files = list_trace_files(dir.path());
  REQUIRE(files.size() == 2);
  CHECK(files[0].filename() == "a.strace");
  CHECK_THROWS_AS(list_trace_files(dir / "missing"), DataError);
}

TEST_CASE("full pipeline on the synthetic corpus") {
  TempDir dir;
  auto corpus = generate_synthetic_corpus(SyntheticSpec{}, dir / "corpus");
  auto cfg = config_for(corpus, dir / "out");
  auto report = run_pipeline(cfg);
  REQUIRE(report.rows.size() == 3);
  for (const char *f : {"vocabulary.txt", "dataset.csv", "scores.csv", "reduced.csv",
                        "reduced.arff", "report.csv", "report.txt", "model_nb.json",
                        "model_rf.json", "model_sgd.json"}) {
    CAPTURE(f);
    CHECK(std::filesystem::exists(dir / "out" / f));
  }
  auto reduced = load_dataset_csv(dir / "out" / "reduced.csv");
  CHECK(reduced.vocabulary.size() == 18);
  CHECK(reduced.size() == 66);
  CHECK(slurp(dir / "out" / "reduced.csv").rfind("app_id,label,det_count,", 0) == 0);
  CHECK(report_csv(report) == slurp(dir / "out" / "report.csv"));

  cfg.output_dir = dir / "again";
  run_pipeline(cfg);
  for (const char *f : {"report.csv", "report.txt", "reduced.csv", "reduced.arff", "scores.csv",
                        "model_nb.json", "model_rf.json", "model_sgd.json"}) {
    CAPTURE(f);
    CHECK(slurp(dir / "out" / f) == slurp(dir / "again" / f));
  }
}

TEST_CASE("pipeline errors name the stage and the path") {
  TempDir dir;
  auto corpus = generate_synthetic_corpus(SyntheticSpec{}, dir / "corpus");
  auto cfg = config_for(corpus, dir / "out");
  cfg.labels_path = dir / "absent-labels.csv";
  try {
    run_pipeline(cfg);
    FAIL("expected error");
  } catch (const DataError &e) {
    const std::string msg = e.what();
    CHECK(msg.find("stage 'labels'") != std::string::npos);
    CHECK(msg.find("absent-labels.csv") != std::string::npos);
  }

  cfg = config_for(corpus, dir / "out");
  cfg.k = 500;
  CHECK_THROWS_AS(run_pipeline(cfg), UsageError);

  cfg = config_for(corpus, dir / "out");
  cfg.traces_dir = dir / "no-traces";
  CHECK_THROWS_AS(run_pipeline(cfg), DataError);
}

TEST_CASE("loaded vocabulary keeps file order") {
  TempDir dir;
  auto corpus = generate_synthetic_corpus(SyntheticSpec{}, dir / "corpus");
  auto cfg = config_for(corpus, dir / "out");
  write_file(dir / "v.txt", "write\nread\n");
  cfg.vocabulary_path = dir / "v.txt";
  auto ds = build_dataset(cfg);
  CHECK(ds.vocabulary.names() == std::vector<std::string>{"write", "read"});
  CHECK(ds.size() == 66);
}

TEST_CASE("synthetic corpus shape") {
  TempDir dir;
  SyntheticSpec spec;
  auto corpus = generate_synthetic_corpus(spec, dir.path());
  CHECK(corpus.planted_names.size() == 6);
  CHECK(load_vocabulary(corpus.vocabulary_path).size() == 120);
  auto labels = load_labels(corpus.labels_path);
  CHECK(labels.size() == 66);
  std::size_t malicious = 0;
  for (const auto &[app, rec] : labels) {
    malicious += rec.label == Label::Malicious;
    CHECK(rec.detection_count <= 3);
  }
  CHECK(malicious == 33);
  CHECK(list_trace_files(corpus.traces_dir).size() == 66);
  CHECK(synthetic_name_pool_size() >= 120);

  TempDir other;
  auto again = generate_synthetic_corpus(spec, other.path());
  CHECK(again.planted_names == corpus.planted_names);
  CHECK(slurp(again.labels_path) == slurp(corpus.labels_path));
}
