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
// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sysdetect/dataset_io.hpp"
#include "sysdetect/evaluation.hpp"
#include "sysdetect/feature_selector.hpp"
#include "sysdetect/featurizer.hpp"
#include "sysdetect/model.hpp"
#include "sysdetect/pipeline.hpp"
#include "sysdetect/random.hpp"
#include "sysdetect/synthetic.hpp"
#include "sysdetect/sysdetect.h"
#include "sysdetect/trace_parser.hpp"

namespace fs = std::filesystem;
using namespace sysdetect;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string &why) {
    if (pass) {
      detail = why;
    }
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class ScratchDir {
public:
  explicit ScratchDir(const std::string &tag) {
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("sysdetect-acceptance-" + tag + "-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path &path() const { return path_; }

private:
  fs::path path_;
};

// Pearson statistic from observed and expected counts.
double chi_square_oracle(const ContingencyTable &t) {
  const double o[2][2] = {{double(t.a), double(t.b)}, {double(t.c), double(t.d)}};
  const double n = double(t.total());
  double sum = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double e = (o[i][0] + o[i][1]) * (o[0][j] + o[1][j]) / n;
      if (e == 0) {
        return 0;
      }
      sum += (o[i][j] - e) * (o[i][j] - e) / e;
    }
  }
  return sum;
}

Outcome ac1() {
  Outcome out;
  const auto start = Clock::now();
  Rng rng(101);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    ContingencyTable t;
    do {
      t = {rng.index(201), rng.index(201), rng.index(201), rng.index(201)};
    } while (t.total() == 0);
    const double diff = std::abs(chi_square(t) - chi_square_oracle(t));
    worst = std::max(worst, diff);
    if (diff > 1e-9) {
      out.fail("table mismatch by " + fmt("%g", diff));
    }
  }
  for (ContingencyTable t : {ContingencyTable{0, 0, 3, 2}, ContingencyTable{4, 6, 0, 0},
                             ContingencyTable{5, 0, 7, 0}, ContingencyTable{0, 9, 0, 1},
                             ContingencyTable{200, 0, 0, 0}}) {
    if (chi_square(t) != 0.0) {
      out.fail("zero-marginal table did not score 0");
    }
  }
  const double secs = seconds_since(start);
  if (secs >= 1.0) {
    out.fail("took " + fmt("%.3f", secs) + " s");
  }
  if (out.pass) {
    out.detail = "1000 tables, max |diff| " + fmt("%.2e", worst) + ", " + fmt("%.3f", secs) + " s";
  }
  return out;
}

Outcome ac2() {
  Outcome out;
  const auto start = Clock::now();
  Rng rng(202);
  std::size_t with_f = 0;
  for (int i = 0; i < 10000; ++i) {
    ConfusionCounts c;
    do {
      c = {rng.index(100), rng.index(100), rng.index(100), rng.index(100)};
    } while (c.total() == 0);
    const Metrics m = compute_metrics(c);
    if (m.accuracy != double(c.tp + c.tn) / double(c.total())) {
      out.fail("accuracy decomposition");
    }
    if (m.precision != m.ppv) {
      out.fail("precision differs from ppv");
    }
    if (m.f_measure) {
      ++with_f;
      const double p = *m.precision, r = *m.recall, f = *m.f_measure;
      if (std::abs(f - 2 * p * r / (p + r)) > 1e-12) {
        out.fail("f-measure identity");
      }
      if (f < std::min(p, r) || f > std::max(p, r)) {
        out.fail("f-measure outside [min(p,r), max(p,r)]");
      }
    }
  }
  const double secs = seconds_since(start);
  if (secs >= 1.0) {
    out.fail("took " + fmt("%.3f", secs) + " s");
  }
  if (out.pass) {
    out.detail = "10000 count sets (" + std::to_string(with_f) + " with defined F), " +
                 fmt("%.3f", secs) + " s";
  }
  return out;
}

Outcome ac3() {
  Outcome out;
  const std::string dir = SYSDETECT_FIXTURE_DIR;
  std::ifstream lines_in(dir + "/parser_corpus.strace", std::ios::binary);
  std::ifstream expect_in(dir + "/parser_corpus.expected", std::ios::binary);
  if (!lines_in || !expect_in) {
    out.fail("fixture files missing");
    return out;
  }
  std::vector<std::string> lines, expected;
  for (std::string l; std::getline(lines_in, l);) {
    lines.push_back(l);
  }
  for (std::string l; std::getline(expect_in, l);) {
    if (!l.empty() && l.front() != '#') {
      expected.push_back(l);
    }
  }
  if (lines.size() < 200 || lines.size() != expected.size()) {
    out.fail("corpus has " + std::to_string(lines.size()) + " lines, annotations " +
             std::to_string(expected.size()));
    return out;
  }

  std::set<EventKind> kinds_seen;
  // Annotated multiset: unfinished lines count, resumed lines count only
  // when nothing of that name is pending.
  std::map<std::string, std::uint64_t> oracle, pending;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto tab = expected[i].find('\t');
    const std::string kind = expected[i].substr(0, tab);
    const std::string name = tab == std::string::npos ? "" : expected[i].substr(tab + 1);
    const TraceEvent ev = parse_line(lines[i], i + 1);
    kinds_seen.insert(ev.kind);
    if (to_string(ev.kind) != kind || ev.name != name) {
      out.fail("line " + std::to_string(i + 1) + ": got " + std::string(to_string(ev.kind)) +
               " '" + ev.name + "', annotated " + kind + " '" + name + "'");
    }
    if (kind == "syscall") {
      ++oracle[name];
    } else if (kind == "unfinished") {
      ++oracle[name];
      ++pending[name];
    } else if (kind == "resumed") {
      if (pending[name] > 0) {
        --pending[name];
      } else {
        ++oracle[name];
      }
    }
  }
  std::string text;
  for (const auto &l : lines) {
    text += l + "\n";
  }
  const TraceProfile profile = parse_trace(text, "corpus");
  if (profile.name_counts != oracle) {
    out.fail("name multiset differs from annotations");
  }
  if (kinds_seen.size() != 6) {
    out.fail("corpus does not exercise every event kind");
  }

  Rng rng(303);
  std::size_t crashes = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string line(rng.index(200), '\0');
    for (auto &c : line) {
      c = static_cast<char>(rng.index(256));
    }
    try {
      (void)parse_line(line, 1);
    } catch (...) {
      ++crashes;
    }
  }
  if (crashes) {
    out.fail(std::to_string(crashes) + " random lines threw");
  }
  if (out.pass) {
    out.detail = std::to_string(lines.size()) + " annotated lines, " +
                 std::to_string(profile.name_counts.size()) +
                 " distinct names, 10000 random lines";
  }
  return out;
}

Outcome ac4() {
  Outcome out;
  Rng rng(404);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t pool_size = 5 + rng.index(60);
    std::vector<std::string> pool;
    for (std::size_t i = 0; i < pool_size; ++i) {
      pool.push_back("sc_" + std::to_string(rng.index(1000)) + "_" + std::to_string(i));
    }
    rng.shuffle(std::span<std::string>(pool));
    const std::size_t vsize = 1 + rng.index(pool_size);
    std::vector<std::string> vnames(pool.begin(), pool.begin() + vsize);
    const auto vocab = FeatureVocabulary::from_names(vnames);
    std::set<std::string> app;
    for (const auto &n : pool) {
      if (rng.bernoulli(0.4)) {
        app.insert(n);
      }
    }
    const auto r = vectorize(app, vocab);
    bool ok = r.bits.size() == vsize;
    for (std::size_t i = 0; ok && i < vsize; ++i) {
      const bool member = std::find(app.begin(), app.end(), vnames[i]) != app.end();
      ok = r.bits[i] == (member ? 1 : 0);
    }
    std::set<std::string> leftover;
    for (const auto &n : app) {
      if (std::find(vnames.begin(), vnames.end(), n) == vnames.end()) {
        leftover.insert(n);
      }
    }
    if (!ok || r.leftover != leftover) {
      out.fail("pair " + std::to_string(trial) + " disagrees with naive membership");
    }
  }
  if (out.pass) {
    out.detail = "500 random vocabulary/set pairs";
  }
  return out;
}

// Relative gap below which two direct posteriors are a tie.
constexpr double kOracleTie = 1e-9;

Label direct_decision(double pm, double pb) {
  return pm >= pb - kOracleTie * std::max(pm, pb) ? Label::Malicious : Label::Benign;
}

double direct_posterior(const NBModel &m, int c, std::span<const double> x) {
  double p = m.priors[c];
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double var = m.variances[c][j];
    const double dev = x[j] - m.means[c][j];
    p *= std::exp(-dev * dev / (2 * var)) / std::sqrt(2 * std::numbers::pi * var);
  }
  return p;
}

Outcome ac5() {
  Outcome out;
  Rng rng(505);
  std::size_t vectors = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 1 + trial % 3;
    TrainingSet ts(d);
    for (Label y : {Label::Malicious, Label::Benign}) {
      const std::size_t n = 2 + rng.index(20);
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x(d);
        for (auto &v : x) {
          // The first two rows of each class fix both values so that no
          // column is constant and the direct product stays finite.
          v = i < 2 ? double(i) : double(rng.index(2));
        }
        ts.add(x, y);
      }
    }
    const NBModel model = train_naive_bayes(ts);
    for (std::size_t mask = 0; mask < (1u << d); ++mask) {
      std::vector<double> x(d);
      for (std::size_t j = 0; j < d; ++j) {
        x[j] = double((mask >> j) & 1);
      }
      const double pm = direct_posterior(model, 0, x);
      const double pb = direct_posterior(model, 1, x);
      const Label expect = direct_decision(pm, pb);
      if (predict_naive_bayes(model, x).label != expect) {
        out.fail("model " + std::to_string(trial) + " input " + std::to_string(mask));
      }
      ++vectors;
    }
  }
  if (out.pass) {
    out.detail = "300 models, " + std::to_string(vectors) + " exhaustive inputs";
  }
  return out;
}

Outcome ac6() {
  Outcome out;
  ScratchDir dir("synthetic");
  const auto start = Clock::now();
  const SyntheticSpec spec;
  const auto corpus = generate_synthetic_corpus(spec, dir.path() / "corpus");
  PipelineConfig cfg;
  cfg.traces_dir = corpus.traces_dir;
  cfg.labels_path = corpus.labels_path;
  cfg.vocabulary_path = corpus.vocabulary_path;
  cfg.output_dir = dir.path() / "out";
  const ComparisonReport report = run_pipeline(cfg);
  const double secs = seconds_since(start);

  const auto vocab_size = load_vocabulary(cfg.output_dir / "vocabulary.txt").size();
  if (vocab_size != spec.vocabulary_size) {
    out.fail("vocabulary has " + std::to_string(vocab_size) + " names");
  }
  const auto reduced = load_dataset_csv(cfg.output_dir / "reduced.csv");
  const auto &kept = reduced.vocabulary.names();
  if (kept.size() != 18) {
    out.fail("reduced dataset has " + std::to_string(kept.size()) + " syscall columns");
  }
  std::size_t found = 0;
  for (const auto &name : corpus.planted_names) {
    found += std::find(kept.begin(), kept.end(), name) != kept.end();
  }
  if (found != corpus.planted_names.size() || found != 6) {
    out.fail(std::to_string(found) + " of 6 planted syscalls in the top 18");
  }
  std::string accs;
  for (const auto &row : report.rows) {
    const double acc = row.result.metrics.accuracy;
    accs += std::string(accs.empty() ? "" : ", ") + std::string(display_name(row.kind)) + " " +
            fmt("%.4f", acc);
    if (acc < 0.90) {
      out.fail(std::string(display_name(row.kind)) + " accuracy " + fmt("%.4f", acc));
    }
  }
  if (report.rows.size() != 3 || report.folds != 10) {
    out.fail("report does not cover three classifiers over 10 folds");
  }
  if (secs >= 10.0) {
    out.fail("took " + fmt("%.2f", secs) + " s");
  }
  if (out.pass) {
    out.detail = accs + "; 6/6 planted in top 18; " + fmt("%.2f", secs) + " s";
  }
  return out;
}

Outcome ac7() {
  Outcome out;
  ScratchDir dir("determinism");
  const std::string root = (dir.path() / "corpus").string();
  if (sd_generate_synthetic_corpus(root.c_str(), 77, nullptr) != SD_OK) {
    out.fail(sd_last_error());
    return out;
  }
  for (const char *run : {"run1", "run2"}) {
    sd_config *cfg = nullptr;
    sd_report *report = nullptr;
    bool ok = sd_config_new(&cfg) == SD_OK &&
              sd_config_set(cfg, "traces_dir", (root + "/traces").c_str()) == SD_OK &&
              sd_config_set(cfg, "labels", (root + "/labels.csv").c_str()) == SD_OK &&
              sd_config_set(cfg, "output_dir", (dir.path() / run).string().c_str()) == SD_OK &&
              sd_config_set(cfg, "seed", "12345") == SD_OK &&
              sd_run_pipeline(cfg, &report) == SD_OK;
    if (!ok) {
      out.fail(sd_last_error());
    }
    sd_report_free(report);
    sd_config_free(cfg);
  }
  if (!out.pass) {
    return out;
  }
  std::size_t compared = 0;
  for (const char *f : {"report.csv", "report.txt", "reduced.csv", "reduced.arff",
                        "model_nb.json", "model_rf.json", "model_sgd.json"}) {
    const std::string a = slurp(dir.path() / "run1" / f);
    const std::string b = slurp(dir.path() / "run2" / f);
    if (a.empty() || a != b) {
      out.fail(std::string(f) + " differs between runs");
    }
    ++compared;
  }
  if (out.pass) {
    out.detail = std::to_string(compared) + " artifacts byte-identical";
  }
  return out;
}

Outcome ac8() {
  Outcome out;
  Rng rng(808);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + rng.index(30);
    std::vector<std::string> names;
    for (std::size_t j = 0; j < d; ++j) {
      names.push_back(j % 5 == 4 ? "name, \"quoted\" " + std::to_string(j)
                                 : "sys" + std::to_string(j));
    }
    Dataset ds;
    ds.vocabulary = FeatureVocabulary::from_names(names);
    const std::size_t n = rng.index(80);
    for (std::size_t i = 0; i < n; ++i) {
      FeatureVector row;
      row.app_id = "com.app" + std::to_string(i) + (i % 3 ? "" : ",x");
      row.bits.resize(d);
      for (auto &b : row.bits) {
        b = rng.bernoulli(0.5);
      }
      row.detection_count = rng.index(1000);
      row.label = rng.bernoulli(0.5) ? Label::Malicious : Label::Benign;
      ds.rows.push_back(row);
    }
    std::stringstream buf;
    write_dataset_csv(buf, ds);
    if (!(read_dataset_csv(buf) == ds)) {
      out.fail("dataset CSV round trip changed dataset " + std::to_string(trial));
    }
  }

  ScratchDir dir("roundtrip");
  const auto corpus = generate_synthetic_corpus(SyntheticSpec{}, dir.path());
  PipelineConfig cfg;
  cfg.traces_dir = corpus.traces_dir;
  cfg.labels_path = corpus.labels_path;
  const Dataset reduced = select_top_k(build_dataset(cfg), 18).reduced;
  std::size_t agreed = 0;
  for (auto kind : kAllClassifiers) {
    const Model model = train_model(kind, reduced, ClassifierParams{}, 5);
    const Model back = deserialize_model(serialize_model(model));
    for (int i = 0; i < 1000; ++i) {
      std::vector<double> x(model.feature_names.size());
      for (std::size_t j = 0; j + 1 < x.size(); ++j) {
        x[j] = double(rng.index(2));
      }
      x.back() = double(rng.index(6));
      const auto p = predict(model, x);
      const auto q = predict(back, x);
      if (p.label != q.label || std::memcmp(&p.score, &q.score, sizeof p.score) != 0) {
        out.fail(std::string(display_name(kind)) + " disagrees after deserialization");
      } else {
        ++agreed;
      }
    }
  }
  if (out.pass) {
    out.detail = "50 CSV round trips; " + std::to_string(agreed) +
                 " predictions agree across 3 models";
  }
  return out;
}

} // namespace

int main() {
  const std::pair<const char *, std::function<Outcome()>> criteria[] = {
      {"AC1 chi-square oracle equivalence", ac1},
      {"AC2 metric identities", ac2},
      {"AC3 parser fixture corpus", ac3},
      {"AC4 presence-bit oracle", ac4},
      {"AC5 naive Bayes brute force", ac5},
      {"AC6 synthetic corpus accuracy", ac6},
      {"AC7 end-to-end determinism", ac7},
      {"AC8 dataset and model round trips", ac8},
  };
  int failures = 0;
  for (const auto &[name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception &e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("%-38s %s  %s\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    failures += !o.pass;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
