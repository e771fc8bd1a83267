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
// Command-line front end over the C API in libsysdetect.

#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sysdetect/sysdetect.h"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

// Thrown on any failed C call; carries the status as exit code.
struct Failure {
  int code;
  std::string message;
};

void check(sd_status s) {
  if (s != SD_OK) {
    throw Failure{static_cast<int>(s), sd_last_error()};
  }
}

template <typename T, void (*Free)(T *)> struct Deleter {
  void operator()(T *p) const { Free(p); }
};
using Config = std::unique_ptr<sd_config, Deleter<sd_config, sd_config_free>>;
using Dataset = std::unique_ptr<sd_dataset, Deleter<sd_dataset, sd_dataset_free>>;
using Selection = std::unique_ptr<sd_selection, Deleter<sd_selection, sd_selection_free>>;
using Model = std::unique_ptr<sd_model, Deleter<sd_model, sd_model_free>>;
using Report = std::unique_ptr<sd_report, Deleter<sd_report, sd_report_free>>;
using Profile = std::unique_ptr<sd_profile, Deleter<sd_profile, sd_profile_free>>;

std::string take(char *s) {
  std::string out = s ? s : "";
  sd_string_free(s);
  return out;
}

void write_or_print(const std::string &text, const std::string &path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) {
    throw Failure{kData, "cannot write '" + path + "'"};
  }
}

Dataset load_dataset(const std::string &path) {
  sd_dataset *ds = nullptr;
  check(sd_dataset_load_csv(path.c_str(), &ds));
  return Dataset(ds);
}

struct GlobalOptions {
  std::string config_path;
  std::optional<std::string> seed;
  std::optional<std::string> k;
  std::optional<std::string> classifier;
  std::optional<std::string> folds;
  std::vector<std::string> settings; // key=value
  bool quiet = false;
};

// defaults < config file < environment < flags
Config make_config(const GlobalOptions &g,
                   const std::vector<std::pair<std::string, std::string>> &extra) {
  sd_config *raw = nullptr;
  check(sd_config_new(&raw));
  Config cfg(raw);
  if (!g.config_path.empty()) {
    check(sd_config_load_file(cfg.get(), g.config_path.c_str()));
  }
  check(sd_config_apply_env(cfg.get()));
  auto set = [&](const char *key, const std::optional<std::string> &v) {
    if (v) {
      check(sd_config_set(cfg.get(), key, v->c_str()));
    }
  };
  for (const auto &kv : g.settings) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw Failure{kUsage, "--set expects key=value, got '" + kv + "'"};
    }
    check(sd_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
  }
  set("seed", g.seed);
  set("k", g.k);
  set("classifier", g.classifier);
  set("folds", g.folds);
  for (const auto &[key, value] : extra) {
    if (!value.empty()) {
      check(sd_config_set(cfg.get(), key.c_str(), value.c_str()));
    }
  }
  return cfg;
}

std::string config_value(const Config &cfg, const char *key) {
  char *v = nullptr;
  check(sd_config_get(cfg.get(), key, &v));
  return take(v);
}

sd_classifier classifier_id(const std::string &name) {
  if (name == "nb") {
    return SD_CLASSIFIER_NB;
  }
  if (name == "rf") {
    return SD_CLASSIFIER_RF;
  }
  if (name == "sgd") {
    return SD_CLASSIFIER_SGD;
  }
  throw Failure{kUsage, "unknown classifier '" + name + "'"};
}

std::vector<std::string> split_commas(const std::string &s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto comma = s.find(',', start);
    out.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) {
      return out;
    }
    start = comma + 1;
  }
}

void log_to_stderr(const char *message, void *) { std::fprintf(stderr, "[sysdetect] %s\n", message); }

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Syscall-trace malware detection: parse strace logs, build presence datasets, "
               "select features by chi-square and evaluate NB / RF / SGD classifiers."};
  app.require_subcommand(1);
  app.set_version_flag("--version", sd_version());

  GlobalOptions g;
  auto add_globals = [&](CLI::App *cmd) {
    cmd->add_option("--config", g.config_path, "Flat key = value configuration file");
    cmd->add_option("--seed", g.seed, "Random seed");
    cmd->add_option("--k", g.k, "Number of syscall features to keep (default 18)");
    cmd->add_option("--classifier", g.classifier, "nb, rf, sgd or all (default all)");
    cmd->add_option("--folds", g.folds, "Cross-validation folds (default 10)");
    cmd->add_option("--set", g.settings, "Override any configuration key: key=value");
    cmd->add_flag("-q,--quiet", g.quiet, "Suppress progress messages");
  };
  add_globals(&app);
  app.fallthrough();

  // parse
  auto *parse = app.add_subcommand("parse", "Summarise one strace log as syscall,count CSV");
  std::string parse_file, parse_app;
  parse->add_option("trace", parse_file, "strace output file")->required();
  parse->add_option("--app-id", parse_app, "App id (default: file stem)");

  // collect
  auto *collect = app.add_subcommand("collect", "Run the tracer command for one app");
  std::string collect_app, collect_traces, collect_duration, collect_template;
  collect->add_option("--app", collect_app, "App id / package name")->required();
  collect->add_option("--traces", collect_traces, "Output directory for <app>.strace");
  collect->add_option("--duration", collect_duration, "Seconds to trace (default 300)");
  collect->add_option("--command-template", collect_template,
                      "Tracer command; {app_id} and {duration} are substituted");

  // build-dataset
  auto *build = app.add_subcommand("build-dataset", "Build the presence dataset from traces");
  std::string build_traces, build_labels, build_vocab, build_out, build_vocab_out;
  build->add_option("--traces", build_traces, "Directory of <app_id>.strace files");
  build->add_option("--labels", build_labels, "CSV app_id,label,detection_count");
  build->add_option("--vocabulary", build_vocab, "Vocabulary file (default: built from traces)");
  build->add_option("-o,--out", build_out, "Dataset CSV")->required();
  build->add_option("--write-vocabulary", build_vocab_out, "Also write the vocabulary used");

  // select-features
  auto *select = app.add_subcommand("select-features", "Rank features by chi-square, keep top k");
  std::string select_ds, select_out, select_scores;
  select->add_option("--dataset", select_ds, "Dataset CSV")->required();
  select->add_option("-o,--out", select_out, "Reduced dataset CSV");
  select->add_option("--scores", select_scores, "Score report CSV (default: stdout)");

  // train
  auto *train = app.add_subcommand("train", "Train classifiers on a dataset");
  std::string train_ds, train_out;
  train->add_option("--dataset", train_ds, "Dataset CSV")->required();
  train->add_option("-o,--out", train_out,
                    "Model file, or directory of model_<kind>.json when several classifiers")
      ->required();

  // evaluate
  auto *evaluate = app.add_subcommand("evaluate", "Stratified k-fold comparison report");
  std::string eval_ds, eval_out;
  evaluate->add_option("--dataset", eval_ds, "Dataset CSV")->required();
  evaluate->add_option("-o,--out", eval_out, "Report CSV (table goes to stdout)");

  // predict
  auto *predict = app.add_subcommand("predict", "Classify apps with a trained model");
  std::string predict_model, predict_ds, predict_labels, predict_out;
  std::vector<std::string> predict_traces;
  predict->add_option("--model", predict_model, "Model file")->required();
  predict->add_option("--dataset", predict_ds, "Dataset CSV to classify");
  predict->add_option("--labels", predict_labels, "Labels CSV supplying detection counts");
  predict->add_option("traces", predict_traces, "strace files to classify");
  predict->add_option("-o,--out", predict_out, "Predictions CSV (default: stdout)");

  // export-arff
  auto *arff = app.add_subcommand("export-arff", "Write a dataset as Weka ARFF");
  std::string arff_ds, arff_out;
  arff->add_option("--dataset", arff_ds, "Dataset CSV")->required();
  arff->add_option("-o,--out", arff_out, "ARFF file")->required();

  // run
  auto *run = app.add_subcommand("run", "Full pipeline: traces to comparison report");
  std::string run_traces, run_labels, run_vocab, run_out;
  run->add_option("--traces", run_traces, "Directory of <app_id>.strace files");
  run->add_option("--labels", run_labels, "CSV app_id,label,detection_count");
  run->add_option("--vocabulary", run_vocab, "Vocabulary file (default: built from traces)");
  run->add_option("-o,--out", run_out, "Output directory");

  // synth
  auto *synth = app.add_subcommand("synth", "Generate the synthetic 66-app strace corpus");
  std::string synth_out;
  synth->add_option("-o,--out", synth_out, "Output directory")->required();

  for (auto *cmd : {parse, collect, build, select, train, evaluate, predict, arff, run, synth}) {
    add_globals(cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsage;
  }

  if (!g.quiet) {
    sd_set_log_callback(log_to_stderr, nullptr);
  }

  try {
    if (parse->parsed()) {
      sd_profile *raw = nullptr;
      check(sd_profile_parse_file(parse_file.c_str(), parse_app.empty() ? nullptr : parse_app.c_str(),
                                  &raw));
      Profile p(raw);
      std::cout << "syscall,count\n";
      for (std::size_t i = 0; i < sd_profile_syscall_count(p.get()); ++i) {
        const char *name = nullptr;
        uint64_t count = 0;
        check(sd_profile_syscall_at(p.get(), i, &name, &count));
        std::cout << name << ',' << count << '\n';
      }
      std::cerr << sd_profile_app_id(p.get()) << ": " << sd_profile_total_events(p.get())
                << " events, " << sd_profile_syscall_count(p.get()) << " distinct syscalls, "
                << sd_profile_unparseable_lines(p.get()) << " unparseable lines\n";
    } else if (collect->parsed()) {
      auto cfg = make_config(g, {{"traces_dir", collect_traces},
                                 {"collect.duration", collect_duration},
                                 {"collect.command", collect_template}});
      char *path = nullptr;
      check(sd_collect_trace(cfg.get(), collect_app.c_str(), &path));
      std::cout << take(path) << '\n';
    } else if (build->parsed()) {
      auto cfg = make_config(g, {{"traces_dir", build_traces},
                                 {"labels", build_labels},
                                 {"vocabulary", build_vocab}});
      sd_dataset *raw = nullptr;
      check(sd_dataset_build(cfg.get(), &raw));
      Dataset ds(raw);
      check(sd_dataset_save_csv(ds.get(), build_out.c_str()));
      if (!build_vocab_out.empty()) {
        check(sd_dataset_save_vocabulary(ds.get(), build_vocab_out.c_str()));
      }
    } else if (select->parsed()) {
      auto cfg = make_config(g, {});
      auto ds = load_dataset(select_ds);
      sd_selection *raw = nullptr;
      check(sd_select_features(ds.get(), std::stoul(config_value(cfg, "k")), &raw));
      Selection sel(raw);
      char *csv = nullptr;
      check(sd_selection_scores_csv(sel.get(), &csv));
      write_or_print(take(csv), select_scores);
      if (!select_out.empty()) {
        sd_dataset *reduced = nullptr;
        check(sd_selection_reduced(sel.get(), &reduced));
        Dataset r(reduced);
        check(sd_dataset_save_csv(r.get(), select_out.c_str()));
      }
    } else if (train->parsed()) {
      auto cfg = make_config(g, {});
      auto ds = load_dataset(train_ds);
      const auto kinds = split_commas(config_value(cfg, "classifier"));
      for (const auto &kind : kinds) {
        sd_model *raw = nullptr;
        check(sd_model_train(ds.get(), classifier_id(kind), cfg.get(), &raw));
        Model m(raw);
        std::string path = train_out;
        if (kinds.size() > 1) {
          std::error_code ec;
          std::filesystem::create_directories(train_out, ec);
          path = (std::filesystem::path(train_out) / ("model_" + kind + ".json")).string();
        }
        check(sd_model_save(m.get(), path.c_str()));
        std::cerr << "wrote " << path << '\n';
      }
    } else if (evaluate->parsed()) {
      auto cfg = make_config(g, {});
      auto ds = load_dataset(eval_ds);
      sd_report *raw = nullptr;
      check(sd_evaluate(ds.get(), cfg.get(), &raw));
      Report r(raw);
      char *table = nullptr;
      check(sd_report_table(r.get(), &table));
      std::cout << take(table);
      if (!eval_out.empty()) {
        char *csv = nullptr;
        check(sd_report_csv(r.get(), &csv));
        write_or_print(take(csv), eval_out);
      }
    } else if (predict->parsed()) {
      if (predict_ds.empty() == predict_traces.empty()) {
        throw Failure{kUsage, "predict needs either --dataset or trace files"};
      }
      sd_model *raw = nullptr;
      check(sd_model_load(predict_model.c_str(), &raw));
      Model m(raw);
      char *csv = nullptr;
      if (!predict_ds.empty()) {
        auto ds = load_dataset(predict_ds);
        check(sd_model_predict_dataset(m.get(), ds.get(), &csv));
      } else {
        std::vector<const char *> paths;
        for (const auto &p : predict_traces) {
          paths.push_back(p.c_str());
        }
        check(sd_model_predict_traces(m.get(), paths.data(), paths.size(),
                                      predict_labels.empty() ? nullptr : predict_labels.c_str(),
                                      &csv));
      }
      write_or_print(take(csv), predict_out);
    } else if (arff->parsed()) {
      auto ds = load_dataset(arff_ds);
      check(sd_dataset_export_arff(ds.get(), arff_out.c_str()));
    } else if (run->parsed()) {
      auto cfg = make_config(g, {{"traces_dir", run_traces},
                                 {"labels", run_labels},
                                 {"vocabulary", run_vocab},
                                 {"output_dir", run_out}});
      sd_report *raw = nullptr;
      check(sd_run_pipeline(cfg.get(), &raw));
      Report r(raw);
      char *table = nullptr;
      check(sd_report_table(r.get(), &table));
      std::cout << take(table);
    } else if (synth->parsed()) {
      auto cfg = make_config(g, {});
      char *planted = nullptr;
      check(sd_generate_synthetic_corpus(synth_out.c_str(),
                                         std::stoull(config_value(cfg, "seed")), &planted));
      std::cout << "planted syscalls:\n" << take(planted);
    }
  } catch (const Failure &f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}
