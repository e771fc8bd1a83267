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
#include "sysdetect/sysdetect.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>

#include "sysdetect/collector.hpp"
#include "sysdetect/dataset_io.hpp"
#include "sysdetect/error.hpp"
#include "sysdetect/evaluation.hpp"
#include "sysdetect/feature_selector.hpp"
#include "sysdetect/log.hpp"
#include "sysdetect/model.hpp"
#include "sysdetect/pipeline.hpp"
#include "sysdetect/synthetic.hpp"
#include "sysdetect/trace_parser.hpp"

using namespace sysdetect;

struct sd_config {
  PipelineConfig cfg;
};

struct sd_profile {
  TraceProfile profile;
  std::vector<std::pair<std::string, std::uint64_t>> entries;
};

struct sd_dataset {
  Dataset ds;
};

struct sd_selection {
  FeatureVocabulary vocabulary; // of the scored dataset
  Selection selection;
};

struct sd_model {
  Model model;
};

struct sd_report {
  ComparisonReport report;
};

namespace {

thread_local std::string g_last_error;

sd_status fail(sd_status status, const std::string &message) {
  g_last_error = message;
  return status;
}

template <typename F> sd_status guarded(F &&f) {
  try {
    f();
    g_last_error.clear();
    return SD_OK;
  } catch (const Error &e) {
    return fail(static_cast<sd_status>(e.kind()), e.what());
  } catch (const std::bad_alloc &) {
    return fail(SD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(SD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SD_ERR_INTERNAL, "unknown error");
  }
}

void require(const void *p, const char *what) {
  if (p == nullptr) {
    throw UsageError(std::string(what) + " must not be NULL");
  }
}

char *dup_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out == nullptr) {
    throw std::bad_alloc();
  }
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

ClassifierKind to_kind(sd_classifier c) {
  switch (c) {
  case SD_CLASSIFIER_NB:
    return ClassifierKind::NaiveBayes;
  case SD_CLASSIFIER_RF:
    return ClassifierKind::RandomForest;
  case SD_CLASSIFIER_SGD:
    return ClassifierKind::Sgd;
  }
  throw UsageError("unknown classifier id " + std::to_string(static_cast<int>(c)));
}

sd_classifier from_kind(ClassifierKind k) {
  switch (k) {
  case ClassifierKind::NaiveBayes:
    return SD_CLASSIFIER_NB;
  case ClassifierKind::RandomForest:
    return SD_CLASSIFIER_RF;
  case ClassifierKind::Sgd:
    return SD_CLASSIFIER_SGD;
  }
  return SD_CLASSIFIER_NB;
}

std::string format_score(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

sd_profile *wrap_profile(TraceProfile p) {
  auto *h = new sd_profile{std::move(p), {}};
  for (const auto &[name, count] : h->profile.name_counts) {
    h->entries.emplace_back(name, count);
  }
  return h;
}

} // namespace

extern "C" {

const char *sd_version(void) { return "1.0.0"; }

const char *sd_last_error(void) { return g_last_error.c_str(); }

void sd_string_free(char *s) { std::free(s); }

void sd_set_log_callback(sd_log_fn fn, void *user) {
  if (fn == nullptr) {
    set_log_sink({});
  } else {
    set_log_sink([fn, user](const std::string &msg) { fn(msg.c_str(), user); });
  }
}

sd_status sd_config_new(sd_config **out) {
  return guarded([&] {
    require(out, "out");
    *out = new sd_config{};
  });
}

void sd_config_free(sd_config *cfg) { delete cfg; }

sd_status sd_config_set(sd_config *cfg, const char *key, const char *value) {
  return guarded([&] {
    require(cfg, "config");
    require(key, "key");
    require(value, "value");
    set_config_value(cfg->cfg, key, value);
  });
}

sd_status sd_config_get(const sd_config *cfg, const char *key, char **out) {
  return guarded([&] {
    require(cfg, "config");
    require(key, "key");
    require(out, "out");
    *out = dup_string(get_config_value(cfg->cfg, key));
  });
}

sd_status sd_config_load_file(sd_config *cfg, const char *path) {
  return guarded([&] {
    require(cfg, "config");
    require(path, "path");
    load_config_file(cfg->cfg, path);
  });
}

sd_status sd_config_apply_env(sd_config *cfg) {
  return guarded([&] {
    require(cfg, "config");
    apply_environment(cfg->cfg);
  });
}

sd_status sd_profile_parse_file(const char *path, const char *app_id, sd_profile **out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    const std::filesystem::path p(path);
    *out = wrap_profile(parse_trace_file(p, app_id ? std::string(app_id) : p.stem().string()));
  });
}

sd_status sd_profile_parse_text(const char *text, size_t len, const char *app_id,
                                sd_profile **out) {
  return guarded([&] {
    require(text, "text");
    require(app_id, "app_id");
    require(out, "out");
    *out = wrap_profile(parse_trace(std::string_view(text, len), app_id));
  });
}

void sd_profile_free(sd_profile *p) { delete p; }

const char *sd_profile_app_id(const sd_profile *p) { return p ? p->profile.app_id.c_str() : ""; }

uint64_t sd_profile_total_events(const sd_profile *p) { return p ? p->profile.total_events : 0; }

uint64_t sd_profile_unparseable_lines(const sd_profile *p) {
  return p ? p->profile.unparseable_lines : 0;
}

size_t sd_profile_syscall_count(const sd_profile *p) { return p ? p->entries.size() : 0; }

sd_status sd_profile_syscall_at(const sd_profile *p, size_t index, const char **name,
                                uint64_t *count) {
  return guarded([&] {
    require(p, "profile");
    if (index >= p->entries.size()) {
      throw UsageError("syscall index out of range");
    }
    if (name) {
      *name = p->entries[index].first.c_str();
    }
    if (count) {
      *count = p->entries[index].second;
    }
  });
}

sd_status sd_collect_trace(const sd_config *cfg, const char *app_id, char **out_path) {
  return guarded([&] {
    require(cfg, "config");
    require(app_id, "app_id");
    CollectionSpec spec;
    spec.app_id = app_id;
    spec.duration = cfg->cfg.collect_duration;
    spec.command_template = cfg->cfg.command_template;
    SubprocessRunner runner;
    collect_trace(spec, runner, cfg->cfg.traces_dir);
    if (out_path) {
      *out_path = dup_string((cfg->cfg.traces_dir / (spec.app_id + ".strace")).string());
    }
  });
}

sd_status sd_dataset_build(const sd_config *cfg, sd_dataset **out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    *out = new sd_dataset{build_dataset(cfg->cfg)};
  });
}

sd_status sd_dataset_load_csv(const char *path, sd_dataset **out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new sd_dataset{load_dataset_csv(path)};
  });
}

sd_status sd_dataset_save_csv(const sd_dataset *ds, const char *path) {
  return guarded([&] {
    require(ds, "dataset");
    require(path, "path");
    save_dataset_csv(ds->ds, path);
  });
}

sd_status sd_dataset_export_arff(const sd_dataset *ds, const char *path) {
  return guarded([&] {
    require(ds, "dataset");
    require(path, "path");
    save_arff(ds->ds, path);
  });
}

sd_status sd_dataset_save_vocabulary(const sd_dataset *ds, const char *path) {
  return guarded([&] {
    require(ds, "dataset");
    require(path, "path");
    save_vocabulary(ds->ds.vocabulary, path);
  });
}

void sd_dataset_free(sd_dataset *ds) { delete ds; }

size_t sd_dataset_row_count(const sd_dataset *ds) { return ds ? ds->ds.size() : 0; }

size_t sd_dataset_feature_count(const sd_dataset *ds) {
  return ds ? ds->ds.vocabulary.size() : 0;
}

size_t sd_dataset_class_count(const sd_dataset *ds, sd_label label) {
  if (!ds) {
    return 0;
  }
  return ds->ds.count(label == SD_LABEL_MALICIOUS ? Label::Malicious : Label::Benign);
}

sd_status sd_select_features(const sd_dataset *ds, size_t k, sd_selection **out) {
  return guarded([&] {
    require(ds, "dataset");
    require(out, "out");
    *out = new sd_selection{ds->ds.vocabulary, select_top_k(ds->ds, k)};
  });
}

void sd_selection_free(sd_selection *sel) { delete sel; }

sd_status sd_selection_scores_csv(const sd_selection *sel, char **out) {
  return guarded([&] {
    require(sel, "selection");
    require(out, "out");
    std::ostringstream s;
    write_score_report(s, sel->vocabulary, sel->selection.ranking);
    *out = dup_string(s.str());
  });
}

size_t sd_selection_selected_count(const sd_selection *sel) {
  return sel ? sel->selection.selected.size() : 0;
}

sd_status sd_selection_selected_name(const sd_selection *sel, size_t rank, const char **name,
                                     double *chi2) {
  return guarded([&] {
    require(sel, "selection");
    if (rank >= sel->selection.selected.size()) {
      throw UsageError("selection rank out of range");
    }
    const auto &score = sel->selection.ranking[rank];
    if (name) {
      *name = sel->vocabulary[score.feature_index].c_str();
    }
    if (chi2) {
      *chi2 = score.chi2;
    }
  });
}

sd_status sd_selection_reduced(const sd_selection *sel, sd_dataset **out) {
  return guarded([&] {
    require(sel, "selection");
    require(out, "out");
    *out = new sd_dataset{sel->selection.reduced};
  });
}

sd_status sd_model_train(const sd_dataset *ds, sd_classifier kind, const sd_config *cfg,
                         sd_model **out) {
  return guarded([&] {
    require(ds, "dataset");
    require(out, "out");
    const PipelineConfig defaults;
    const PipelineConfig &c = cfg ? cfg->cfg : defaults;
    *out = new sd_model{train_model(to_kind(kind), ds->ds, c.params, c.seed)};
  });
}

sd_status sd_model_save(const sd_model *m, const char *path) {
  return guarded([&] {
    require(m, "model");
    require(path, "path");
    save_model(m->model, path);
  });
}

sd_status sd_model_load(const char *path, sd_model **out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new sd_model{load_model(path)};
  });
}

sd_status sd_model_serialize(const sd_model *m, char **out) {
  return guarded([&] {
    require(m, "model");
    require(out, "out");
    *out = dup_string(serialize_model(m->model));
  });
}

sd_status sd_model_deserialize(const char *text, size_t len, sd_model **out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new sd_model{deserialize_model(std::string_view(text, len))};
  });
}

void sd_model_free(sd_model *m) { delete m; }

sd_classifier sd_model_kind(const sd_model *m) {
  return m ? from_kind(m->model.kind) : SD_CLASSIFIER_NB;
}

size_t sd_model_feature_count(const sd_model *m) {
  return m ? m->model.feature_names.size() : 0;
}

const char *sd_model_feature_name(const sd_model *m, size_t index) {
  if (!m || index >= m->model.feature_names.size()) {
    return nullptr;
  }
  return m->model.feature_names[index].c_str();
}

sd_status sd_model_predict(const sd_model *m, const double *x, size_t n, sd_label *label,
                           double *score) {
  return guarded([&] {
    require(m, "model");
    if (n > 0) {
      require(x, "x");
    }
    const auto p = predict(m->model, std::span<const double>(x, n));
    if (label) {
      *label = p.label == Label::Malicious ? SD_LABEL_MALICIOUS : SD_LABEL_BENIGN;
    }
    if (score) {
      *score = p.score;
    }
  });
}

sd_status sd_model_predict_dataset(const sd_model *m, const sd_dataset *ds, char **out) {
  return guarded([&] {
    require(m, "model");
    require(ds, "dataset");
    require(out, "out");
    std::ostringstream csv;
    csv << "app_id,predicted,score,actual\n";
    for (const auto &row : ds->ds.rows) {
      const auto p = predict(m->model, align_row(m->model, ds->ds.vocabulary, row));
      csv << csv_field(row.app_id) << ',' << to_string(p.label) << ',' << format_score(p.score)
          << ',' << (row.label ? to_string(*row.label) : "") << '\n';
    }
    *out = dup_string(csv.str());
  });
}

sd_status sd_model_predict_traces(const sd_model *m, const char *const *paths, size_t n_paths,
                                  const char *labels_path, char **out) {
  return guarded([&] {
    require(m, "model");
    require(out, "out");
    if (n_paths > 0) {
      require(paths, "paths");
    }
    std::map<std::string, LabelRecord> labels;
    if (labels_path) {
      labels = load_labels(labels_path);
    }
    const auto &names = m->model.feature_names;
    const auto vocab = FeatureVocabulary::from_names({names.begin(), names.end() - 1});
    std::ostringstream csv;
    csv << "app_id,predicted,score\n";
    for (size_t i = 0; i < n_paths; ++i) {
      const std::filesystem::path path(paths[i]);
      const auto profile = parse_trace_file(path, path.stem().string());
      FeatureVector row;
      row.app_id = profile.app_id;
      row.bits = vectorize(profile, vocab).bits;
      if (auto it = labels.find(row.app_id); it != labels.end()) {
        row.detection_count = it->second.detection_count;
      }
      const auto p = predict(m->model, feature_row(row));
      csv << csv_field(row.app_id) << ',' << to_string(p.label) << ',' << format_score(p.score)
          << '\n';
    }
    *out = dup_string(csv.str());
  });
}

sd_status sd_evaluate(const sd_dataset *ds, const sd_config *cfg, sd_report **out) {
  return guarded([&] {
    require(ds, "dataset");
    require(out, "out");
    const PipelineConfig defaults;
    const PipelineConfig &c = cfg ? cfg->cfg : defaults;
    *out = new sd_report{compare_classifiers(ds->ds, c.classifiers, c.params, c.folds, c.seed)};
  });
}

sd_status sd_run_pipeline(const sd_config *cfg, sd_report **out) {
  return guarded([&] {
    require(cfg, "config");
    auto report = run_pipeline(cfg->cfg);
    if (out) {
      *out = new sd_report{std::move(report)};
    }
  });
}

void sd_report_free(sd_report *r) { delete r; }

sd_status sd_report_csv(const sd_report *r, char **out) {
  return guarded([&] {
    require(r, "report");
    require(out, "out");
    *out = dup_string(report_csv(r->report));
  });
}

sd_status sd_report_table(const sd_report *r, char **out) {
  return guarded([&] {
    require(r, "report");
    require(out, "out");
    *out = dup_string(report_table(r->report));
  });
}

size_t sd_report_row_count(const sd_report *r) { return r ? r->report.rows.size() : 0; }

sd_status sd_report_row(const sd_report *r, size_t index, sd_classifier *kind,
                        double *accuracy) {
  return guarded([&] {
    require(r, "report");
    if (index >= r->report.rows.size()) {
      throw UsageError("report row out of range");
    }
    const auto &row = r->report.rows[index];
    if (kind) {
      *kind = from_kind(row.kind);
    }
    if (accuracy) {
      *accuracy = row.result.metrics.accuracy;
    }
  });
}

sd_status sd_generate_synthetic_corpus(const char *dir, uint64_t seed, char **planted_out) {
  return guarded([&] {
    require(dir, "dir");
    SyntheticSpec spec;
    spec.seed = seed;
    const auto corpus = generate_synthetic_corpus(spec, dir);
    if (planted_out) {
      std::string names;
      for (const auto &n : corpus.planted_names) {
        names += n + "\n";
      }
      *planted_out = dup_string(names);
    }
  });
}

} // extern "C"
