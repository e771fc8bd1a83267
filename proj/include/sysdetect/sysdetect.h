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
/*
 * C interface to the sysdetect library. Every object is an opaque handle
 * created by a *_new / *_load / *_parse / *_build function and released by
 * the matching *_free. Functions return an sd_status; on failure a
 * description is available from sd_last_error() on the same thread.
 * Strings returned through char** out-parameters are owned by the caller and
 * must be released with sd_string_free().
 */
#ifndef SYSDETECT_SYSDETECT_H
#define SYSDETECT_SYSDETECT_H

#include <stddef.h>
#include <stdint.h>

#if defined(SYSDETECT_BUILDING_LIBRARY)
#define SD_API __attribute__((visibility("default")))
#else
#define SD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values match the CLI exit codes. */
typedef enum sd_status {
  SD_OK = 0,
  SD_ERR_USAGE = 1,
  SD_ERR_DATA = 2,
  SD_ERR_INTERNAL = 3
} sd_status;

typedef enum sd_label { SD_LABEL_MALICIOUS = 0, SD_LABEL_BENIGN = 1 } sd_label;

typedef enum sd_classifier {
  SD_CLASSIFIER_NB = 0,
  SD_CLASSIFIER_RF = 1,
  SD_CLASSIFIER_SGD = 2
} sd_classifier;

typedef struct sd_config sd_config;
typedef struct sd_profile sd_profile;
typedef struct sd_dataset sd_dataset;
typedef struct sd_selection sd_selection;
typedef struct sd_model sd_model;
typedef struct sd_report sd_report;

SD_API const char *sd_version(void);
SD_API const char *sd_last_error(void);
SD_API void sd_string_free(char *s);

typedef void (*sd_log_fn)(const char *message, void *user);
/* NULL silences logging. */
SD_API void sd_set_log_callback(sd_log_fn fn, void *user);

/* ---- configuration ------------------------------------------------------ */

SD_API sd_status sd_config_new(sd_config **out);
SD_API void sd_config_free(sd_config *cfg);
SD_API sd_status sd_config_set(sd_config *cfg, const char *key, const char *value);
SD_API sd_status sd_config_get(const sd_config *cfg, const char *key, char **out);
SD_API sd_status sd_config_load_file(sd_config *cfg, const char *path);
/* Applies SYSDETECT_<KEY> environment variables. */
SD_API sd_status sd_config_apply_env(sd_config *cfg);

/* ---- traces ------------------------------------------------------------- */

SD_API sd_status sd_profile_parse_file(const char *path, const char *app_id, sd_profile **out);
SD_API sd_status sd_profile_parse_text(const char *text, size_t len, const char *app_id,
                                       sd_profile **out);
SD_API void sd_profile_free(sd_profile *p);
SD_API const char *sd_profile_app_id(const sd_profile *p);
SD_API uint64_t sd_profile_total_events(const sd_profile *p);
SD_API uint64_t sd_profile_unparseable_lines(const sd_profile *p);
/* Distinct syscalls, sorted by name. */
SD_API size_t sd_profile_syscall_count(const sd_profile *p);
SD_API sd_status sd_profile_syscall_at(const sd_profile *p, size_t index, const char **name,
                                       uint64_t *count);

/* Runs the configured tracer command (collect.command, collect.duration) for
 * app_id and writes <traces_dir>/<app_id>.strace. */
SD_API sd_status sd_collect_trace(const sd_config *cfg, const char *app_id, char **out_path);

/* ---- datasets ----------------------------------------------------------- */

/* Uses traces_dir, labels and (optional) vocabulary from cfg. */
SD_API sd_status sd_dataset_build(const sd_config *cfg, sd_dataset **out);
SD_API sd_status sd_dataset_load_csv(const char *path, sd_dataset **out);
SD_API sd_status sd_dataset_save_csv(const sd_dataset *ds, const char *path);
SD_API sd_status sd_dataset_export_arff(const sd_dataset *ds, const char *path);
SD_API sd_status sd_dataset_save_vocabulary(const sd_dataset *ds, const char *path);
SD_API void sd_dataset_free(sd_dataset *ds);
SD_API size_t sd_dataset_row_count(const sd_dataset *ds);
/* Presence columns only; models see one more (det_count). */
SD_API size_t sd_dataset_feature_count(const sd_dataset *ds);
SD_API size_t sd_dataset_class_count(const sd_dataset *ds, sd_label label);

/* ---- feature selection -------------------------------------------------- */

SD_API sd_status sd_select_features(const sd_dataset *ds, size_t k, sd_selection **out);
SD_API void sd_selection_free(sd_selection *sel);
/* rank,feature_name,chi2,a,b,c,d */
SD_API sd_status sd_selection_scores_csv(const sd_selection *sel, char **out);
SD_API size_t sd_selection_selected_count(const sd_selection *sel);
SD_API sd_status sd_selection_selected_name(const sd_selection *sel, size_t rank,
                                            const char **name, double *chi2);
/* New handle holding the k selected columns plus det_count. */
SD_API sd_status sd_selection_reduced(const sd_selection *sel, sd_dataset **out);

/* ---- models ------------------------------------------------------------- */

/* Classifier parameters and seed come from cfg (NULL: defaults). */
SD_API sd_status sd_model_train(const sd_dataset *ds, sd_classifier kind, const sd_config *cfg,
                                sd_model **out);
SD_API sd_status sd_model_save(const sd_model *m, const char *path);
SD_API sd_status sd_model_load(const char *path, sd_model **out);
SD_API sd_status sd_model_serialize(const sd_model *m, char **out);
SD_API sd_status sd_model_deserialize(const char *text, size_t len, sd_model **out);
SD_API void sd_model_free(sd_model *m);
SD_API sd_classifier sd_model_kind(const sd_model *m);
SD_API size_t sd_model_feature_count(const sd_model *m);
SD_API const char *sd_model_feature_name(const sd_model *m, size_t index);
SD_API sd_status sd_model_predict(const sd_model *m, const double *x, size_t n, sd_label *label,
                                  double *score);
/* CSV app_id,predicted,score[,actual] for every row, columns matched by name. */
SD_API sd_status sd_model_predict_dataset(const sd_model *m, const sd_dataset *ds, char **out);
/* CSV app_id,predicted,score for raw trace files; detection counts come from
 * labels_path when given, otherwise 0. */
SD_API sd_status sd_model_predict_traces(const sd_model *m, const char *const *paths,
                                         size_t n_paths, const char *labels_path, char **out);

/* ---- evaluation --------------------------------------------------------- */

/* Cross-validates the classifiers selected in cfg (classifier, folds, seed). */
SD_API sd_status sd_evaluate(const sd_dataset *ds, const sd_config *cfg, sd_report **out);
/* Full pipeline; writes its artifacts to cfg's output_dir. */
SD_API sd_status sd_run_pipeline(const sd_config *cfg, sd_report **out);
SD_API void sd_report_free(sd_report *r);
SD_API sd_status sd_report_csv(const sd_report *r, char **out);
SD_API sd_status sd_report_table(const sd_report *r, char **out);
SD_API size_t sd_report_row_count(const sd_report *r);
SD_API sd_status sd_report_row(const sd_report *r, size_t index, sd_classifier *kind,
                               double *accuracy);

/* ---- synthetic corpus --------------------------------------------------- */

/* Writes traces/, labels.csv and vocabulary.txt under dir. planted_out, when
 * not NULL, receives the planted syscall names separated by newlines. */
SD_API sd_status sd_generate_synthetic_corpus(const char *dir, uint64_t seed,
                                              char **planted_out);

#ifdef __cplusplus
}
#endif

#endif /* SYSDETECT_SYSDETECT_H */
