/* Copyright 2026 The gazeauth Authors
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

/* C interface to gazeauth.
 *
 * Every function returns a gz_status. On failure, gz_last_error() holds a
 * message for the calling thread until its next call into the library.
 * Strings returned through char** are heap-allocated and must be released
 * with gz_string_free. Handles are released with their *_free function;
 * passing NULL to any *_free is a no-op.
 */

#ifndef GAZEAUTH_GAZEAUTH_H_
#define GAZEAUTH_GAZEAUTH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(GAZEAUTH_BUILDING_LIBRARY)
#define GZ_API __attribute__((visibility("default")))
#else
#define GZ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gz_status {
  GZ_OK = 0,
  GZ_ERR_CONFIG = 1,
  GZ_ERR_DECIMATION_RATIO = 2,
  GZ_ERR_SIGNAL_TOO_SHORT = 3,
  GZ_ERR_DEGENERATE_CORPUS = 4,
  GZ_ERR_INPUT_TOO_SHORT = 5,
  GZ_ERR_INVALID_INPUT = 6,
  GZ_ERR_DEGENERATE_BATCH = 7,
  GZ_ERR_DATA = 8,
  GZ_ERR_MODEL_MISMATCH = 9,
  GZ_ERR_VALIDATION = 10,
  GZ_ERR_NOT_FOUND = 11,
  GZ_ERR_RECORDING_REJECTED = 12,
  GZ_ERR_DEGENERATE_MATRIX = 13,
  GZ_ERR_PROTOCOL = 14,
  GZ_ERR_FORMAT = 15,
  GZ_ERR_IO = 16,
  GZ_ERR_NULL_ARGUMENT = 98,
  GZ_ERR_INTERNAL = 99
} gz_status;

typedef struct gz_recording gz_recording;
typedef struct gz_model gz_model;
typedef struct gz_store gz_store;
typedef struct gz_service gz_service;

/* Called once per epoch during training; epoch 0 reports the initial loss.
 * val_loss is NaN when there is no validation split. */
typedef void (*gz_epoch_callback)(int epoch, double train_loss, double val_loss, double lr, void* user_data);

GZ_API const char* gz_version(void);
GZ_API const char* gz_last_error(void);
GZ_API const char* gz_status_name(gz_status status);
GZ_API void gz_string_free(char* s);

/* Recordings (JSON file schema: {rate_hz, samples: [{t, x_deg, y_deg, valid}], meta}). */
GZ_API gz_status gz_recording_load(const char* path, gz_recording** out);
GZ_API gz_status gz_recording_from_json(const char* json, gz_recording** out);
GZ_API gz_status gz_recording_to_json(const gz_recording* rec, char** out_json);
GZ_API gz_status gz_recording_save(const gz_recording* rec, const char* path);
GZ_API double gz_recording_rate(const gz_recording* rec);
GZ_API size_t gz_recording_size(const gz_recording* rec);
GZ_API void gz_recording_free(gz_recording* rec);

/* Validation report as JSON against a stimulus of `expected_duration_s`. */
GZ_API gz_status gz_recording_validate(const gz_recording* rec, double expected_duration_s, char** out_json);

/* Brings `rec` to `target_rate_hz`: decimation when the rate ratio is an
 * integer, linear resampling otherwise. */
GZ_API gz_status gz_degrade(const gz_recording* rec, double target_rate_hz, gz_recording** out);

/* Velocity sequence of `rec` as JSON. With a model, the signal is brought
 * to the model rate and z-scored with its frozen statistics. Noise with the
 * given mean and std is then added (std 0 adds the mean only). */
GZ_API gz_status gz_velocity_json(const gz_recording* rec, const gz_model* model, double noise_mean,
                                  double noise_std, uint64_t seed, char** out_json);

/* Stimulus schedule for `seed` as JSON. */
GZ_API gz_status gz_stimulus_json(uint64_t seed, char** out_json);

/* Simulates n_users x n_sessions recordings into `out_dir` and returns the
 * manifest path through out_manifest_path. */
GZ_API gz_status gz_synth_population(int n_users, int n_sessions, uint64_t master_seed, double rate_hz,
                                     const char* out_dir, char** out_manifest_path);

/* Models. */
GZ_API gz_status gz_model_load(const char* path, gz_model** out);
GZ_API gz_status gz_model_save(const gz_model* model, const char* path);
/* Static 16-hex-digit identity of the model; valid while the handle lives. */
GZ_API const char* gz_model_id(const gz_model* model);
GZ_API double gz_model_rate(const gz_model* model);
GZ_API gz_status gz_model_info_json(const gz_model* model, char** out_json);
GZ_API void gz_model_free(gz_model* model);

/* Trains on the corpus named by `manifest_path`. `options_json` may be NULL
 * or an object overriding any of: epochs, peak_lr, warmup_frac, fold_index,
 * n_folds, augment, noise_std, classes_per_batch, samples_per_class, alpha,
 * beta, lambda, layers, filters, kernel_size, embedding_dim, rate_hz.
 * The epoch log is returned as JSON through out_log_json (may be NULL). */
GZ_API gz_status gz_train(const char* manifest_path, const char* options_json, uint64_t seed,
                          gz_epoch_callback callback, void* user_data, gz_model** out, char** out_log_json);

/* Embeds `rec` (validated, brought to the model rate, normalized).
 * Writes at most `capacity` values and the embedding dimension to out_dim. */
GZ_API gz_status gz_embed(const gz_model* model, const gz_recording* rec, double* out, size_t capacity,
                          size_t* out_dim);

/* Template store bound to a JSON file; every mutation is persisted. */
GZ_API gz_status gz_store_open(const char* path, gz_store** out);
GZ_API gz_status gz_store_enroll(gz_store* store, const gz_model* model, const char* name, const gz_recording* rec,
                                 size_t* out_count);
/* Result JSON: {name, similarity, decision, threshold, embed_ms, total_ms}.
 * `aggregation` is "max" or "mean" (NULL means "max"). */
GZ_API gz_status gz_store_verify(const gz_store* store, const gz_model* model, const char* name,
                                 const gz_recording* rec, double threshold, const char* aggregation,
                                 char** out_json);
GZ_API gz_status gz_store_users_json(const gz_store* store, char** out_json);
GZ_API gz_status gz_store_remove(gz_store* store, const char* name);
GZ_API void gz_store_free(gz_store* store);

/* Evaluation. Pass NaN as `threshold` to skip the operating-point lookup.
 * out_table (may be NULL) receives the score matrix as a text table. */
GZ_API gz_status gz_evaluate_matrix(const char* table_path, double threshold, char** out_report_json,
                                    char** out_table);
GZ_API gz_status gz_evaluate_manifest(const char* manifest_path, const gz_model* model, int enroll_session,
                                      int verify_session, double threshold, char** out_report_json,
                                      char** out_table);

/* HTTP service. The service keeps its own copy of the model and opens the
 * store at `store_path`. */
GZ_API gz_status gz_service_create(const gz_model* model, const char* store_path, double threshold,
                                   const char* aggregation, gz_service** out);
/* Port 0 binds an ephemeral port; the bound port is written to out_port. */
GZ_API gz_status gz_service_bind(gz_service* svc, const char* host, int port, int* out_port);
/* Serves on the calling thread until gz_service_stop. */
GZ_API gz_status gz_service_run(gz_service* svc);
/* Serves on a background thread; returns once connections are accepted. */
GZ_API gz_status gz_service_start(gz_service* svc);
GZ_API gz_status gz_service_stop(gz_service* svc);
GZ_API void gz_service_free(gz_service* svc);

#ifdef __cplusplus
}
#endif

#endif /* GAZEAUTH_GAZEAUTH_H_ */
