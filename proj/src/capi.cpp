// Copyright 2026 The gazeauth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "gazeauth/gazeauth.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "gazeauth/auth.hpp"
#include "gazeauth/checkpoint.hpp"
#include "gazeauth/error.hpp"
#include "gazeauth/experiment.hpp"
#include "gazeauth/io.hpp"
#include "gazeauth/service.hpp"

struct gz_recording {
  gazeauth::GazeRecording rec;
};

struct gz_model {
  gazeauth::ModelParams params;
};

struct gz_store {
  gazeauth::TemplateStore store;
};

struct gz_service {
  std::unique_ptr<gazeauth::Service> service;
  std::thread thread;
};

namespace {

using gazeauth::Json;

thread_local std::string g_last_error;

struct NullArgument {};

template <typename T>
T* require(T* p) {
  if (p == nullptr) throw NullArgument{};
  return p;
}

// Runs `fn` and converts any exception into a status plus last-error text.
template <typename Fn>
gz_status wrap(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return GZ_OK;
  } catch (const gazeauth::Error& e) {
    g_last_error = e.what();
    return static_cast<gz_status>(static_cast<int>(e.code()));
  } catch (const NullArgument&) {
    g_last_error = "required argument is NULL";
    return GZ_ERR_NULL_ARGUMENT;
  } catch (const Json::exception& e) {
    g_last_error = e.what();
    return GZ_ERR_FORMAT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GZ_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return GZ_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void emit(char** out, const std::string& s) {
  if (out != nullptr) *out = dup_string(s);
}

std::optional<double> optional_threshold(double t) {
  if (std::isnan(t)) return std::nullopt;
  return t;
}

gazeauth::DecisionPolicy make_policy(double threshold, const char* aggregation) {
  gazeauth::DecisionPolicy policy;
  policy.threshold = threshold;
  if (aggregation != nullptr) policy.aggregation = gazeauth::aggregation_from_string(aggregation);
  policy.check();
  return policy;
}

void apply_train_options(const Json& o, gazeauth::NetworkConfig& net, gazeauth::TrainConfig& tc) {
  if (!o.is_object()) throw gazeauth::ConfigError("training options must be a JSON object");
  for (const auto& [key, value] : o.items()) {
    if (key == "epochs") tc.epochs = value.get<int>();
    else if (key == "peak_lr") tc.peak_lr = value.get<double>();
    else if (key == "warmup_frac") tc.warmup_frac = value.get<double>();
    else if (key == "fold_index") tc.fold_index = value.get<int>();
    else if (key == "n_folds") tc.n_folds = value.get<int>();
    else if (key == "augment") tc.augment = value.get<bool>();
    else if (key == "noise_std") tc.degradation.noise_std = value.get<double>();
    else if (key == "classes_per_batch") tc.classes_per_batch = value.get<int>();
    else if (key == "samples_per_class") tc.samples_per_class = value.get<int>();
    else if (key == "alpha") tc.loss.alpha = value.get<double>();
    else if (key == "beta") tc.loss.beta = value.get<double>();
    else if (key == "lambda") tc.loss.lambda = value.get<double>();
    else if (key == "layers") {
      net.n_conv_layers = value.get<int>();
      net.dilations.clear();
      for (int l = 0; l < net.n_conv_layers; ++l) net.dilations.push_back(1 << l);
    } else if (key == "filters") net.filters_per_layer = value.get<int>();
    else if (key == "kernel_size") net.kernel_size = value.get<int>();
    else if (key == "embedding_dim") net.embedding_dim = value.get<int>();
    else if (key == "rate_hz") net.rate_hz = value.get<double>();
    else throw gazeauth::ConfigError("unknown training option '" + key + "'");
  }
  tc.degradation.target_rate_hz = net.rate_hz;
}

}  // namespace

extern "C" {

const char* gz_version(void) { return "0.1.0"; }

const char* gz_last_error(void) { return g_last_error.c_str(); }

const char* gz_status_name(gz_status status) {
  switch (status) {
    case GZ_OK:
      return "ok";
    case GZ_ERR_NULL_ARGUMENT:
      return "null_argument";
    case GZ_ERR_INTERNAL:
      return "internal";
    default:
      if (status >= GZ_ERR_CONFIG && status <= GZ_ERR_IO)
        return gazeauth::error_code_name(static_cast<gazeauth::ErrorCode>(status));
      return "unknown";
  }
}

void gz_string_free(char* s) { std::free(s); }

gz_status gz_recording_load(const char* path, gz_recording** out) {
  return wrap([&] { *require(out) = new gz_recording{gazeauth::load_recording(require(path))}; });
}

gz_status gz_recording_from_json(const char* json, gz_recording** out) {
  return wrap([&] {
    Json j;
    try {
      j = Json::parse(require(json));
    } catch (const Json::parse_error& e) {
      throw gazeauth::FormatError(e.what());
    }
    *require(out) = new gz_recording{gazeauth::recording_from_json(j)};
  });
}

gz_status gz_recording_to_json(const gz_recording* rec, char** out_json) {
  return wrap([&] { *require(out_json) = dup_string(gazeauth::recording_to_json(require(rec)->rec).dump()); });
}

gz_status gz_recording_save(const gz_recording* rec, const char* path) {
  return wrap([&] { gazeauth::save_recording(require(rec)->rec, require(path)); });
}

double gz_recording_rate(const gz_recording* rec) { return rec != nullptr ? rec->rec.rate_hz : 0.0; }

size_t gz_recording_size(const gz_recording* rec) { return rec != nullptr ? rec->rec.samples.size() : 0; }

void gz_recording_free(gz_recording* rec) { delete rec; }

gz_status gz_recording_validate(const gz_recording* rec, double expected_duration_s, char** out_json) {
  return wrap([&] {
    gazeauth::StimulusSchedule expected;
    expected.total_s = expected_duration_s;
    const auto report = gazeauth::validate_recording(require(rec)->rec, expected);
    *require(out_json) = dup_string(gazeauth::validation_report_to_json(report).dump());
  });
}

gz_status gz_degrade(const gz_recording* rec, double target_rate_hz, gz_recording** out) {
  return wrap([&] {
    const auto& in = require(rec)->rec;
    require(out);
    const double ratio = in.rate_hz / target_rate_hz;
    gazeauth::GazeRecording result = (ratio >= 1.0 && std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio)
                                         ? gazeauth::decimate(in, target_rate_hz)
                                         : gazeauth::resample_linear(in, target_rate_hz);
    *out = new gz_recording{std::move(result)};
  });
}

gz_status gz_velocity_json(const gz_recording* rec, const gz_model* model, double noise_mean, double noise_std,
                           uint64_t seed, char** out_json) {
  return wrap([&] {
    const auto& in = require(rec)->rec;
    require(out_json);
    gazeauth::VelocitySequence seq = model != nullptr
                                         ? gazeauth::normalize(gazeauth::prepare_velocity(in, model->params.config.rate_hz),
                                                               model->params.norm)
                                         : gazeauth::to_velocity(in);
    gazeauth::DegradationConfig cfg;
    cfg.noise_mean = noise_mean;
    cfg.noise_std = noise_std;
    cfg.seed = seed;
    if (noise_mean != 0.0 || noise_std != 0.0) seq = gazeauth::add_noise(seq, cfg);
    *out_json = dup_string(gazeauth::velocity_to_json(seq).dump());
  });
}

gz_status gz_stimulus_json(uint64_t seed, char** out_json) {
  return wrap([&] { *require(out_json) = dup_string(gazeauth::schedule_to_json(gazeauth::generate_schedule(seed)).dump()); });
}

gz_status gz_synth_population(int n_users, int n_sessions, uint64_t master_seed, double rate_hz, const char* out_dir,
                              char** out_manifest_path) {
  return wrap([&] {
    const std::string dir = require(out_dir);
    const auto corpus = gazeauth::make_population(n_users, n_sessions, master_seed, {}, rate_hz);
    gazeauth::write_corpus(corpus, dir);
    emit(out_manifest_path, dir + "/manifest.json");
  });
}

gz_status gz_model_load(const char* path, gz_model** out) {
  return wrap([&] { *require(out) = new gz_model{gazeauth::load_checkpoint(require(path))}; });
}

gz_status gz_model_save(const gz_model* model, const char* path) {
  return wrap([&] { gazeauth::save_checkpoint(require(model)->params, require(path)); });
}

const char* gz_model_id(const gz_model* model) { return model != nullptr ? model->params.model_id.c_str() : ""; }

double gz_model_rate(const gz_model* model) { return model != nullptr ? model->params.config.rate_hz : 0.0; }

gz_status gz_model_info_json(const gz_model* model, char** out_json) {
  return wrap([&] {
    const auto& p = require(model)->params;
    const Json info{{"model_id", p.model_id},
                    {"config", gazeauth::network_config_to_json(p.config)},
                    {"norm_stats", gazeauth::norm_stats_to_json(p.norm)},
                    {"parameter_count", p.parameter_count()},
                    {"receptive_field", p.config.receptive_field()}};
    *require(out_json) = dup_string(info.dump());
  });
}

void gz_model_free(gz_model* model) { delete model; }

gz_status gz_train(const char* manifest_path, const char* options_json, uint64_t seed, gz_epoch_callback callback,
                   void* user_data, gz_model** out, char** out_log_json) {
  return wrap([&] {
    require(out);
    gazeauth::NetworkConfig net;
    gazeauth::TrainConfig tc;
    if (options_json != nullptr && *options_json != '\0') apply_train_options(Json::parse(options_json), net, tc);
    const auto corpus = gazeauth::load_corpus(gazeauth::load_manifest(require(manifest_path)));
    const auto seqs = gazeauth::to_training_sequences(corpus, net.rate_hz);
    gazeauth::EpochCallback cb;
    if (callback != nullptr)
      cb = [&](const gazeauth::EpochLog& e) { callback(e.epoch, e.train_loss, e.val_loss, e.lr, user_data); };
    auto result = gazeauth::train(seqs, net, tc, seed, cb);
    emit(out_log_json, Json{{"train_users", result.train_users},
                            {"val_users", result.val_users},
                            {"log", gazeauth::train_log_to_json(result.log)}}
                           .dump());
    *out = new gz_model{std::move(result.params)};
  });
}

gz_status gz_embed(const gz_model* model, const gz_recording* rec, double* out, size_t capacity, size_t* out_dim) {
  return wrap([&] {
    const auto emb = gazeauth::process_recording(require(rec)->rec, require(model)->params);
    if (out_dim != nullptr) *out_dim = emb.dim();
    if (out != nullptr)
      for (size_t k = 0; k < std::min(capacity, emb.dim()); ++k) out[k] = emb.values()[k];
  });
}

gz_status gz_store_open(const char* path, gz_store** out) {
  return wrap([&] { *require(out) = new gz_store{gazeauth::TemplateStore::open(require(path))}; });
}

gz_status gz_store_enroll(gz_store* store, const gz_model* model, const char* name, const gz_recording* rec,
                          size_t* out_count) {
  return wrap([&] {
    const auto emb = gazeauth::process_recording(require(rec)->rec, require(model)->params);
    const size_t count = require(store)->store.enroll(require(name), emb);
    if (out_count != nullptr) *out_count = count;
  });
}

gz_status gz_store_verify(const gz_store* store, const gz_model* model, const char* name, const gz_recording* rec,
                          double threshold, const char* aggregation, char** out_json) {
  return wrap([&] {
    const auto r = gazeauth::verify(require(name), require(rec)->rec, require(store)->store, require(model)->params,
                                    make_policy(threshold, aggregation));
    *require(out_json) = dup_string(Json{{"name", r.claimed_name},
                                         {"similarity", r.similarity},
                                         {"decision", gazeauth::to_string(r.decision)},
                                         {"threshold", r.threshold},
                                         {"embed_ms", r.embed_ms},
                                         {"total_ms", r.total_ms}}
                                        .dump());
  });
}

gz_status gz_store_users_json(const gz_store* store, char** out_json) {
  return wrap([&] {
    Json users = Json::array();
    for (const auto& u : require(store)->store.list_users())
      users.push_back({{"name", u.name}, {"embedding_count", u.embedding_count}});
    *require(out_json) = dup_string(Json{{"model_id", store->store.model_id()}, {"users", users}}.dump());
  });
}

gz_status gz_store_remove(gz_store* store, const char* name) {
  return wrap([&] { require(store)->store.remove(require(name)); });
}

void gz_store_free(gz_store* store) { delete store; }

gz_status gz_evaluate_matrix(const char* table_path, double threshold, char** out_report_json, char** out_table) {
  return wrap([&] {
    const auto matrix = gazeauth::load_matrix_table(require(table_path));
    const auto report = gazeauth::compute_eer(matrix, optional_threshold(threshold));
    emit(out_report_json, gazeauth::report_to_json(report, matrix).dump());
    emit(out_table, gazeauth::format_matrix_table(matrix));
  });
}

gz_status gz_evaluate_manifest(const char* manifest_path, const gz_model* model, int enroll_session,
                               int verify_session, double threshold, char** out_report_json, char** out_table) {
  return wrap([&] {
    const auto r = gazeauth::end_to_end_eval(gazeauth::load_manifest(require(manifest_path)), require(model)->params,
                                             enroll_session, verify_session, {}, optional_threshold(threshold));
    emit(out_report_json, gazeauth::report_to_json(r.report, r.matrix).dump());
    emit(out_table, gazeauth::format_matrix_table(r.matrix));
  });
}

gz_status gz_service_create(const gz_model* model, const char* store_path, double threshold, const char* aggregation,
                            gz_service** out) {
  return wrap([&] {
    gazeauth::ServiceConfig cfg;
    cfg.policy = make_policy(threshold, aggregation);
    auto svc = std::make_unique<gazeauth::Service>(require(model)->params,
                                                   gazeauth::TemplateStore::open(require(store_path)), cfg);
    *require(out) = new gz_service{std::move(svc), {}};
  });
}

gz_status gz_service_bind(gz_service* svc, const char* host, int port, int* out_port) {
  return wrap([&] {
    const int bound = require(svc)->service->bind(require(host), port);
    if (out_port != nullptr) *out_port = bound;
  });
}

gz_status gz_service_run(gz_service* svc) {
  return wrap([&] { require(svc)->service->run(); });
}

gz_status gz_service_start(gz_service* svc) {
  return wrap([&] {
    require(svc);
    if (svc->thread.joinable()) throw gazeauth::ConfigError("service already started");
    if (svc->service->port() < 0) throw gazeauth::IoError("service is not bound");
    svc->thread = std::thread([s = svc->service.get()] { s->run(); });
    svc->service->wait_until_ready();
  });
}

gz_status gz_service_stop(gz_service* svc) {
  return wrap([&] {
    require(svc)->service->stop();
    if (svc->thread.joinable()) svc->thread.join();
  });
}

void gz_service_free(gz_service* svc) {
  if (svc == nullptr) return;
  svc->service->stop();
  if (svc->thread.joinable()) svc->thread.join();
  delete svc;
}

}  // extern "C"
