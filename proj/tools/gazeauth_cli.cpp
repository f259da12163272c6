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


// gazeauth command-line front end. Every option can also be set through a
// GAZEAUTH_* environment variable (shown in --help).

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "gazeauth/gazeauth.h"

namespace {

using Json = nlohmann::json;

struct CliError {
  int exit_code;
  std::string message;
};

void check(gz_status s) {
  if (s != GZ_OK) throw CliError{static_cast<int>(s), std::string(gz_status_name(s)) + ": " + gz_last_error()};
}

// Owning wrapper for library strings.
struct Text {
  char* p = nullptr;
  ~Text() { gz_string_free(p); }
  char** out() { return &p; }
  std::string str() const { return p ? p : ""; }
};

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  ~Handle() { Free(p); }
  T** out() { return &p; }
};

using Recording = Handle<gz_recording, gz_recording_free>;
using Model = Handle<gz_model, gz_model_free>;
using Store = Handle<gz_store, gz_store_free>;
using ServiceHandle = Handle<gz_service, gz_service_free>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{16, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw CliError{16, "cannot write " + path};
}

// Minimal client for a running service; base is "http://host:port".
Json http_call(const std::string& base, const std::string& method, const std::string& path, const Json* body,
               int* status_out) {
  httplib::Client client(base);
  client.set_read_timeout(30, 0);
  httplib::Result res = method == "GET"      ? client.Get(path)
                        : method == "DELETE" ? client.Delete(path)
                                             : client.Post(path, body->dump(), "application/json");
  if (!res) throw CliError{16, "request to " + base + path + " failed: " + httplib::to_string(res.error())};
  *status_out = res->status;
  if (res->body.empty()) return Json::object();
  return Json::parse(res->body, nullptr, false);
}

void print_json(const std::string& text) { std::cout << Json::parse(text).dump(2) << "\n"; }

void print_remote(int status, const Json& body) {
  std::cout << body.dump(2) << "\n";
  if (status >= 400) throw CliError{status / 100, "server answered HTTP " + std::to_string(status)};
}

std::string rate_text(const Json& r) {
  return std::to_string(r.at("num").get<long long>()) + "/" + std::to_string(r.at("den").get<long long>());
}

void print_report(const std::string& table, const std::string& report_text) {
  const Json report = Json::parse(report_text);
  std::cout << table << "\n";
  std::printf("EER               %.4f (%s)\n", report.at("eer").at("value").get<double>(),
              rate_text(report.at("eer")).c_str());
  const Json& lower = report.at("eer_threshold_lower_exclusive");
  if (lower.is_null())
    std::printf("EER threshold     %.4f\n", report.at("eer_threshold").get<double>());
  else
    std::printf("EER threshold     %.4f (same counts on (%.4f, %.4f])\n", report.at("eer_threshold").get<double>(),
                lower.get<double>(), report.at("eer_threshold").get<double>());
  std::printf("convention        %s\n", report.at("convention").get<std::string>().c_str());
  if (report.contains("operating_point") && !report.at("operating_point").is_null()) {
    const Json& op = report.at("operating_point");
    std::printf("at threshold %.4f FAR %s  FRR %s\n", op.at("threshold").get<double>(), rate_text(op.at("far")).c_str(),
                rate_text(op.at("frr")).c_str());
    for (const auto& cell : op.at("error_cells"))
      std::printf("  %-13s %s vs %s (%.4f)\n", cell.at("genuine").get<bool>() ? "false reject" : "false accept",
                  cell.at("enroll").get<std::string>().c_str(), cell.at("verify").get<std::string>().c_str(),
                  cell.at("score").get<double>());
  }
  std::cout << "\n" << report.dump(2) << "\n";
}

void epoch_printer(int epoch, double train_loss, double val_loss, double lr, void*) {
  if (std::isnan(val_loss))
    std::fprintf(stderr, "epoch %3d  train %.5f  lr %.3g\n", epoch, train_loss, lr);
  else
    std::fprintf(stderr, "epoch %3d  train %.5f  val %.5f  lr %.3g\n", epoch, train_loss, val_loss, lr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eye-movement biometric enrollment and verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gz_version()));

  std::string model_path, store_path, recording_path, name, url, host = "127.0.0.1", aggregation = "max";
  std::string out_path, manifest_path, matrix_path, options_json, log_path, velocity_out, json_out;
  double threshold = 0.8, rate = 125.0, noise_mean = 0.0, noise_std = 0.0;
  int port = 8080, users = 5, sessions = 2, enroll_session = 1, verify_session = 2, epochs = -1, fold = 0;
  std::uint64_t seed = 0;
  bool no_augment = false;
  std::string delete_name;

  auto model_opt = [&](CLI::App* c, bool required) {
    auto* o = c->add_option("--model", model_path, "Model checkpoint")->envname("GAZEAUTH_MODEL");
    if (required) o->required();
    return o;
  };
  auto store_opt = [&](CLI::App* c) {
    return c->add_option("--store", store_path, "Template store JSON file")->envname("GAZEAUTH_STORE");
  };
  auto threshold_opt = [&](CLI::App* c) {
    c->add_option("--threshold", threshold, "Similarity threshold (accept iff >=)")
        ->envname("GAZEAUTH_THRESHOLD")
        ->check(CLI::Range(-1.0, 1.0));
  };
  auto aggregation_opt = [&](CLI::App* c) {
    c->add_option("--aggregation", aggregation, "max or mean over enrolled templates")
        ->envname("GAZEAUTH_AGGREGATION")
        ->check(CLI::IsMember({"max", "mean"}));
  };

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  model_opt(serve, true);
  store_opt(serve)->required();
  threshold_opt(serve);
  aggregation_opt(serve);
  serve->add_option("--host", host, "Bind address")->envname("GAZEAUTH_HOST");
  serve->add_option("--port", port, "Port (0 picks a free one)")->envname("GAZEAUTH_PORT");

  auto* enroll = app.add_subcommand("enroll", "Enroll a recording under a name");
  auto* verify = app.add_subcommand("verify", "Verify a recording against a claimed name");
  for (auto* c : {enroll, verify}) {
    c->add_option("--name", name, "User name")->envname("GAZEAUTH_NAME")->required();
    c->add_option("--recording", recording_path, "Recording JSON file")
        ->envname("GAZEAUTH_RECORDING")
        ->required()
        ->check(CLI::ExistingFile);
    c->add_option("--url", url, "Talk to a running service instead of local files")->envname("GAZEAUTH_URL");
    model_opt(c, false);
    store_opt(c);
  }
  threshold_opt(verify);
  aggregation_opt(verify);

  auto* users_cmd = app.add_subcommand("users", "List (or delete) enrolled users");
  store_opt(users_cmd);
  users_cmd->add_option("--url", url, "Running service")->envname("GAZEAUTH_URL");
  users_cmd->add_option("--delete", delete_name, "Remove this user")->envname("GAZEAUTH_DELETE");

  auto* degrade = app.add_subcommand("degrade", "Bring a recording to a lower rate and optionally export noisy velocity");
  degrade->add_option("--recording", recording_path, "Input recording")
      ->envname("GAZEAUTH_RECORDING")
      ->required()
      ->check(CLI::ExistingFile);
  degrade->add_option("--out", out_path, "Output recording")->envname("GAZEAUTH_OUT")->required();
  degrade->add_option("--rate", rate, "Target rate in Hz")->envname("GAZEAUTH_RATE");
  degrade->add_option("--velocity-out", velocity_out, "Also write the velocity sequence here")
      ->envname("GAZEAUTH_VELOCITY_OUT");
  degrade->add_option("--noise-mean", noise_mean, "Noise mean added to the velocity")->envname("GAZEAUTH_NOISE_MEAN");
  degrade->add_option("--noise-std", noise_std, "Noise std added to the velocity")->envname("GAZEAUTH_NOISE_STD");
  degrade->add_option("--seed", seed, "Noise seed")->envname("GAZEAUTH_SEED");
  model_opt(degrade, false)->description("Normalize the velocity with this model's statistics");

  auto* synth = app.add_subcommand("synth", "Simulate a labeled recording corpus");
  synth->add_option("--users", users, "Number of users")->envname("GAZEAUTH_USERS");
  synth->add_option("--sessions", sessions, "Sessions per user")->envname("GAZEAUTH_SESSIONS");
  synth->add_option("--seed", seed, "Master seed")->envname("GAZEAUTH_SEED");
  synth->add_option("--rate", rate, "Sampling rate in Hz")->envname("GAZEAUTH_RATE");
  synth->add_option("--out", out_path, "Output directory")->envname("GAZEAUTH_OUT")->required();

  auto* train = app.add_subcommand("train", "Train an embedding model on a corpus");
  train->add_option("--manifest", manifest_path, "Corpus manifest")
      ->envname("GAZEAUTH_MANIFEST")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--out", out_path, "Checkpoint to write")->envname("GAZEAUTH_OUT")->required();
  train->add_option("--seed", seed, "Training seed")->envname("GAZEAUTH_SEED");
  train->add_option("--epochs", epochs, "Epochs")->envname("GAZEAUTH_EPOCHS");
  train->add_option("--fold", fold, "Validation fold (-1 trains on every user)")->envname("GAZEAUTH_FOLD");
  train->add_flag("--no-augment", no_augment, "Disable noise augmentation")->envname("GAZEAUTH_NO_AUGMENT");
  train->add_option("--options", options_json, "JSON object of further training options")
      ->envname("GAZEAUTH_TRAIN_OPTIONS");
  train->add_option("--log", log_path, "Write the epoch log JSON here")->envname("GAZEAUTH_LOG");

  auto* evaluate = app.add_subcommand("evaluate", "Compute FAR/FRR and EER");
  auto* matrix_o = evaluate->add_option("--matrix", matrix_path, "Score matrix table")
                       ->envname("GAZEAUTH_MATRIX")
                       ->check(CLI::ExistingFile);
  auto* manifest_o = evaluate->add_option("--manifest", manifest_path, "Corpus manifest")
                         ->envname("GAZEAUTH_MANIFEST")
                         ->check(CLI::ExistingFile);
  matrix_o->excludes(manifest_o);
  model_opt(evaluate, false);
  evaluate->add_option("--enroll-session", enroll_session, "Enrollment session")->envname("GAZEAUTH_ENROLL_SESSION");
  evaluate->add_option("--verify-session", verify_session, "Verification session")->envname("GAZEAUTH_VERIFY_SESSION");
  threshold_opt(evaluate);
  evaluate->add_option("--json-out", json_out, "Also write the report JSON here")->envname("GAZEAUTH_JSON_OUT");

  auto* stimulus = app.add_subcommand("stimulus", "Print a stimulus schedule");
  stimulus->add_option("--seed", seed, "Schedule seed")->envname("GAZEAUTH_SEED");

  auto* info = app.add_subcommand("info", "Describe a model checkpoint");
  model_opt(info, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) {
      Model model;
      check(gz_model_load(model_path.c_str(), model.out()));
      ServiceHandle svc;
      check(gz_service_create(model.p, store_path.c_str(), threshold, aggregation.c_str(), svc.out()));
      int bound = 0;
      check(gz_service_bind(svc.p, host.c_str(), port, &bound));
      std::fprintf(stderr, "serving model %s on http://%s:%d\n", gz_model_id(model.p), host.c_str(), bound);
      check(gz_service_run(svc.p));
    } else if (*enroll || *verify) {
      const bool is_enroll = enroll->parsed();
      if (!url.empty()) {
        Json body{{"name", name}, {"recording", Json::parse(read_file(recording_path))}};
        int status = 0;
        const Json res = http_call(url, "POST", is_enroll ? "/api/enroll" : "/api/verify", &body, &status);
        print_remote(status, res);
      } else {
        if (model_path.empty() || store_path.empty()) throw CliError{1, "--model and --store are required without --url"};
        Model model;
        Store store;
        Recording rec;
        check(gz_model_load(model_path.c_str(), model.out()));
        check(gz_store_open(store_path.c_str(), store.out()));
        check(gz_recording_load(recording_path.c_str(), rec.out()));
        if (is_enroll) {
          std::size_t count = 0;
          check(gz_store_enroll(store.p, model.p, name.c_str(), rec.p, &count));
          std::cout << Json{{"name", name}, {"embedding_count", count}}.dump(2) << "\n";
        } else {
          Text result;
          check(gz_store_verify(store.p, model.p, name.c_str(), rec.p, threshold, aggregation.c_str(), result.out()));
          print_json(result.str());
        }
      }
    } else if (*users_cmd) {
      if (!url.empty()) {
        int status = 0;
        const Json res = delete_name.empty() ? http_call(url, "GET", "/api/users", nullptr, &status)
                                             : http_call(url, "DELETE", "/api/users/" + delete_name, nullptr, &status);
        print_remote(status, res);
      } else {
        if (store_path.empty()) throw CliError{1, "--store or --url is required"};
        Store store;
        check(gz_store_open(store_path.c_str(), store.out()));
        if (!delete_name.empty()) check(gz_store_remove(store.p, delete_name.c_str()));
        Text listing;
        check(gz_store_users_json(store.p, listing.out()));
        print_json(listing.str());
      }
    } else if (*degrade) {
      Recording in, out;
      check(gz_recording_load(recording_path.c_str(), in.out()));
      check(gz_degrade(in.p, rate, out.out()));
      check(gz_recording_save(out.p, out_path.c_str()));
      std::fprintf(stderr, "%zu samples @ %g Hz -> %zu samples @ %g Hz\n", gz_recording_size(in.p),
                   gz_recording_rate(in.p), gz_recording_size(out.p), gz_recording_rate(out.p));
      if (!velocity_out.empty()) {
        Model model;
        if (!model_path.empty()) check(gz_model_load(model_path.c_str(), model.out()));
        Text vel;
        check(gz_velocity_json(model.p ? in.p : out.p, model.p, noise_mean, noise_std, seed, vel.out()));
        write_file(velocity_out, vel.str());
      }
    } else if (*synth) {
      Text manifest;
      check(gz_synth_population(users, sessions, seed, rate, out_path.c_str(), manifest.out()));
      std::cout << manifest.str() << "\n";
    } else if (*train) {
      Json options = options_json.empty() ? Json::object() : Json::parse(options_json);
      if (epochs >= 0) options["epochs"] = epochs;
      options["fold_index"] = fold;
      if (no_augment) options["augment"] = false;
      Model model;
      Text log;
      check(gz_train(manifest_path.c_str(), options.dump().c_str(), seed, epoch_printer, nullptr, model.out(),
                     log.out()));
      check(gz_model_save(model.p, out_path.c_str()));
      if (!log_path.empty()) write_file(log_path, log.str());
      std::cout << gz_model_id(model.p) << "\n";
    } else if (*evaluate) {
      const double t = threshold;
      Text report, table;
      if (!matrix_path.empty()) {
        check(gz_evaluate_matrix(matrix_path.c_str(), t, report.out(), table.out()));
      } else if (!manifest_path.empty()) {
        if (model_path.empty()) throw CliError{1, "--model is required with --manifest"};
        Model model;
        check(gz_model_load(model_path.c_str(), model.out()));
        check(gz_evaluate_manifest(manifest_path.c_str(), model.p, enroll_session, verify_session, t, report.out(),
                                   table.out()));
      } else {
        throw CliError{1, "one of --matrix or --manifest is required"};
      }
      print_report(table.str(), report.str());
      if (!json_out.empty()) write_file(json_out, report.str());
    } else if (*stimulus) {
      Text sched;
      check(gz_stimulus_json(seed, sched.out()));
      print_json(sched.str());
    } else if (*info) {
      Model model;
      check(gz_model_load(model_path.c_str(), model.out()));
      Text text;
      check(gz_model_info_json(model.p, text.out()));
      print_json(text.str());
    }
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.exit_code == 0 ? 1 : e.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
