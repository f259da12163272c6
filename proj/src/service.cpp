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


#include "gazeauth/service.hpp"

#include <httplib.h>

#include <charconv>
#include <mutex>
#include <random>

#include "gazeauth/io.hpp"
#include "gazeauth/stimulus.hpp"

namespace gazeauth {

namespace {

void reply_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, ErrorCode code, const std::string& message, Json extra = Json::object()) {
  extra["error"] = message;
  extra["code"] = error_code_name(code);
  reply_json(res, http_status_for(code), extra);
}

struct NamedRecording {
  std::string name;
  GazeRecording recording;
};

NamedRecording parse_request(const std::string& body) {
  Json j;
  try {
    j = Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("request body is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("request body must be an object");
  if (!j.contains("name") || !j.at("name").is_string()) throw ValidationError("'name' must be a string");
  if (!j.contains("recording")) throw FormatError("missing field 'recording'");
  return {j.at("name").get<std::string>(), recording_from_json(j.at("recording"))};
}

// Runs `fn`, translating library errors into JSON error responses.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const RecordingRejectedError& e) {
    reply_error(res, e.code(), e.what(), {{"report", validation_report_to_json(e.report())}});
  } catch (const Error& e) {
    reply_error(res, e.code(), e.what());
  } catch (const std::exception& e) {
    reply_json(res, 500, {{"error", e.what()}, {"code", "internal"}});
  }
}

}  // namespace

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kModelMismatch:
      return 409;
    case ErrorCode::kValidation:
    case ErrorCode::kRecordingRejected:
    case ErrorCode::kFormat:
    case ErrorCode::kInvalidInput:
    case ErrorCode::kSignalTooShort:
    case ErrorCode::kDecimationRatio:
    case ErrorCode::kConfig:
      return 400;
    default:
      return 500;
  }
}

Service::Service(ModelParams model, TemplateStore store, ServiceConfig cfg)
    : model_(std::move(model)),
      store_(std::move(store)),
      cfg_(std::move(cfg)),
      server_(std::make_unique<httplib::Server>()),
      started_(std::chrono::steady_clock::now()) {
  cfg_.policy.check();
  // httplib's default adds SO_REUSEPORT, which lets a second instance share
  // the port and split the traffic; fail the bind instead.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  install_routes();
}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
    if (port_ < 0) throw IoError("cannot bind " + host);
  } else {
    if (!server_->bind_to_port(host, port)) throw IoError("cannot bind " + host + ":" + std::to_string(port));
    port_ = port;
  }
  return port_;
}

void Service::run() {
  if (port_ < 0) throw IoError("service is not bound");
  server_->listen_after_bind();
}

void Service::stop() {
  if (server_) server_->stop();
}

void Service::wait_until_ready() const { server_->wait_until_ready(); }

TemplateStore Service::store_snapshot() const {
  std::shared_lock lock(store_mutex_);
  return store_;
}

void Service::install_routes() {
  auto& srv = *server_;

  if (cfg_.allow_cors) {
    srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                             {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                             {"Access-Control-Allow-Headers", "Content-Type"}});
    srv.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  }

  srv.Post("/api/enroll", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const NamedRecording in = parse_request(req.body);
      const Embedding emb = process_recording(in.recording, model_, cfg_.pipeline);
      std::unique_lock lock(store_mutex_);
      const std::size_t count = store_.enroll(in.name, emb);
      reply_json(res, 201, {{"name", in.name}, {"embedding_count", count}});
    });
  });

  srv.Post("/api/verify", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto start = std::chrono::steady_clock::now();
      const NamedRecording in = parse_request(req.body);
      {
        std::shared_lock lock(store_mutex_);
        store_.lookup(in.name);
      }
      const Embedding probe = process_recording(in.recording, model_, cfg_.pipeline);
      const double embed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      VerificationResult result;
      {
        std::shared_lock lock(store_mutex_);
        result = verify_embedding(in.name, probe, store_, cfg_.policy);
      }
      reply_json(res, 200,
                 {{"name", in.name},
                  {"similarity", result.similarity},
                  {"decision", to_string(result.decision)},
                  {"threshold", result.threshold},
                  {"embed_ms", embed_ms}});
    });
  });

  srv.Get("/api/users", [this](const httplib::Request&, httplib::Response& res) {
    Json users = Json::array();
    {
      std::shared_lock lock(store_mutex_);
      for (const auto& u : store_.list_users()) users.push_back({{"name", u.name}, {"embedding_count", u.embedding_count}});
    }
    reply_json(res, 200, {{"users", std::move(users)}});
  });

  srv.Delete(R"(/api/users/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::unique_lock lock(store_mutex_);
      store_.remove(req.matches[1].str());
      res.status = 204;
    });
  });

  srv.Get("/api/stimulus", [](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::uint64_t seed = 0;
      if (req.has_param("seed")) {
        const std::string s = req.get_param_value("seed");
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
        if (ec != std::errc() || end != s.data() + s.size()) throw ValidationError("seed must be an unsigned integer");
      } else {
        seed = std::random_device{}();
      }
      reply_json(res, 200, schedule_to_json(generate_schedule(seed)));
    });
  });

  srv.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
    const double uptime = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
    reply_json(res, 200,
               {{"status", "ok"},
                {"model_id", model_.model_id},
                {"model_rate_hz", model_.config.rate_hz},
                {"threshold", cfg_.policy.threshold},
                {"aggregation", to_string(cfg_.policy.aggregation)},
                {"uptime_s", uptime}});
  });
}

}  // namespace gazeauth
