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


#pragma once

#include <chrono>
#include <memory>
#include <shared_mutex>
#include <string>

#include "gazeauth/auth.hpp"
#include "gazeauth/error.hpp"

namespace httplib {
class Server;
}

namespace gazeauth {

/// HTTP status for an error code: 400 for bad input, 404 unknown user,
/// 409 model mismatch, 500 otherwise.
int http_status_for(ErrorCode code);

struct ServiceConfig {
  DecisionPolicy policy;
  PipelineConfig pipeline;
  bool allow_cors = true;  // the browser demo is served from another origin
};

/// Enrollment/verification REST service over a shared read-only model and
/// a single-writer template store.
///
///   POST   /api/enroll        {name, recording} -> 201 {name, embedding_count}
///   POST   /api/verify        {name, recording} -> 200 {similarity, decision, threshold, embed_ms}
///   GET    /api/users         -> {users: [{name, embedding_count}]}
///   DELETE /api/users/{name}  -> 204 | 404
///   GET    /api/stimulus?seed=S
///   GET    /api/health
///
/// Errors come back as {error, code} with the status from http_status_for.
class Service {
 public:
  Service(ModelParams model, TemplateStore store, ServiceConfig cfg = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds host:port; port 0 picks a free one. Returns the bound port.
  /// Throws IoError if binding fails.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Requires a prior bind().
  void run();
  void stop();
  /// Blocks until run() is accepting connections.
  void wait_until_ready() const;
  int port() const { return port_; }

  const ModelParams& model() const { return model_; }
  /// Copy of the store taken under the read lock.
  TemplateStore store_snapshot() const;

 private:
  void install_routes();

  ModelParams model_;
  TemplateStore store_;
  ServiceConfig cfg_;
  mutable std::shared_mutex store_mutex_;
  std::unique_ptr<httplib::Server> server_;
  std::chrono::steady_clock::time_point started_;
  int port_ = -1;
};

}  // namespace gazeauth
