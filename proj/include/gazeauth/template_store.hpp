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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gazeauth/io.hpp"
#include "gazeauth/network.hpp"

namespace gazeauth {

inline constexpr int kStoreFormatVersion = 1;
inline constexpr std::size_t kMaxNameLength = 64;

struct TemplateRecord {
  std::string name;
  std::vector<Embedding> embeddings;
  std::vector<std::string> enrolled_at;  // ISO-8601 UTC, one per embedding

  bool operator==(const TemplateRecord&) const = default;
};

struct UserSummary {
  std::string name;
  std::size_t embedding_count = 0;
};

/// Enrollment database. A store holds templates from exactly one model;
/// an empty store adopts the model of its first enrollment. When bound to
/// a file, every mutation is persisted with write-new-then-rename.
///
/// Not internally synchronized; the service serializes writers.
class TemplateStore {
 public:
  TemplateStore() = default;

  /// Opens `path`, or starts an empty store bound to it if it does not exist.
  static TemplateStore open(const std::string& path);
  static TemplateStore from_json(const Json& j);
  Json to_json() const;

  /// Appends `embedding` under `name` and returns the new count.
  /// Throws ValidationError (bad name) or ModelMismatchError.
  std::size_t enroll(const std::string& name, const Embedding& embedding);
  std::size_t enroll(const std::string& name, const Embedding& embedding, std::string enrolled_at);

  /// Throws NotFoundError.
  const TemplateRecord& lookup(const std::string& name) const;
  bool contains(const std::string& name) const { return records_.count(name) != 0; }
  std::vector<UserSummary> list_users() const;
  /// Throws NotFoundError for an absent name.
  void remove(const std::string& name);

  const std::string& model_id() const { return model_id_; }
  bool empty() const { return records_.empty(); }
  const std::optional<std::string>& path() const { return path_; }

  void save(const std::string& path) const;
  /// FNV-1a of the serialized contents.
  std::uint64_t content_hash() const;

  bool operator==(const TemplateStore& other) const {
    return model_id_ == other.model_id_ && records_ == other.records_;
  }

 private:
  void persist() const;

  std::map<std::string, TemplateRecord> records_;
  std::string model_id_;
  std::optional<std::string> path_;
};

/// Current UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

}  // namespace gazeauth
