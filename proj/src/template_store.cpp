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

#include "gazeauth/template_store.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>

#include "gazeauth/error.hpp"

namespace gazeauth {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

TemplateStore TemplateStore::open(const std::string& path) {
  TemplateStore store;
  if (std::filesystem::exists(path)) {
    try {
      store = from_json(Json::parse(read_text_file(path)));
    } catch (const Json::parse_error& e) {
      throw FormatError(path + ": " + e.what());
    }
  }
  store.path_ = path;
  return store;
}

TemplateStore TemplateStore::from_json(const Json& j) {
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kStoreFormatVersion)
      throw FormatError("unsupported template store format_version " + std::to_string(version));
    TemplateStore store;
    store.model_id_ = j.at("model_id").get<std::string>();
    for (const auto& u : j.at("users")) {
      TemplateRecord rec;
      rec.name = u.at("name").get<std::string>();
      rec.enrolled_at = u.at("enrolled_at").get<std::vector<std::string>>();
      for (const auto& e : u.at("embeddings"))
        rec.embeddings.emplace_back(e.get<std::vector<double>>(), store.model_id_);
      if (rec.enrolled_at.size() != rec.embeddings.size())
        throw FormatError("user '" + rec.name + "' has mismatched enrolled_at and embeddings");
      if (!store.records_.emplace(rec.name, rec).second) throw FormatError("duplicate user '" + rec.name + "'");
    }
    return store;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed template store: ") + e.what());
  } catch (const InvalidInputError& e) {
    throw FormatError(std::string("malformed template store: ") + e.what());
  }
}

Json TemplateStore::to_json() const {
  Json users = Json::array();
  for (const auto& [name, rec] : records_) {
    Json embeddings = Json::array();
    for (const auto& e : rec.embeddings) embeddings.push_back(e.values());
    users.push_back({{"name", name}, {"enrolled_at", rec.enrolled_at}, {"embeddings", std::move(embeddings)}});
  }
  return {{"format_version", kStoreFormatVersion}, {"model_id", model_id_}, {"users", std::move(users)}};
}

std::size_t TemplateStore::enroll(const std::string& name, const Embedding& embedding) {
  return enroll(name, embedding, utc_timestamp());
}

std::size_t TemplateStore::enroll(const std::string& name, const Embedding& embedding, std::string enrolled_at) {
  if (name.empty()) throw ValidationError("user name must not be empty");
  if (name.size() > kMaxNameLength) throw ValidationError("user name longer than 64 characters");
  if (embedding.dim() == 0) throw ValidationError("empty embedding");
  if (!records_.empty()) {
    if (embedding.model_id() != model_id_)
      throw ModelMismatchError("embedding from model " + embedding.model_id() + " but store holds model " + model_id_);
    const auto dim = records_.begin()->second.embeddings.front().dim();
    if (embedding.dim() != dim) throw ModelMismatchError("embedding dimension differs from stored templates");
  }

  // Mutate a copy so a failed write leaves this store untouched.
  TemplateStore next = *this;
  if (next.records_.empty()) next.model_id_ = embedding.model_id();
  auto& rec = next.records_[name];
  rec.name = name;
  rec.embeddings.push_back(embedding);
  rec.enrolled_at.push_back(std::move(enrolled_at));
  const std::size_t count = rec.embeddings.size();
  next.persist();
  *this = std::move(next);
  return count;
}

const TemplateRecord& TemplateStore::lookup(const std::string& name) const {
  const auto it = records_.find(name);
  if (it == records_.end()) throw NotFoundError("no enrolled user named '" + name + "'");
  return it->second;
}

std::vector<UserSummary> TemplateStore::list_users() const {
  std::vector<UserSummary> out;
  for (const auto& [name, rec] : records_) out.push_back({name, rec.embeddings.size()});
  return out;
}

void TemplateStore::remove(const std::string& name) {
  if (!contains(name)) throw NotFoundError("no enrolled user named '" + name + "'");
  TemplateStore next = *this;
  next.records_.erase(name);
  next.persist();
  *this = std::move(next);
}

void TemplateStore::save(const std::string& path) const { write_text_file_atomic(path, to_json().dump()); }

void TemplateStore::persist() const {
  if (path_) save(*path_);
}

std::uint64_t TemplateStore::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json().dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace gazeauth
