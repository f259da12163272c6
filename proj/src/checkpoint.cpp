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

#include "gazeauth/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "gazeauth/error.hpp"
#include "gazeauth/io.hpp"
#include "gazeauth/trainer.hpp"

namespace gazeauth {

namespace {

constexpr char kMagic[8] = {'G', 'Z', 'A', 'U', 'T', 'H', 'C', 'K'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  const char* take(std::size_t n) {
    if (pos_ + n > bytes_.size()) throw FormatError("checkpoint is truncated");
    const char* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::uint32_t u32() {
    const auto* p = reinterpret_cast<const unsigned char*>(take(4));
    return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
  }
  double f64() {
    const auto* p = reinterpret_cast<const unsigned char*>(take(8));
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
    return std::bit_cast<double>(bits);
  }
  void fill(Matrix& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = f64();
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_checkpoint(const ModelParams& params) {
  Json shapes = Json::array();
  for (std::size_t t = 0; t < params.tensors.size(); ++t)
    shapes.push_back({{"name", tensor_name(params.config, t)},
                      {"rows", params.tensors[t].rows()},
                      {"cols", params.tensors[t].cols()}});
  const Json header{{"format_version", kCheckpointVersion},
                    {"config", network_config_to_json(params.config)},
                    {"norm_stats", norm_stats_to_json(params.norm)},
                    {"model_id", params.model_id},
                    {"tensors", std::move(shapes)}};
  const std::string header_text = header.dump();

  std::string out(kMagic, sizeof(kMagic));
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(header_text.size()));
  out += header_text;
  auto put_matrix = [&](const auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) put_f64(out, m.data()[i]);
  };
  for (const auto& t : params.tensors) put_matrix(t);
  for (int l = 0; l < params.config.n_conv_layers; ++l) {
    put_matrix(params.running_mean[l]);
    put_matrix(params.running_var[l]);
  }
  return out;
}

ModelParams deserialize_checkpoint(const std::string& bytes) {
  Reader in(bytes);
  if (std::memcmp(in.take(sizeof(kMagic)), kMagic, sizeof(kMagic)) != 0) throw FormatError("not a model checkpoint");
  const std::uint32_t version = in.u32();
  if (version != kCheckpointVersion)
    throw FormatError("unsupported checkpoint format version " + std::to_string(version));
  const std::uint32_t header_len = in.u32();
  Json header;
  try {
    header = Json::parse(std::string(in.take(header_len), header_len));
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("corrupt checkpoint header: ") + e.what());
  }
  if (header.value("format_version", 0U) != kCheckpointVersion) throw FormatError("checkpoint header version mismatch");

  // Shapes follow from the config; init_params builds them.
  ModelParams params = init_params(network_config_from_json(header.at("config")), 0);
  params.norm = norm_stats_from_json(header.at("norm_stats"));
  for (auto& t : params.tensors) in.fill(t);
  for (int l = 0; l < params.config.n_conv_layers; ++l) {
    Matrix mean(params.config.filters_per_layer, 1), var(params.config.filters_per_layer, 1);
    in.fill(mean);
    in.fill(var);
    params.running_mean[l] = mean.col(0);
    params.running_var[l] = var.col(0);
  }
  if (!in.done()) throw FormatError("trailing bytes after checkpoint payload");
  for (const auto& t : params.tensors)
    if (!t.allFinite()) throw FormatError("checkpoint contains non-finite parameters");

  params.refresh_id();
  const auto stored_id = header.value("model_id", std::string());
  if (stored_id != params.model_id)
    throw FormatError("checkpoint model_id " + stored_id + " does not match its contents (" + params.model_id + ")");
  return params;
}

void save_checkpoint(const ModelParams& params, const std::string& path) {
  write_text_file_atomic(path, serialize_checkpoint(params));
}

ModelParams load_checkpoint(const std::string& path) { return deserialize_checkpoint(read_text_file(path)); }

}  // namespace gazeauth
