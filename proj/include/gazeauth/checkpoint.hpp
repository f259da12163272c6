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

// Model checkpoint layout:
//
//   bytes 0..7    magic "GZAUTHCK"
//   u32 LE        format version (kCheckpointVersion)
//   u32 LE        header length n
//   n bytes       UTF-8 JSON header: config, norm stats, model_id, tensor shapes
//   f64 LE ...    trainable tensors in declaration order (column-major),
//                 then running mean and running variance per layer
//
// Readers reject any other version and any payload whose recomputed
// model_id differs from the header.

#include <string>

#include "gazeauth/network.hpp"

namespace gazeauth {

inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string serialize_checkpoint(const ModelParams& params);
ModelParams deserialize_checkpoint(const std::string& bytes);

void save_checkpoint(const ModelParams& params, const std::string& path);
ModelParams load_checkpoint(const std::string& path);

}  // namespace gazeauth
