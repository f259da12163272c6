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

#include <stdexcept>
#include <string>

namespace gazeauth {

/// Error categories. Values are mirrored one-to-one by the C API status codes.
enum class ErrorCode : int {
  kConfig = 1,
  kDecimationRatio,
  kSignalTooShort,
  kDegenerateCorpus,
  kInputTooShort,
  kInvalidInput,
  kDegenerateBatch,
  kData,
  kModelMismatch,
  kValidation,
  kNotFound,
  kRecordingRejected,
  kDegenerateMatrix,
  kProtocol,
  kFormat,
  kIo,
};

/// Stable snake_case name, used in HTTP and C API error payloads.
inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kDecimationRatio: return "decimation_ratio";
    case ErrorCode::kSignalTooShort: return "signal_too_short";
    case ErrorCode::kDegenerateCorpus: return "degenerate_corpus";
    case ErrorCode::kInputTooShort: return "input_too_short";
    case ErrorCode::kInvalidInput: return "invalid_input";
    case ErrorCode::kDegenerateBatch: return "degenerate_batch";
    case ErrorCode::kData: return "data";
    case ErrorCode::kModelMismatch: return "model_mismatch";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kRecordingRejected: return "recording_rejected";
    case ErrorCode::kDegenerateMatrix: return "degenerate_matrix";
    case ErrorCode::kProtocol: return "protocol";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define GAZEAUTH_DEFINE_ERROR(Name, Code)                                            \
  class Name : public Error {                                                        \
   public:                                                                           \
    explicit Name(const std::string& what) : Error(ErrorCode::Code, what) {}        \
  };

GAZEAUTH_DEFINE_ERROR(ConfigError, kConfig)
GAZEAUTH_DEFINE_ERROR(DecimationRatioError, kDecimationRatio)
GAZEAUTH_DEFINE_ERROR(SignalTooShortError, kSignalTooShort)
GAZEAUTH_DEFINE_ERROR(DegenerateCorpusError, kDegenerateCorpus)
GAZEAUTH_DEFINE_ERROR(InputTooShortError, kInputTooShort)
GAZEAUTH_DEFINE_ERROR(InvalidInputError, kInvalidInput)
GAZEAUTH_DEFINE_ERROR(DegenerateBatchError, kDegenerateBatch)
GAZEAUTH_DEFINE_ERROR(DataError, kData)
GAZEAUTH_DEFINE_ERROR(ModelMismatchError, kModelMismatch)
GAZEAUTH_DEFINE_ERROR(ValidationError, kValidation)
GAZEAUTH_DEFINE_ERROR(NotFoundError, kNotFound)
GAZEAUTH_DEFINE_ERROR(DegenerateMatrixError, kDegenerateMatrix)
GAZEAUTH_DEFINE_ERROR(ProtocolError, kProtocol)
GAZEAUTH_DEFINE_ERROR(FormatError, kFormat)
GAZEAUTH_DEFINE_ERROR(IoError, kIo)

#undef GAZEAUTH_DEFINE_ERROR

// RecordingRejectedError lives in stimulus.hpp since it carries a ValidationReport.

}  // namespace gazeauth
