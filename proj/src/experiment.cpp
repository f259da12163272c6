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


#include "gazeauth/experiment.hpp"

#include <map>
#include <set>

#include "gazeauth/error.hpp"

namespace gazeauth {

std::vector<LabeledSequence> to_training_sequences(const std::vector<LabeledRecording>& corpus,
                                                   double model_rate_hz) {
  std::vector<LabeledSequence> out;
  out.reserve(corpus.size());
  for (const auto& item : corpus) out.push_back({item.user, prepare_velocity(item.recording, model_rate_hz)});
  return out;
}

EndToEndResult end_to_end_eval(const std::vector<LabeledRecording>& corpus, const ModelParams& model,
                               int enroll_session, int verify_session, const PipelineConfig& pipeline,
                               std::optional<double> operating_threshold) {
  std::map<std::pair<std::string, int>, const LabeledRecording*> by_key;
  std::set<std::string> users;
  for (const auto& item : corpus) {
    users.insert(item.user);
    if (!by_key.emplace(std::make_pair(item.user, item.session), &item).second)
      throw ProtocolError("duplicate recording for " + item.user + " session " + std::to_string(item.session));
  }
  if (users.empty()) throw ProtocolError("empty corpus");

  std::vector<LabeledEmbedding> enrollments, probes;
  auto embed = [&](const std::string& user, int session, std::vector<LabeledEmbedding>& dst) {
    const auto it = by_key.find({user, session});
    if (it == by_key.end()) throw ProtocolError("user " + user + " has no session " + std::to_string(session));
    dst.push_back({user + "-" + std::to_string(session), user, process_recording(it->second->recording, model, pipeline)});
  };
  // std::set iterates in sorted order, so rows and columns come out sorted.
  for (const auto& user : users) {
    embed(user, enroll_session, enrollments);
    embed(user, verify_session, probes);
  }

  EndToEndResult result;
  result.matrix = compute_matrix(enrollments, probes);
  result.report = compute_eer(result.matrix, operating_threshold);
  return result;
}

EndToEndResult end_to_end_eval(const Manifest& manifest, const ModelParams& model, int enroll_session,
                               int verify_session, const PipelineConfig& pipeline,
                               std::optional<double> operating_threshold) {
  return end_to_end_eval(load_corpus(manifest), model, enroll_session, verify_session, pipeline, operating_threshold);
}

}  // namespace gazeauth
