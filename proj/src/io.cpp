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

#include "gazeauth/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gazeauth/error.hpp"

namespace fs = std::filesystem;

namespace gazeauth {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw FormatError(std::string("bad field '") + key + "': " + e.what());
  }
}

}  // namespace

Json recording_to_json(const GazeRecording& rec) {
  Json samples = Json::array();
  for (const auto& s : rec.samples) samples.push_back({{"t", s.t}, {"x_deg", s.x}, {"y_deg", s.y}, {"valid", s.valid}});
  Json meta = Json::object();
  for (const auto& [k, v] : rec.meta) meta[k] = v;
  return {{"rate_hz", rec.rate_hz}, {"samples", std::move(samples)}, {"meta", std::move(meta)}};
}

GazeRecording recording_from_json(const Json& j) {
  GazeRecording rec;
  rec.rate_hz = field<double>(j, "rate_hz");
  const Json& samples = j.contains("samples") ? j.at("samples") : throw FormatError("missing field 'samples'");
  if (!samples.is_array()) throw FormatError("'samples' must be an array");
  rec.samples.reserve(samples.size());
  for (const auto& s : samples) {
    GazeSample g;
    g.t = field<double>(s, "t");
    g.valid = s.contains("valid") ? field<bool>(s, "valid") : true;
    // invalid samples may carry null coordinates
    g.x = s.contains("x_deg") && !s.at("x_deg").is_null() ? field<double>(s, "x_deg") : NAN;
    g.y = s.contains("y_deg") && !s.at("y_deg").is_null() ? field<double>(s, "y_deg") : NAN;
    if (g.valid && (std::isnan(g.x) || std::isnan(g.y))) throw FormatError("valid sample without coordinates");
    rec.samples.push_back(g);
  }
  if (j.contains("meta")) {
    if (!j.at("meta").is_object()) throw FormatError("'meta' must be an object");
    for (const auto& [k, v] : j.at("meta").items()) rec.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
  }
  rec.check();
  return rec;
}

GazeRecording load_recording(const std::string& path) {
  try {
    return recording_from_json(Json::parse(read_text_file(path)));
  } catch (const Json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void save_recording(const GazeRecording& rec, const std::string& path) {
  write_text_file_atomic(path, recording_to_json(rec).dump());
}

Json velocity_to_json(const VelocitySequence& seq) {
  return {{"rate_hz", seq.rate_hz}, {"vx", seq.vx}, {"vy", seq.vy}, {"valid", seq.valid}};
}

Json schedule_to_json(const StimulusSchedule& sched) {
  Json targets = Json::array();
  for (const auto& t : sched.targets)
    targets.push_back({{"x_deg", t.x_deg}, {"y_deg", t.y_deg}, {"onset_s", t.onset_s}, {"duration_s", t.duration_s}});
  return {{"seed", sched.seed},
          {"period_s", sched.period_s},
          {"total_s", sched.total_s},
          {"target_diameter_deg", kTargetDiameterDeg},
          {"targets", std::move(targets)}};
}

StimulusSchedule schedule_from_json(const Json& j) {
  StimulusSchedule sched;
  sched.seed = field<std::uint64_t>(j, "seed");
  sched.period_s = field<double>(j, "period_s");
  double total = 0.0;
  for (const auto& t : field<Json>(j, "targets")) {
    StimulusTarget target{field<double>(t, "x_deg"), field<double>(t, "y_deg"), field<double>(t, "onset_s"),
                          field<double>(t, "duration_s")};
    total += target.duration_s;
    sched.targets.push_back(target);
  }
  sched.total_s = j.contains("total_s") ? field<double>(j, "total_s") : total;
  return sched;
}

Json validation_report_to_json(const ValidationReport& r) {
  return {{"pass", r.pass()},
          {"duration_s", r.duration_s},
          {"expected_duration_s", r.expected_duration_s},
          {"duration_ok", r.duration_ok},
          {"valid_fraction", r.valid_fraction},
          {"validity_ok", r.validity_ok},
          {"rate_hz", r.rate_hz},
          {"rate_ok", r.rate_ok},
          {"structure_ok", r.structure_ok},
          {"structure_error", r.structure_error}};
}

std::string Manifest::resolve(const ManifestEntry& e) const {
  const fs::path p(e.path);
  return p.is_absolute() ? p.string() : (fs::path(base_dir) / p).string();
}

Manifest load_manifest(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
  Manifest m;
  m.base_dir = fs::path(path).parent_path().string();
  for (const auto& r : field<Json>(j, "recordings"))
    m.entries.push_back({field<std::string>(r, "path"), field<std::string>(r, "user"), field<int>(r, "session")});
  return m;
}

Manifest write_corpus(const std::vector<LabeledRecording>& corpus, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  Manifest m;
  m.base_dir = dir;
  Json rows = Json::array();
  for (const auto& item : corpus) {
    ManifestEntry e{item.user + "-" + std::to_string(item.session) + ".json", item.user, item.session};
    save_recording(item.recording, m.resolve(e));
    rows.push_back({{"path", e.path}, {"user", e.user}, {"session", e.session}});
    m.entries.push_back(std::move(e));
  }
  write_text_file_atomic((fs::path(dir) / "manifest.json").string(),
                         Json{{"format_version", 1}, {"recordings", rows}}.dump(2));
  return m;
}

std::vector<LabeledRecording> load_corpus(const Manifest& manifest) {
  std::vector<LabeledRecording> corpus;
  for (const auto& e : manifest.entries) corpus.push_back({e.user, e.session, load_recording(manifest.resolve(e))});
  return corpus;
}

Json rate_to_json(const Rate& r) { return {{"num", r.num}, {"den", r.den}, {"value", r.value()}}; }

Json matrix_to_json(const ScoreMatrix& m) {
  Json scores = Json::array();
  for (Eigen::Index i = 0; i < m.scores.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.scores.cols(); ++j) row.push_back(m.scores(i, j));
    scores.push_back(std::move(row));
  }
  return {{"enroll_ids", m.enroll_ids}, {"verify_ids", m.verify_ids}, {"scores", std::move(scores)}};
}

Json report_to_json(const EvalReport& report, const ScoreMatrix& matrix) {
  Json curve = Json::array();
  for (const auto& p : report.curve)
    curve.push_back({{"threshold", p.threshold}, {"far", p.far.value()}, {"frr", p.frr.value()}});
  auto finite_or_null = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  Json j{{"eer", rate_to_json(report.eer)},
         {"eer_threshold", report.eer_threshold},
         {"eer_threshold_lower_exclusive", finite_or_null(report.eer_threshold_lower)},
         {"exact", report.exact},
         {"equalizing_thresholds", report.equalizing_thresholds},
         {"convention", report.convention},
         {"genuine_count", matrix.genuine_count()},
         {"impostor_count", matrix.impostor_count()},
         {"curve", std::move(curve)},
         {"matrix", matrix_to_json(matrix)}};
  if (report.operating_threshold) {
    Json cells = Json::array();
    for (const auto& [i, k] : error_cells(matrix, *report.operating_threshold))
      cells.push_back({{"enroll", matrix.enroll_ids[i]}, {"verify", matrix.verify_ids[k]},
                       {"score", matrix.scores(i, k)}, {"genuine", matrix.genuine(i, k)}});
    j["operating_point"] = {{"threshold", *report.operating_threshold},
                            {"far", rate_to_json(report.at_operating.far)},
                            {"frr", rate_to_json(report.at_operating.frr)},
                            {"error_cells", std::move(cells)}};
  }
  return j;
}

Json train_log_to_json(const std::vector<EpochLog>& log) {
  Json rows = Json::array();
  for (const auto& e : log) {
    rows.push_back({{"epoch", e.epoch},
                    {"train_loss", e.train_loss},
                    {"val_loss", std::isfinite(e.val_loss) ? Json(e.val_loss) : Json(nullptr)},
                    {"lr", e.lr}});
  }
  return rows;
}

Json network_config_to_json(const NetworkConfig& c) {
  return {{"n_conv_layers", c.n_conv_layers},   {"filters_per_layer", c.filters_per_layer},
          {"kernel_size", c.kernel_size},       {"dilations", c.dilations},
          {"embedding_dim", c.embedding_dim},   {"input_len", c.input_len},
          {"input_channels", c.input_channels}, {"rate_hz", c.rate_hz}};
}

NetworkConfig network_config_from_json(const Json& j) {
  NetworkConfig c;
  c.n_conv_layers = field<int>(j, "n_conv_layers");
  c.filters_per_layer = field<int>(j, "filters_per_layer");
  c.kernel_size = field<int>(j, "kernel_size");
  c.dilations = field<std::vector<int>>(j, "dilations");
  c.embedding_dim = field<int>(j, "embedding_dim");
  c.input_len = field<int>(j, "input_len");
  c.input_channels = field<int>(j, "input_channels");
  c.rate_hz = field<double>(j, "rate_hz");
  c.check();
  return c;
}

Json norm_stats_to_json(const NormStats& s) {
  return {{"mean", {s.mean_x, s.mean_y}}, {"std", {s.std_x, s.std_y}}};
}

NormStats norm_stats_from_json(const Json& j) {
  const auto mean = field<std::vector<double>>(j, "mean");
  const auto std = field<std::vector<double>>(j, "std");
  if (mean.size() != 2 || std.size() != 2) throw FormatError("normalization stats need two channels");
  return NormStats{mean[0], mean[1], std[0], std[1]};
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file_atomic(const std::string& path, const std::string& text) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + tmp.string());
    f << text;
    f.flush();
    if (!f) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot replace " + path + ": " + ec.message());
}

}  // namespace gazeauth
