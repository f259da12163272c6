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

#include "gazeauth/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string_view>

#include "gazeauth/error.hpp"

namespace gazeauth {

long long ScoreMatrix::genuine_count() const {
  long long n = 0;
  for (Eigen::Index i = 0; i < scores.rows(); ++i)
    for (Eigen::Index j = 0; j < scores.cols(); ++j) n += genuine(i, j);
  return n;
}

long long ScoreMatrix::impostor_count() const { return static_cast<long long>(scores.size()) - genuine_count(); }

void ScoreMatrix::check() const {
  if (enroll_ids.size() != static_cast<std::size_t>(scores.rows()) ||
      verify_ids.size() != static_cast<std::size_t>(scores.cols()) || enroll_subjects.size() != enroll_ids.size() ||
      verify_subjects.size() != verify_ids.size())
    throw FormatError("score matrix labels do not match its shape");
  if (!scores.allFinite()) throw FormatError("score matrix contains non-finite values");
}

std::string subject_of_label(const std::string& label) {
  std::string s = label;
  while (!s.empty() && std::isdigit(static_cast<unsigned char>(s.back()))) s.pop_back();
  while (!s.empty() && std::string_view("-_.:/").find(s.back()) != std::string_view::npos) s.pop_back();
  return s.empty() ? label : s;
}

ScoreMatrix compute_matrix(std::span<const LabeledEmbedding> enrollments, std::span<const LabeledEmbedding> probes) {
  if (enrollments.empty() || probes.empty()) throw InvalidInputError("compute_matrix needs enrollments and probes");
  const std::string& model = enrollments.front().embedding.model_id();
  ScoreMatrix m;
  m.scores.resize(static_cast<Eigen::Index>(enrollments.size()), static_cast<Eigen::Index>(probes.size()));
  for (const auto* side : {&enrollments, &probes}) {
    for (const auto& e : *side) {
      if (e.embedding.model_id() != model) throw ModelMismatchError("embeddings come from different models");
      if (e.embedding.dim() != enrollments.front().embedding.dim())
        throw ModelMismatchError("embeddings differ in dimension");
    }
  }
  for (const auto& e : enrollments) {
    m.enroll_ids.push_back(e.label);
    m.enroll_subjects.push_back(e.subject);
  }
  for (const auto& p : probes) {
    m.verify_ids.push_back(p.label);
    m.verify_subjects.push_back(p.subject);
  }
  for (std::size_t i = 0; i < enrollments.size(); ++i) {
    const auto& a = enrollments[i].embedding.values();
    for (std::size_t j = 0; j < probes.size(); ++j) {
      const auto& b = probes[j].embedding.values();
      double dot = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
      m.scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = dot;
    }
  }
  return m;
}

ErrorRates far_frr(const ScoreMatrix& matrix, double threshold) {
  ErrorRates r;
  r.far.den = r.frr.den = 0;
  for (Eigen::Index i = 0; i < matrix.scores.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.scores.cols(); ++j) {
      const double s = matrix.scores(i, j);
      if (matrix.genuine(i, j)) {
        ++r.frr.den;
        r.frr.num += s < threshold;
      } else {
        ++r.far.den;
        r.far.num += s >= threshold;
      }
    }
  }
  return r;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> error_cells(const ScoreMatrix& matrix, double threshold) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> cells;
  for (Eigen::Index i = 0; i < matrix.scores.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.scores.cols(); ++j) {
      const bool accepted = matrix.scores(i, j) >= threshold;
      if (accepted != matrix.genuine(i, j)) cells.emplace_back(i, j);
    }
  }
  return cells;
}

EvalReport compute_eer(const ScoreMatrix& matrix, std::optional<double> operating_threshold) {
  matrix.check();
  const long long n_gen = matrix.genuine_count();
  const long long n_imp = matrix.impostor_count();
  if (n_gen == 0) throw DegenerateMatrixError("score matrix has no genuine cells");
  if (n_imp == 0) throw DegenerateMatrixError("score matrix has no impostor cells");

  std::vector<double> candidates(matrix.scores.data(), matrix.scores.data() + matrix.scores.size());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  const double inf = std::numeric_limits<double>::infinity();
  candidates.insert(candidates.begin(), std::nextafter(candidates.front(), -inf));
  candidates.push_back(std::nextafter(candidates.back(), inf));

  EvalReport report;
  report.curve.reserve(candidates.size());
  for (double t : candidates) {
    const ErrorRates r = far_frr(matrix, t);
    report.curve.push_back({t, r.far, r.frr});
  }

  // |FAR - FRR| in units of 1 / (n_imp * n_gen), exact in integers.
  auto gap = [&](const CurvePoint& p) { return std::llabs(p.far.num * n_gen - p.frr.num * n_imp); };
  std::size_t best = 0;
  for (std::size_t k = 1; k < report.curve.size(); ++k)
    if (gap(report.curve[k]) < gap(report.curve[best])) best = k;

  const CurvePoint& p = report.curve[best];
  report.eer_threshold = p.threshold;
  report.eer_threshold_lower = best > 0 ? report.curve[best - 1].threshold : -inf;
  report.exact = gap(p) == 0;
  if (report.exact) {
    report.eer = p.far;
    report.convention = "exact: FAR == FRR at the smallest such threshold; accept iff score >= threshold";
  } else {
    report.eer = Rate{p.far.num * n_gen + p.frr.num * n_imp, 2 * n_imp * n_gen};
    report.convention =
        "midpoint: (FAR + FRR) / 2 at the threshold minimizing |FAR - FRR| (ties to the smaller threshold); "
        "accept iff score >= threshold";
  }
  for (const auto& c : report.curve)
    if (gap(c) == 0) report.equalizing_thresholds.push_back(c.threshold);

  if (operating_threshold) {
    report.operating_threshold = operating_threshold;
    report.at_operating = far_frr(matrix, *operating_threshold);
  }
  return report;
}

ScoreMatrix parse_matrix_table(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::vector<std::string>> lines;
  for (std::string line; std::getline(in, line);) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> fields;
    for (std::string f; ls >> f;) fields.push_back(f);
    if (!fields.empty()) lines.push_back(std::move(fields));
  }
  if (lines.size() < 2) throw FormatError("score matrix table needs a header row and at least one score row");

  ScoreMatrix m;
  const std::size_t n_scores = lines[1].size() - 1;
  m.verify_ids = lines[0];
  // optional corner cell such as "Enroll\Verify"
  if (m.verify_ids.size() == n_scores + 1) m.verify_ids.erase(m.verify_ids.begin());
  if (n_scores == 0 || m.verify_ids.size() != n_scores)
    throw FormatError("score matrix header has " + std::to_string(m.verify_ids.size()) + " labels for " +
                      std::to_string(n_scores) + " score columns");

  m.scores.resize(static_cast<Eigen::Index>(lines.size() - 1), static_cast<Eigen::Index>(n_scores));
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto& fields = lines[r];
    if (fields.size() != n_scores + 1)
      throw FormatError("matrix row '" + fields.front() + "' has " + std::to_string(fields.size() - 1) +
                        " scores, expected " + std::to_string(n_scores));
    m.enroll_ids.push_back(fields.front());
    for (std::size_t k = 1; k < fields.size(); ++k) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(fields[k], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != fields[k].size()) throw FormatError("not a number in score matrix: " + fields[k]);
      m.scores(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(k - 1)) = v;
    }
  }
  for (const auto& id : m.enroll_ids) m.enroll_subjects.push_back(subject_of_label(id));
  for (const auto& id : m.verify_ids) m.verify_subjects.push_back(subject_of_label(id));
  m.check();
  return m;
}

ScoreMatrix load_matrix_table(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open score matrix " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_matrix_table(ss.str());
}

std::string format_matrix_table(const ScoreMatrix& matrix, int precision) {
  std::size_t width = std::string("Enroll\\Verify").size();
  for (const auto& id : matrix.enroll_ids) width = std::max(width, id.size());
  const std::size_t cell = std::max<std::size_t>(precision + 4, 8);
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(width)) << "Enroll\\Verify";
  for (const auto& id : matrix.verify_ids) os << ' ' << std::right << std::setw(static_cast<int>(cell)) << id;
  os << '\n';
  os << std::fixed << std::setprecision(precision);
  for (Eigen::Index i = 0; i < matrix.scores.rows(); ++i) {
    os << std::left << std::setw(static_cast<int>(width)) << matrix.enroll_ids[i];
    for (Eigen::Index j = 0; j < matrix.scores.cols(); ++j)
      os << ' ' << std::right << std::setw(static_cast<int>(cell)) << matrix.scores(i, j);
    os << '\n';
  }
  return os.str();
}

}  // namespace gazeauth
