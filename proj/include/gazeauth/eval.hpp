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

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gazeauth/network.hpp"

namespace gazeauth {

/// Exact count ratio; comparisons cross-multiply instead of dividing.
struct Rate {
  long long num = 0;
  long long den = 1;

  double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rate& a, const Rate& b) { return a.num * b.den == b.num * a.den; }
};

/// Enroll x verify similarity grid. Cell (i, j) is genuine iff
/// enroll_subjects[i] == verify_subjects[j].
struct ScoreMatrix {
  std::vector<std::string> enroll_ids;
  std::vector<std::string> verify_ids;
  std::vector<std::string> enroll_subjects;
  std::vector<std::string> verify_subjects;
  Matrix scores;

  bool genuine(Eigen::Index i, Eigen::Index j) const { return enroll_subjects[i] == verify_subjects[j]; }
  long long genuine_count() const;
  long long impostor_count() const;
  void check() const;
};

/// Subject part of a session label: trailing digits and then trailing
/// separators (-_.:/) are removed, so "A1" -> "A" and "U03-2" -> "U03".
std::string subject_of_label(const std::string& label);

struct LabeledEmbedding {
  std::string label;
  std::string subject;
  Embedding embedding;
};

ScoreMatrix compute_matrix(std::span<const LabeledEmbedding> enrollments, std::span<const LabeledEmbedding> probes);

struct ErrorRates {
  Rate far;  // impostor cells with score >= t
  Rate frr;  // genuine cells with score < t
};

ErrorRates far_frr(const ScoreMatrix& matrix, double threshold);

/// Cells decided wrongly at `threshold`: impostors accepted and genuine
/// attempts rejected, as (enroll index, verify index).
std::vector<std::pair<Eigen::Index, Eigen::Index>> error_cells(const ScoreMatrix& matrix, double threshold);

struct CurvePoint {
  double threshold = 0.0;
  Rate far;
  Rate frr;
};

struct EvalReport {
  std::vector<CurvePoint> curve;  // ascending thresholds
  Rate eer;
  double eer_threshold = 0.0;
  /// Every threshold in (eer_threshold_lower, eer_threshold] yields the same counts.
  double eer_threshold_lower = 0.0;
  bool exact = false;  // FAR == FRR at eer_threshold
  std::vector<double> equalizing_thresholds;
  std::string convention;
  std::optional<double> operating_threshold;
  ErrorRates at_operating;
};

/// Sweeps thresholds at every distinct score plus a sentinel on each side.
/// If some threshold gives FAR == FRR exactly, the smallest one is the EER
/// point; otherwise EER = (FAR + FRR) / 2 where |FAR - FRR| is smallest,
/// ties going to the smaller threshold. Throws DegenerateMatrixError when
/// there are no genuine or no impostor cells.
EvalReport compute_eer(const ScoreMatrix& matrix, std::optional<double> operating_threshold = std::nullopt);

/// Tab/space separated table: first row verify labels, then one row per
/// enrollment label followed by its scores.
ScoreMatrix parse_matrix_table(const std::string& text);
ScoreMatrix load_matrix_table(const std::string& path);
std::string format_matrix_table(const ScoreMatrix& matrix, int precision = 4);

}  // namespace gazeauth
