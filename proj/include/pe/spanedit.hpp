// Copyright 2026 The Post-Edit Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pe/corpus.hpp"
#include "pe/error.hpp"
#include "pe/parallel.hpp"

namespace pe {

class EmptyDenominator : public DataError {
 public:
  using DataError::DataError;
};

enum class EditKind : unsigned char { kMatch, kSubstitute, kDelete, kInsert };

std::string_view to_string(EditKind k);
EditKind parse_edit_kind(std::string_view s);

/// A run of one edit kind. Offsets are Unicode scalar values; src indexes
/// the initial translation T, dst the post-edited T'.
struct EditOp {
  EditKind kind = EditKind::kMatch;
  std::size_t src_start = 0;
  std::size_t src_end = 0;
  std::size_t dst_start = 0;
  std::size_t dst_end = 0;

  bool operator==(const EditOp&) const = default;
};

/// Character-level edit script from T to T'. Consecutive ops of the same
/// kind are merged.
struct Alignment {
  std::vector<EditOp> ops;

  /// Unit-cost edit count (characters substituted, deleted or inserted).
  std::size_t cost() const;
  bool operator==(const Alignment&) const = default;
};

/// Minimum-cost alignment. When several scripts have the same cost, the
/// traceback (walking back from the end) prefers match, then substitute,
/// then delete, then insert.
Alignment align(std::string_view t, std::string_view t_prime);
Alignment align(std::u32string_view t, std::u32string_view t_prime);

/// True if a character in [span.start, span.end) is substituted or
/// deleted, or an insertion lies strictly inside the span. Insertions at
/// the span boundary do not count. Throws DataError when the span does not
/// fit the alignment's source side.
bool span_modified(const Alignment& alignment, const MqmSpan& span);

struct E3sItem {
  std::string segment_id;
  std::string initial;   // T
  std::string improved;  // T'
  std::vector<MqmSpan> spans;
};

struct E3sReport {
  std::string system;
  std::size_t spans_total = 0;
  std::size_t spans_modified = 0;
  double e3s = 0.0;
  std::optional<double> initial_qe;
  std::optional<double> pe_qe;
};

struct QeScores {
  const std::map<std::string, double>* initial = nullptr;
  const std::map<std::string, double>* post_edited = nullptr;
};

/// Percentage of Major spans modified by the post-edit. Spans repeated with
/// the same (rater, start, end) on a segment count once. When QE score maps
/// are given, the report carries the mean QE of the items' segments.
/// Throws EmptyDenominator when there are no Major spans.
E3sReport e3s_score(const std::vector<E3sItem>& items, const std::string& system,
                    QeScores qe = {}, Execution exec = Execution::kParallel);

/// Per-item (total, modified) span counts after de-duplication.
std::vector<std::pair<std::size_t, std::size_t>> e3s_counts(const std::vector<E3sItem>& items,
                                                            Execution exec);

void to_json(nlohmann::json& j, const EditOp& op);
void from_json(const nlohmann::json& j, EditOp& op);
void to_json(nlohmann::json& j, const Alignment& a);
void from_json(const nlohmann::json& j, Alignment& a);
void to_json(nlohmann::json& j, const E3sReport& r);
void from_json(const nlohmann::json& j, E3sReport& r);

}  // namespace pe
