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

#include "pe/spanedit.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "pe/text.hpp"

namespace pe {

using nlohmann::json;

std::string_view to_string(EditKind k) {
  switch (k) {
    case EditKind::kMatch: return "match";
    case EditKind::kSubstitute: return "substitute";
    case EditKind::kDelete: return "delete";
    case EditKind::kInsert: return "insert";
  }
  return "?";
}

EditKind parse_edit_kind(std::string_view s) {
  if (s == "match") return EditKind::kMatch;
  if (s == "substitute") return EditKind::kSubstitute;
  if (s == "delete") return EditKind::kDelete;
  if (s == "insert") return EditKind::kInsert;
  throw DataError(fmt::format("unknown edit kind '{}'", s));
}

std::size_t Alignment::cost() const {
  std::size_t c = 0;
  for (const auto& op : ops) {
    switch (op.kind) {
      case EditKind::kMatch: break;
      case EditKind::kSubstitute:
      case EditKind::kDelete: c += op.src_end - op.src_start; break;
      case EditKind::kInsert: c += op.dst_end - op.dst_start; break;
    }
  }
  return c;
}

Alignment align(std::string_view t, std::string_view t_prime) {
  return align(text::decode_utf8(t), text::decode_utf8(t_prime));
}

Alignment align(std::u32string_view a, std::u32string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t w = m + 1;

  // Two rolling cost rows; the traceback choice at each cell depends only on
  // its three predecessors, so it is stored as one byte per cell.
  std::vector<std::uint32_t> prev(w), cur(w);
  std::vector<EditKind> choice((n + 1) * w, EditKind::kInsert);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) choice[i * w] = EditKind::kDelete;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const bool same = a[i - 1] == b[j - 1];
      const std::uint32_t diag = prev[j - 1] + (same ? 0 : 1);
      const std::uint32_t del = prev[j] + 1;
      const std::uint32_t ins = cur[j - 1] + 1;
      const std::uint32_t best = std::min({diag, del, ins});
      cur[j] = best;
      EditKind k;
      if (diag == best) {
        k = same ? EditKind::kMatch : EditKind::kSubstitute;
      } else if (del == best) {
        k = EditKind::kDelete;
      } else {
        k = EditKind::kInsert;
      }
      choice[i * w + j] = k;
    }
    std::swap(prev, cur);
  }

  std::vector<EditKind> steps;
  steps.reserve(n + m);
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    EditKind k = choice[i * w + j];
    steps.push_back(k);
    if (k == EditKind::kMatch || k == EditKind::kSubstitute) {
      --i;
      --j;
    } else if (k == EditKind::kDelete) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(steps.begin(), steps.end());

  Alignment out;
  std::size_t si = 0;
  std::size_t di = 0;
  for (EditKind k : steps) {
    const std::size_t ds = (k == EditKind::kInsert) ? 0 : 1;
    const std::size_t dd = (k == EditKind::kDelete) ? 0 : 1;
    if (!out.ops.empty() && out.ops.back().kind == k) {
      out.ops.back().src_end += ds;
      out.ops.back().dst_end += dd;
    } else {
      out.ops.push_back({k, si, si + ds, di, di + dd});
    }
    si += ds;
    di += dd;
  }
  return out;
}

bool span_modified(const Alignment& alignment, const MqmSpan& span) {
  const std::size_t src_len = alignment.ops.empty() ? 0 : alignment.ops.back().src_end;
  if (span.start >= span.end || span.end > src_len) {
    throw DataError(fmt::format("span [{}, {}) of segment {} is outside the translation (length {})",
                                span.start, span.end, span.segment_id, src_len));
  }
  for (const auto& op : alignment.ops) {
    switch (op.kind) {
      case EditKind::kMatch:
        break;
      case EditKind::kSubstitute:
      case EditKind::kDelete:
        if (op.src_start < span.end && span.start < op.src_end) return true;
        break;
      case EditKind::kInsert:
        if (op.src_start > span.start && op.src_start < span.end) return true;
        break;
    }
  }
  return false;
}

namespace {

std::vector<const MqmSpan*> unique_spans(const E3sItem& item) {
  std::set<std::tuple<std::string, std::size_t, std::size_t>> seen;
  std::vector<const MqmSpan*> out;
  for (const auto& s : item.spans) {
    if (s.severity != Severity::kMajor) {
      throw DataError(fmt::format("segment {}: E3S takes Major spans only", item.segment_id));
    }
    if (seen.emplace(s.rater.value_or(""), s.start, s.end).second) out.push_back(&s);
  }
  return out;
}

std::optional<double> mean_score(const std::map<std::string, double>* scores,
                                 const std::vector<E3sItem>& items) {
  if (!scores) return std::nullopt;
  double sum = 0.0;
  for (const auto& item : items) {
    auto it = scores->find(item.segment_id);
    if (it == scores->end()) throw DataError("no QE score for segment " + item.segment_id);
    sum += it->second;
  }
  return items.empty() ? 0.0 : sum / static_cast<double>(items.size());
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> e3s_counts(const std::vector<E3sItem>& items,
                                                            Execution exec) {
  std::vector<std::pair<std::size_t, std::size_t>> counts(items.size());
  for_each_index(items.size(), exec, [&](std::size_t i) {
    const E3sItem& item = items[i];
    auto spans = unique_spans(item);
    if (spans.empty()) return;
    Alignment al = align(item.initial, item.improved);
    std::size_t modified = 0;
    for (const MqmSpan* s : spans) {
      try {
        if (span_modified(al, *s)) ++modified;
      } catch (const DataError& e) {
        throw DataError(fmt::format("segment {}: {}", item.segment_id, e.what()));
      }
    }
    counts[i] = {spans.size(), modified};
  });
  return counts;
}

E3sReport e3s_score(const std::vector<E3sItem>& items, const std::string& system, QeScores qe,
                    Execution exec) {
  E3sReport report;
  report.system = system;
  for (auto [total, modified] : e3s_counts(items, exec)) {
    report.spans_total += total;
    report.spans_modified += modified;
  }
  if (report.spans_total == 0) throw EmptyDenominator("no Major spans in the corpus");
  report.e3s = 100.0 * static_cast<double>(report.spans_modified) /
               static_cast<double>(report.spans_total);
  report.initial_qe = mean_score(qe.initial, items);
  report.pe_qe = mean_score(qe.post_edited, items);
  return report;
}

void to_json(json& j, const EditOp& op) {
  j = json{{"kind", to_string(op.kind)},
           {"src_start", op.src_start},
           {"src_end", op.src_end},
           {"dst_start", op.dst_start},
           {"dst_end", op.dst_end}};
}

void from_json(const json& j, EditOp& op) {
  op.kind = parse_edit_kind(j.at("kind").get<std::string>());
  j.at("src_start").get_to(op.src_start);
  j.at("src_end").get_to(op.src_end);
  j.at("dst_start").get_to(op.dst_start);
  j.at("dst_end").get_to(op.dst_end);
}

void to_json(json& j, const Alignment& a) { j = json{{"ops", a.ops}}; }
void from_json(const json& j, Alignment& a) { j.at("ops").get_to(a.ops); }

void to_json(json& j, const E3sReport& r) {
  j = json{{"system", r.system},
           {"spans_total", r.spans_total},
           {"spans_modified", r.spans_modified},
           {"e3s", r.e3s}};
  j["initial_qe"] = r.initial_qe ? json(*r.initial_qe) : json(nullptr);
  j["pe_qe"] = r.pe_qe ? json(*r.pe_qe) : json(nullptr);
}

void from_json(const json& j, E3sReport& r) {
  j.at("system").get_to(r.system);
  j.at("spans_total").get_to(r.spans_total);
  j.at("spans_modified").get_to(r.spans_modified);
  j.at("e3s").get_to(r.e3s);
  auto opt = [&](const char* key) -> std::optional<double> {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<double>();
  };
  r.initial_qe = opt("initial_qe");
  r.pe_qe = opt("pe_qe");
}

}  // namespace pe
