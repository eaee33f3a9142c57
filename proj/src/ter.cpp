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

#include <algorithm>
#include <numeric>
#include <optional>
#include <unordered_map>

#include <fmt/format.h>

#include "pe/metrics.hpp"
#include "pe/text.hpp"

namespace pe {

TokenSeq tokenize(std::string_view input, std::string_view lang, Casing casing) {
  TokenSeq seq;
  seq.lang = std::string(lang);
  seq.casing = casing;
  std::u32string chars = text::decode_utf8(input);
  if (casing == Casing::kFolded) {
    for (auto& c : chars) c = text::to_lower(c);
  }

  if (lang == "zh" || lang == "ja") {
    for (char32_t c : chars) {
      if (!text::is_space(c)) seq.tokens.push_back(text::encode_utf8(std::u32string_view(&c, 1)));
    }
    return seq;
  }

  std::size_t i = 0;
  while (i < chars.size()) {
    while (i < chars.size() && text::is_space(chars[i])) ++i;
    std::size_t b = i;
    while (i < chars.size() && !text::is_space(chars[i])) ++i;
    std::size_t e = i;
    if (b == e) break;

    std::size_t core_b = b;
    while (core_b < e && text::is_punct(chars[core_b])) ++core_b;
    std::size_t core_e = e;
    while (core_e > core_b && text::is_punct(chars[core_e - 1])) --core_e;

    for (std::size_t k = b; k < core_b; ++k) {
      seq.tokens.push_back(text::encode_utf8(std::u32string_view(&chars[k], 1)));
    }
    if (core_b < core_e) {
      seq.tokens.push_back(
          text::encode_utf8(std::u32string_view(chars.data() + core_b, core_e - core_b)));
    }
    for (std::size_t k = core_e; k < e; ++k) {
      seq.tokens.push_back(text::encode_utf8(std::u32string_view(&chars[k], 1)));
    }
  }
  return seq;
}

namespace {

using Words = std::vector<int>;

enum class TraceOp : unsigned char { kMatch, kSub, kHypExtra, kRefMissing };

struct Trace {
  std::size_t cost = 0;
  std::vector<TraceOp> ops;  // forward order
};

// Full-matrix Levenshtein with traceback; see the tie-break note in the header.
Trace levenshtein_trace(const Words& hyp, const Words& ref) {
  const std::size_t n = hyp.size();
  const std::size_t m = ref.size();
  const std::size_t w = m + 1;
  std::vector<std::size_t> d((n + 1) * w);
  for (std::size_t j = 0; j <= m; ++j) d[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    d[i * w] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t diag = d[(i - 1) * w + j - 1] + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
      std::size_t up = d[(i - 1) * w + j] + 1;
      std::size_t left = d[i * w + j - 1] + 1;
      d[i * w + j] = std::min({diag, up, left});
    }
  }
  Trace t;
  t.cost = d[n * w + m];
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    std::size_t here = d[i * w + j];
    if (i > 0 && j > 0) {
      bool same = hyp[i - 1] == ref[j - 1];
      if (d[(i - 1) * w + j - 1] + (same ? 0 : 1) == here) {
        t.ops.push_back(same ? TraceOp::kMatch : TraceOp::kSub);
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && d[(i - 1) * w + j] + 1 == here) {
      t.ops.push_back(TraceOp::kHypExtra);
      --i;
      continue;
    }
    t.ops.push_back(TraceOp::kRefMissing);
    --j;
  }
  std::reverse(t.ops.begin(), t.ops.end());
  return t;
}

// Distance only, two rows. `row` buffers are reused across calls.
std::size_t levenshtein(const Words& a, const Words& b, std::vector<std::size_t>& prev,
                        std::vector<std::size_t>& cur) {
  const std::size_t m = b.size();
  prev.resize(m + 1);
  cur.resize(m + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t diag = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({diag, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

struct AlignmentInfo {
  std::vector<long> ref_to_hyp;  // hyp index aligned to each ref word (-1 = before start)
  std::vector<char> hyp_err;
  std::vector<char> ref_err;
};

AlignmentInfo alignment_from_trace(const Trace& t, std::size_t n, std::size_t m) {
  AlignmentInfo a;
  a.ref_to_hyp.reserve(m);
  a.hyp_err.reserve(n);
  a.ref_err.reserve(m);
  long h = -1;
  for (TraceOp op : t.ops) {
    switch (op) {
      case TraceOp::kMatch:
      case TraceOp::kSub: {
        ++h;
        a.ref_to_hyp.push_back(h);
        char err = op == TraceOp::kSub ? 1 : 0;
        a.hyp_err.push_back(err);
        a.ref_err.push_back(err);
        break;
      }
      case TraceOp::kHypExtra:
        ++h;
        a.hyp_err.push_back(1);
        break;
      case TraceOp::kRefMissing:
        a.ref_to_hyp.push_back(h);
        a.ref_err.push_back(1);
        break;
    }
  }
  return a;
}

// Moves hyp[start, start+len) so it is inserted before original index dest.
// dest lies outside [start, start+len].
void apply_shift(const Words& hyp, std::size_t start, std::size_t len, std::size_t dest,
                 Words& out) {
  out.clear();
  auto b = hyp.begin();
  auto s = b + static_cast<long>(start);
  auto e = s + static_cast<long>(len);
  auto d = b + static_cast<long>(dest);
  if (dest < start) {
    out.insert(out.end(), b, d);
    out.insert(out.end(), s, e);
    out.insert(out.end(), d, s);
    out.insert(out.end(), e, hyp.end());
  } else {
    out.insert(out.end(), b, s);
    out.insert(out.end(), e, d);
    out.insert(out.end(), s, e);
    out.insert(out.end(), d, hyp.end());
  }
}

struct ShiftChoice {
  std::size_t gain = 0;
  std::size_t len = 0;
  std::size_t start = 0;
  std::size_t displacement = 0;
  std::size_t dest = 0;

  // Strict "better than" under the documented tie-break order.
  bool beats(const ShiftChoice& o) const {
    if (gain != o.gain) return gain > o.gain;
    if (len != o.len) return len > o.len;
    if (start != o.start) return start < o.start;
    if (displacement != o.displacement) return displacement < o.displacement;
    return dest < o.dest;
  }
};

TerStats ter_words(Words hyp, const Words& ref) {
  TerStats stats;
  stats.ref_len = ref.size();
  std::vector<std::size_t> row_a, row_b;
  Words shifted, best_words;

  while (true) {
    Trace trace = levenshtein_trace(hyp, ref);
    if (trace.cost == 0) {
      stats.edits = stats.shifts;
      return stats;
    }
    const std::size_t n = hyp.size();
    const std::size_t m = ref.size();
    AlignmentInfo al = alignment_from_trace(trace, n, m);

    std::optional<ShiftChoice> best;
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t r = 0; r < m; ++r) {
        std::size_t len = 0;
        bool hyp_wrong = false;
        bool ref_wrong = false;
        while (len < kMaxShiftLength && s + len < n && r + len < m && hyp[s + len] == ref[r + len]) {
          hyp_wrong = hyp_wrong || al.hyp_err[s + len];
          ref_wrong = ref_wrong || al.ref_err[r + len];
          ++len;
          if (!hyp_wrong || !ref_wrong) continue;
          long anchor = al.ref_to_hyp[r];
          if (anchor >= static_cast<long>(s) && anchor < static_cast<long>(s + len)) continue;

          std::size_t last_dest = static_cast<std::size_t>(-1);
          for (long off = -1; off < static_cast<long>(len); ++off) {
            long rr = static_cast<long>(r) + off;
            std::size_t dest = rr < 0 ? 0 : static_cast<std::size_t>(al.ref_to_hyp[rr] + 1);
            if (dest == last_dest) continue;
            last_dest = dest;
            if (dest >= s && dest <= s + len) continue;
            apply_shift(hyp, s, len, dest, shifted);
            std::size_t cost = levenshtein(shifted, ref, row_a, row_b);
            if (cost >= trace.cost) continue;
            ShiftChoice c{trace.cost - cost, len, s, dest < s ? s - dest : dest - (s + len), dest};
            if (!best || c.beats(*best)) {
              best = c;
              best_words = shifted;
            }
          }
        }
      }
    }
    if (!best) {
      stats.edits = stats.shifts + trace.cost;
      return stats;
    }
    hyp.swap(best_words);
    ++stats.shifts;
  }
}

// Interns both token lists into one id space.
std::pair<Words, Words> intern(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::unordered_map<std::string_view, int> ids;
  auto map = [&](const std::vector<std::string>& v) {
    Words w;
    w.reserve(v.size());
    for (const auto& t : v) w.push_back(ids.emplace(t, static_cast<int>(ids.size())).first->second);
    return w;
  };
  Words wa = map(a);
  Words wb = map(b);
  return {std::move(wa), std::move(wb)};
}

}  // namespace

TerStats ter_stats(const TokenSeq& hyp, const TokenSeq& ref) {
  if (ref.empty()) throw EmptyReference("TER reference is empty");
  auto [h, r] = intern(hyp.tokens, ref.tokens);
  return ter_words(std::move(h), r);
}

double ter(const TokenSeq& hyp, const TokenSeq& ref) {
  TerStats s = ter_stats(hyp, ref);
  return static_cast<double>(s.edits) / static_cast<double>(s.ref_len);
}

std::size_t word_edit_distance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  auto [wa, wb] = intern(a, b);
  std::vector<std::size_t> r1, r2;
  return levenshtein(wa, wb, r1, r2);
}

std::vector<TerStats> ter_stats_all(const std::vector<std::pair<TokenSeq, TokenSeq>>& pairs,
                                    Execution exec) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].second.empty()) {
      throw EmptyReference(fmt::format("pair {}: empty reference", i));
    }
  }
  std::vector<TerStats> stats(pairs.size());
  for_each_index(pairs.size(), exec,
                 [&](std::size_t i) { stats[i] = ter_stats(pairs[i].first, pairs[i].second); });
  return stats;
}

double corpus_ter(const std::vector<std::pair<TokenSeq, TokenSeq>>& pairs, Execution exec) {
  if (pairs.empty()) throw EmptyCorpus("corpus TER over an empty corpus");
  std::size_t edits = 0;
  std::size_t ref_len = 0;
  for (const auto& s : ter_stats_all(pairs, exec)) {
    edits += s.edits;
    ref_len += s.ref_len;
  }
  return 100.0 * static_cast<double>(edits) / static_cast<double>(ref_len);
}

}  // namespace pe
