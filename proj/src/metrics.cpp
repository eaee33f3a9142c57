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

#include "pe/metrics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <unordered_map>

#include <fmt/format.h>

#include "pe/io.hpp"
#include "pe/text.hpp"

namespace pe {

// ---------------------------------------------------------------------------
// chrF

namespace {

using NgramCounts = std::unordered_map<std::u32string_view, int>;

NgramCounts char_ngrams(std::u32string_view s, std::size_t n) {
  NgramCounts counts;
  if (s.size() < n) return counts;
  for (std::size_t i = 0; i + n <= s.size(); ++i) ++counts[s.substr(i, n)];
  return counts;
}

std::u32string strip_spaces(std::string_view s) {
  std::u32string out = text::decode_utf8(s);
  std::erase_if(out, text::is_space);
  return out;
}

}  // namespace

double chrf(std::string_view hyp_text, std::string_view ref_text) {
  const std::u32string hyp = strip_spaces(hyp_text);
  const std::u32string ref = strip_spaces(ref_text);
  if (hyp.empty() && ref.empty()) return 100.0;
  if (hyp.empty() || ref.empty()) return 0.0;

  double precision_sum = 0.0;
  double recall_sum = 0.0;
  int orders = 0;
  for (std::size_t n = 1; n <= static_cast<std::size_t>(kChrfOrder); ++n) {
    NgramCounts h = char_ngrams(hyp, n);
    NgramCounts r = char_ngrams(ref, n);
    if (h.empty() && r.empty()) continue;
    long total_h = 0;
    long total_r = 0;
    long matched = 0;
    for (const auto& [g, c] : h) {
      total_h += c;
      if (auto it = r.find(g); it != r.end()) matched += std::min(c, it->second);
    }
    for (const auto& [g, c] : r) total_r += c;
    precision_sum += total_h > 0 ? static_cast<double>(matched) / static_cast<double>(total_h) : 0.0;
    recall_sum += total_r > 0 ? static_cast<double>(matched) / static_cast<double>(total_r) : 0.0;
    ++orders;
  }
  const double p = precision_sum / orders;
  const double r = recall_sum / orders;
  const double b2 = kChrfBeta * kChrfBeta;
  const double denom = b2 * p + r;
  if (denom <= 0.0) return 0.0;
  return 100.0 * (1.0 + b2) * p * r / denom;
}

// ---------------------------------------------------------------------------
// BLEU

namespace {

using WordNgrams = std::unordered_map<std::string, int>;

WordNgrams word_ngrams(const std::vector<std::string>& toks, std::size_t n) {
  WordNgrams counts;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    std::string key;
    for (std::size_t k = 0; k < n; ++k) {
      if (k) key += '\x1f';
      key += toks[i + k];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

double corpus_bleu(const std::vector<std::pair<TokenSeq, TokenSeq>>& pairs) {
  if (pairs.empty()) throw EmptyCorpus("BLEU over an empty corpus");
  constexpr std::size_t kOrder = 4;
  std::array<long, kOrder> matched{};
  std::array<long, kOrder> total{};
  long hyp_len = 0;
  long ref_len = 0;
  for (const auto& [hyp, ref] : pairs) {
    hyp_len += static_cast<long>(hyp.size());
    ref_len += static_cast<long>(ref.size());
    for (std::size_t n = 1; n <= kOrder; ++n) {
      WordNgrams h = word_ngrams(hyp.tokens, n);
      WordNgrams r = word_ngrams(ref.tokens, n);
      for (const auto& [g, c] : h) {
        total[n - 1] += c;
        if (auto it = r.find(g); it != r.end()) matched[n - 1] += std::min(c, it->second);
      }
    }
  }
  if (hyp_len == 0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t k = 0; k < kOrder; ++k) {
    double p;
    if (matched[k] > 0) {
      p = static_cast<double>(matched[k]) / static_cast<double>(total[k]);
    } else if (k == 0) {
      return 0.0;
    } else {
      p = 1.0 / static_cast<double>(total[k] + 1);
    }
    log_sum += std::log(p);
  }
  double bp = hyp_len > ref_len ? 1.0
                                : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
  return 100.0 * bp * std::exp(log_sum / kOrder);
}

// ---------------------------------------------------------------------------
// Adherence

std::string_view to_string(CloserTo c) {
  switch (c) {
    case CloserTo::kInitial: return "initial";
    case CloserTo::kZeroShot: return "zeroshot";
    case CloserTo::kTie: return "tie";
  }
  return "?";
}

CloserTo parse_closer_to(std::string_view s) {
  if (s == "initial") return CloserTo::kInitial;
  if (s == "zeroshot") return CloserTo::kZeroShot;
  if (s == "tie") return CloserTo::kTie;
  throw DataError(fmt::format("unknown closer_to value '{}'", s));
}

AdherenceRow adherence_report(const std::vector<AdherenceTriple>& triples, std::string_view lang,
                              const std::string& system, Casing casing) {
  if (triples.empty()) throw EmptyCorpus("adherence report over an empty corpus");
  std::vector<std::pair<TokenSeq, TokenSeq>> vs_zeroshot;
  std::vector<std::pair<TokenSeq, TokenSeq>> vs_initial;
  vs_zeroshot.reserve(triples.size());
  vs_initial.reserve(triples.size());
  for (const auto& t : triples) {
    TokenSeq pe = tokenize(t.improved, lang, casing);
    vs_zeroshot.emplace_back(pe, tokenize(t.zeroshot, lang, casing));
    vs_initial.emplace_back(std::move(pe), tokenize(t.initial, lang, casing));
  }
  AdherenceRow row;
  row.system = system;
  row.ter_pe_vs_zeroshot = corpus_ter(vs_zeroshot);
  row.ter_pe_vs_initial = corpus_ter(vs_initial);
  if (row.ter_pe_vs_initial < row.ter_pe_vs_zeroshot) {
    row.closer_to = CloserTo::kInitial;
  } else if (row.ter_pe_vs_zeroshot < row.ter_pe_vs_initial) {
    row.closer_to = CloserTo::kZeroShot;
  } else {
    row.closer_to = CloserTo::kTie;
  }
  return row;
}

// ---------------------------------------------------------------------------
// Histogram and external scores

namespace {

// d / w with quotients within rounding noise of an integer snapped to it,
// so 0.3 / 0.1 lands on bin 3 rather than 2.
double bin_quotient(double d, double w) {
  double q = d / w;
  double r = std::round(q);
  return std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q)) ? r : q;
}

}  // namespace

GainHistogram gain_histogram(const std::vector<double>& deltas, double bin_width) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw DataError("bin width must be positive");
  }
  if (deltas.empty()) throw EmptyCorpus("histogram over no deltas");
  for (double d : deltas) {
    if (!std::isfinite(d)) throw DataError("non-finite score delta");
  }
  auto [lo_it, hi_it] = std::minmax_element(deltas.begin(), deltas.end());
  const auto first = static_cast<long>(std::floor(bin_quotient(*lo_it, bin_width)));
  const auto last =
      std::max(first + 1, static_cast<long>(std::ceil(bin_quotient(*hi_it, bin_width))));

  GainHistogram h;
  h.bins.reserve(static_cast<std::size_t>(last - first));
  for (long k = first; k < last; ++k) {
    h.bins.push_back({static_cast<double>(k) * bin_width, static_cast<double>(k + 1) * bin_width, 0});
  }
  std::size_t nondegraded = 0;
  for (double d : deltas) {
    long k = std::clamp(static_cast<long>(std::floor(bin_quotient(d, bin_width))), first, last - 1);
    ++h.bins[static_cast<std::size_t>(k - first)].count;
    if (d >= 0.0) ++nondegraded;
  }
  h.nondegradation_fraction = static_cast<double>(nondegraded) / static_cast<double>(deltas.size());
  return h;
}

std::string histogram_to_tsv(const GainHistogram& h) {
  std::string out = "lo\thi\tcount\n";
  for (const auto& b : h.bins) out += fmt::format("{:g}\t{:g}\t{}\n", b.lo, b.hi, b.count);
  out += fmt::format("nondegradation_fraction={:g}\n", h.nondegradation_fraction);
  return out;
}

std::map<std::string, double> load_external_scores(const std::filesystem::path& path) {
  std::string content = io::read_file(path);
  std::map<std::string, double> scores;
  std::size_t lineno = 0;
  for (auto line : text::split_lines(content)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    auto cols = text::split(line, '\t');
    if (lineno == 1 && cols[0] == "segment_id") continue;
    if (cols.size() != 2) {
      throw DataError(fmt::format("line {}: expected segment_id<TAB>score", lineno));
    }
    std::string_view raw = text::trim(cols[1]);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (ec != std::errc() || ptr != raw.data() + raw.size() || raw.empty() || !std::isfinite(value)) {
      throw DataError(fmt::format("line {}: score '{}' is not a number", lineno, raw));
    }
    if (!scores.emplace(std::string(cols[0]), value).second) {
      throw DataError(fmt::format("line {}: duplicate segment id '{}'", lineno, cols[0]));
    }
  }
  return scores;
}

std::vector<double> score_deltas(const std::map<std::string, double>& initial,
                                 const std::map<std::string, double>& post_edited) {
  std::vector<double> deltas;
  deltas.reserve(initial.size());
  for (const auto& [id, before] : initial) {
    auto it = post_edited.find(id);
    if (it == post_edited.end()) throw DataError("no post-edit score for segment " + id);
    deltas.push_back(it->second - before);
  }
  if (post_edited.size() != initial.size()) {
    throw DataError("post-edit scores cover segments missing from the initial scores");
  }
  return deltas;
}

}  // namespace pe
