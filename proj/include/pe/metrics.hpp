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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pe/error.hpp"
#include "pe/parallel.hpp"

namespace pe {

class EmptyReference : public DataError {
 public:
  using DataError::DataError;
};

class EmptyCorpus : public DataError {
 public:
  using DataError::DataError;
};

enum class Casing { kFolded, kPreserved };

struct TokenSeq {
  std::vector<std::string> tokens;
  std::string lang;
  Casing casing = Casing::kFolded;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

/// zh/ja: one token per non-space character. Other languages: whitespace
/// split, then leading and trailing punctuation characters become tokens of
/// their own.
TokenSeq tokenize(std::string_view text, std::string_view lang, Casing casing = Casing::kFolded);

// ---------------------------------------------------------------------------
// TER
//
// Edit distance with block shifts. Shifts are chosen greedily: each round
// applies the single shift that most reduces the word edit distance, until
// no shift helps. Candidate shifts follow tercom:
//   * the moved phrase (at most kMaxShiftLength words) matches the reference
//     at some position r,
//   * the phrase is not already fully matched in the hypothesis, and the
//     reference words at r are not all matched either,
//   * the word aligned to r does not lie inside the phrase,
//   * destinations are the insertion points right after the hypothesis words
//     aligned to r-1 .. r+len-2 (or the very start for r-1 = -1).
// Ties on gain prefer the longer phrase, then the leftmost origin, then the
// smallest displacement, then the leftmost destination.
// The alignment comes from a full Levenshtein traceback that prefers
// match/substitution, then hypothesis deletion, then reference insertion,
// when walking back from the end.

inline constexpr std::size_t kMaxShiftLength = 10;

struct TerStats {
  std::size_t edits = 0;   // substitutions + insertions + deletions + shifts
  std::size_t shifts = 0;
  std::size_t ref_len = 0;
};

/// Throws EmptyReference when ref is empty.
TerStats ter_stats(const TokenSeq& hyp, const TokenSeq& ref);
double ter(const TokenSeq& hyp, const TokenSeq& ref);

/// Plain word-level Levenshtein distance.
std::size_t word_edit_distance(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Total edits over total reference tokens, times 100. Throws EmptyCorpus
/// for an empty list and EmptyReference naming the pair index.
double corpus_ter(const std::vector<std::pair<TokenSeq, TokenSeq>>& pairs,
                  Execution exec = Execution::kParallel);
std::vector<TerStats> ter_stats_all(const std::vector<std::pair<TokenSeq, TokenSeq>>& pairs,
                                    Execution exec = Execution::kParallel);

// ---------------------------------------------------------------------------
// chrF / BLEU

inline constexpr int kChrfOrder = 6;
inline constexpr double kChrfBeta = 2.0;

/// Character n-gram F-score (n = 1..6, beta = 2, whitespace ignored), in
/// [0, 100]. Precision and recall are averaged over the orders for which
/// either side has at least one n-gram before combining.
double chrf(std::string_view hyp, std::string_view ref);

/// Corpus BLEU-4 with brevity penalty over pooled counts. A zero match count
/// for n >= 2 is smoothed to (0 + 1) / (total + 1).
double corpus_bleu(const std::vector<std::pair<TokenSeq, TokenSeq>>& pairs);

// ---------------------------------------------------------------------------
// Adherence

enum class CloserTo { kInitial, kZeroShot, kTie };
std::string_view to_string(CloserTo c);
CloserTo parse_closer_to(std::string_view s);

struct AdherenceRow {
  std::string system;
  double ter_pe_vs_zeroshot = 0.0;  // TER(T', Z)
  double ter_pe_vs_initial = 0.0;   // TER(T', T)
  CloserTo closer_to = CloserTo::kTie;
};

struct AdherenceTriple {
  std::string improved;  // T'
  std::string initial;   // T
  std::string zeroshot;  // Z
};

AdherenceRow adherence_report(const std::vector<AdherenceTriple>& triples, std::string_view lang,
                              const std::string& system, Casing casing = Casing::kFolded);

// ---------------------------------------------------------------------------
// Quality deltas

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

struct GainHistogram {
  std::vector<HistogramBin> bins;
  double nondegradation_fraction = 0.0;
};

/// Bins are [k*w, (k+1)*w) for consecutive k covering the data; the last
/// bin also holds a maximum that falls exactly on its upper edge.
GainHistogram gain_histogram(const std::vector<double>& deltas, double bin_width);
std::string histogram_to_tsv(const GainHistogram& h);

/// Reads `segment_id<TAB>score` rows.
std::map<std::string, double> load_external_scores(const std::filesystem::path& path);

/// pe[id] - initial[id] for every id, in id order. The two maps must cover
/// the same ids.
std::vector<double> score_deltas(const std::map<std::string, double>& initial,
                                 const std::map<std::string, double>& post_edited);

}  // namespace pe
