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


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are fixed here and nowhere else.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pe/err.hpp"
#include "pe/metrics.hpp"
#include "pe/pipeline.hpp"
#include "pe/prompting.hpp"
#include "pe/spanedit.hpp"
#include "pe/text.hpp"
#include "test_util.hpp"

namespace {

using namespace pe;

constexpr double kChrfTolerance = 1e-9;
constexpr double kTerOracleBudgetSeconds = 10.0;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) {
      pass = false;
      detail = what;
    }
  }
};

TokenSeq toks(oracle::Toks t) { return {std::move(t), "en", Casing::kFolded}; }

Verdict ter_oracle_equivalence() {
  Verdict v;
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(2024);
  for (int i = 0; i < 200 && v.pass; ++i) {
    auto hyp = oracle::random_tokens(rng, 8, 5);
    auto ref = oracle::random_tokens(rng, 8, 5, 1);
    std::size_t got = ter_stats(toks(hyp), toks(ref)).edits;
    int want = oracle::ter_edits(hyp, ref);
    v.require(static_cast<int>(got) == want,
              fmt::format("pair {}: edits {} vs oracle {} ({} | {})", i, got, want,
                          testutil::join(hyp), testutil::join(ref)));
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.require(secs < kTerOracleBudgetSeconds, fmt::format("took {:.2f}s", secs));
  if (v.pass) v.detail = fmt::format("200 pairs in {:.3f}s", secs);
  return v;
}

Verdict ter_bounds() {
  Verdict v;
  std::mt19937 rng(77);
  for (int i = 0; i < 500 && v.pass; ++i) {
    auto hyp = oracle::random_tokens(rng, 12, 6);
    auto ref = oracle::random_tokens(rng, 12, 6, 1);
    TerStats s = ter_stats(toks(hyp), toks(ref));
    int lev = oracle::levenshtein(hyp, ref);
    double t = ter(toks(hyp), toks(ref));
    v.require(t >= 0.0 && static_cast<int>(s.edits) <= lev,
              fmt::format("pair {}: edits {} > levenshtein {}", i, s.edits, lev));
    v.require(t <= static_cast<double>(lev) / static_cast<double>(ref.size()),
              fmt::format("pair {}: TER {} above bound", i, t));
    v.require(ter(toks(ref), toks(ref)) == 0.0, fmt::format("pair {}: TER(x,x) != 0", i));
  }
  if (v.pass) v.detail = "500 pairs";
  return v;
}

Verdict parser_fixtures() {
  Verdict v;
  auto four = parse_postedit_output(fixtures::read_fixture("cot_reply_four_edits.txt"), PromptMode::kCot);
  v.require(four.edits.size() == 4, fmt::format("{} edits, want 4", four.edits.size()));
  const std::string improved =
      "Sie waren an ihren Sohn gerichtet, der Autismus hat und in einer privaten "
      "Pflegeeinrichtung lebt, sagte sie. Aber anstelle des Namens ihres Sohnes im Inneren, "
      "als Sie sie öffneten, hieß es in den Briefen \"Sehr geehrtes Department of Health and "
      "Human Services von Maine\" - in Cincinnati, sagte sie den lokalen Medien.";
  v.require(four.improved == improved, "improved translation differs: " + four.improved);
  auto five = parse_postedit_output(fixtures::read_fixture("cot_reply_five_edits.txt"), PromptMode::kCot);
  v.require(five.edits.size() == 5, fmt::format("{} edits, want 5", five.edits.size()));
  if (v.pass) v.detail = "4 and 5 edits";
  return v;
}

Verdict e3s_fixture() {
  Verdict v;
  E3sReport r = e3s_score(fixtures::e3s_corpus(), "synthetic", {}, Execution::kSerial);
  v.require(r.e3s == 70.0, fmt::format("E3S {}, want 70.0", r.e3s));

  auto seg = fixtures::letters_segment();
  auto pe = parse_postedit_output(fixtures::read_fixture("cot_reply_four_edits.txt"), PromptMode::kCot);
  auto at = text::decode_utf8(seg.initial_translation).find(U"ServicesServices");
  v.require(at != std::u32string::npos, "fixture lacks ServicesServices");
  if (v.pass) {
    MqmSpan span{seg.id, at, at + 16, Severity::kMajor, "Fluency", "r1"};
    v.require(span_modified(align(seg.initial_translation, pe.improved), span),
              "ServicesServices span not modified");
  }
  if (v.pass) v.detail = "E3S 70.0";
  return v;
}

Verdict alignment_oracle() {
  Verdict v;
  std::mt19937 rng(5150);
  std::uniform_int_distribution<int> len(0, 12), ch(0, 3);
  const char32_t alphabet[] = {U'x', U'y', U'ß', U' '};
  for (int i = 0; i < 500 && v.pass; ++i) {
    std::u32string a, b;
    for (int k = len(rng); k > 0; --k) a += alphabet[ch(rng)];
    for (int k = len(rng); k > 0; --k) b += alphabet[ch(rng)];
    Alignment al = align(a, b);
    int want = oracle::char_distance(a, b);
    v.require(static_cast<int>(al.cost()) == want,
              fmt::format("pair {}: cost {} vs oracle {}", i, al.cost(), want));
    std::u32string src, dst;
    for (const auto& op : al.ops) {
      src += a.substr(op.src_start, op.src_end - op.src_start);
      dst += b.substr(op.dst_start, op.dst_end - op.dst_start);
    }
    v.require(src == a && dst == b, fmt::format("pair {}: reconstruction differs", i));
  }
  if (v.pass) v.detail = "500 pairs";
  return v;
}

Verdict adherence_direction() {
  Verdict v;
  AdherenceRow same_t =
      adherence_report({{"die katze schläft", "die katze schläft", "eine katze schläft"}}, "de", "a");
  v.require(same_t.closer_to == CloserTo::kInitial && same_t.ter_pe_vs_initial == 0.0,
            "T'==T not closer to initial");
  AdherenceRow same_z =
      adherence_report({{"eine katze schläft", "die katze schläft", "eine katze schläft"}}, "de", "a");
  v.require(same_z.closer_to == CloserTo::kZeroShot, "T'==Z not closer to zeroshot");
  return v;
}

Verdict histogram() {
  Verdict v;
  GainHistogram h = gain_histogram({0.0, 0.0, 0.5, -0.2}, 0.1);
  v.require(h.nondegradation_fraction == 0.75,
            fmt::format("fraction {}", h.nondegradation_fraction));
  return v;
}

Verdict end_to_end_determinism() {
  Verdict v;
  std::vector<Segment> segs;
  for (int i = 0; i < 5; ++i) {
    Segment s;
    s.id = "e2e:" + std::to_string(i);
    s.lang = {"en", "de"};
    s.source = fmt::format("Sentence number {} is short.", i);
    s.initial_translation = fmt::format("Satz Nummer {} ist kurz.", i);
    s.system = "e2e";
    segs.push_back(std::move(s));
  }
  testutil::TempDir cache;
  ClientOptions copt;
  copt.cache_dir = cache.path();
  copt.sleep = [](std::chrono::milliseconds) {};
  copt.jitter_seed = 0;
  RunOptions ropt;
  ropt.model = "mock";

  auto run_once = [&](std::size_t* calls) {
    auto mock = std::make_shared<MockProvider>();
    LlmClient client(mock, copt);
    auto run = run_postedit(client, segs, ropt);
    for (auto& r : run.results) r.created_at.clear();
    *calls = mock->calls();
    return results_to_jsonl(run.results);
  };
  std::size_t first_calls = 0, second_calls = 0;
  std::string a = run_once(&first_calls);
  std::string b = run_once(&second_calls);
  v.require(first_calls == 5, fmt::format("first run made {} calls", first_calls));
  v.require(a == b, "results JSONL differs between runs");
  v.require(second_calls == 0, fmt::format("second run made {} calls", second_calls));
  return v;
}

Verdict chrf_cases() {
  Verdict v;
  v.require(chrf("abc", "abc") == 100.0, "chrf(x,x) != 100");
  v.require(chrf("Die Katze.", "Die Katze.") == 100.0, "chrf(x,x) != 100 with spaces");
  v.require(chrf("", "abc") == 0.0, "chrf('',abc) != 0");
  double got = chrf("abcd", "abce");
  double want = oracle::chrf("abcd", "abce");
  v.require(std::abs(got - want) <= kChrfTolerance, fmt::format("{} vs oracle {}", got, want));
  return v;
}

Verdict err_scoring() {
  Verdict v;
  std::vector<ErrJudgment> j = {{"a", true, "x", {}}, {"b", false, "x", {}}, {"c", true, "x", {}}};
  std::string shown = fmt::format("{:.1f}", err_score(j));
  v.require(shown == "66.7", "ERR printed as " + shown);

  std::vector<Segment> segs;
  std::vector<PostEditResult> results;
  for (int i = 0; i < 12; ++i) {
    Segment s;
    s.id = "err:" + std::to_string(i);
    s.lang = {"en", "de"};
    s.source = "src " + std::to_string(i);
    s.initial_translation = "tgt " + std::to_string(i);
    segs.push_back(s);
    PostEditResult r;
    r.segment_id = s.id;
    r.edits = {"edit"};
    r.improved = "neu " + std::to_string(i);
    results.push_back(r);
  }
  std::string a = samples_to_jsonl(export_err_samples(results, segs, 5, 31337));
  std::string b = samples_to_jsonl(export_err_samples(results, segs, 5, 31337));
  v.require(a == b, "export differs across runs with the same seed");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"ter_oracle_equivalence", ter_oracle_equivalence},
      {"ter_bounds", ter_bounds},
      {"parser_fixtures", parser_fixtures},
      {"e3s_fixture", e3s_fixture},
      {"alignment_oracle", alignment_oracle},
      {"adherence_direction", adherence_direction},
      {"histogram_nondegradation", histogram},
      {"end_to_end_determinism", end_to_end_determinism},
      {"chrf", chrf_cases},
      {"err_scoring", err_scoring},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("%s %s%s%s\n", v.pass ? "PASS" : "FAIL", name, v.detail.empty() ? "" : ": ",
                v.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
