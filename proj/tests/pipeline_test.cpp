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


#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "pe/io.hpp"
#include "pe/pipeline.hpp"
#include "test_util.hpp"

namespace pe {
namespace {

std::vector<Segment> segments(int n) {
  std::vector<Segment> out;
  for (int i = 0; i < n; ++i) {
    Segment s;
    s.id = "news:" + std::to_string(i);
    s.lang = {"en", "de"};
    s.source = "The house number " + std::to_string(i) + " is red.";
    s.initial_translation = "Das Haus Nummer " + std::to_string(i) + " ist rot.";
    s.system = "news";
    out.push_back(std::move(s));
  }
  return out;
}

RunOptions options() {
  RunOptions o;
  o.model = "mock-model";
  o.max_inflight = 2;
  return o;
}

ClientOptions client_options(std::optional<std::filesystem::path> cache = std::nullopt) {
  ClientOptions c;
  c.cache_dir = std::move(cache);
  c.sleep = [](std::chrono::milliseconds) {};
  c.jitter_seed = 1;
  return c;
}

TEST(RunPostEdit, AllSucceedWithMock) {
  auto mock = std::make_shared<MockProvider>();
  LlmClient client(mock, client_options());
  auto run = run_postedit(client, segments(3), options());
  EXPECT_EQ(run.counts, (RunCounts{3, 3, 0, 0}));
  ASSERT_EQ(run.results.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(run.results[i].segment_id, "news:" + std::to_string(i));
    EXPECT_TRUE(run.results[i].ok());
    EXPECT_EQ(run.results[i].edits.size(), 1u);
    EXPECT_FALSE(run.results[i].improved.empty());
    EXPECT_EQ(run.results[i].model, "mock-model");
  }
}

TEST(RunPostEdit, MalformedReplyIsKeptRaw) {
  auto segs = segments(3);
  auto mock = std::make_shared<MockProvider>();
  LlmClient client(mock, client_options());
  RunOptions o = options();
  CompletionRequest second{o.model, build_postedit_prompt(segs[1], o.mode), o.params};
  mock->set_reply(client.digest(second), "I would rather not.");
  auto run = run_postedit(client, segs, o);
  EXPECT_EQ(run.counts, (RunCounts{3, 2, 1, 0}));
  const auto& bad = run.results[1];
  EXPECT_FALSE(bad.ok());
  EXPECT_EQ(bad.raw_output, "I would rather not.");
  EXPECT_EQ(bad.error->rfind("parse failed", 0), 0u);
  EXPECT_TRUE(bad.improved.empty());
}

TEST(RunPostEdit, CallFailureIsCounted) {
  auto segs = segments(2);
  auto mock = std::make_shared<MockProvider>();
  LlmClient client(mock, client_options());
  RunOptions o = options();
  CompletionRequest first{o.model, build_postedit_prompt(segs[0], o.mode), o.params};
  mock->fail(client.digest(first), 400);
  auto run = run_postedit(client, segs, o);
  EXPECT_EQ(run.counts, (RunCounts{2, 1, 0, 1}));
  EXPECT_EQ(run.results[0].error->rfind("call failed", 0), 0u);
}

TEST(RunPostEdit, WarmCacheMakesNoCalls) {
  testutil::TempDir dir;
  auto segs = segments(4);
  auto cold = std::make_shared<MockProvider>();
  LlmClient c1(cold, client_options(dir.path()));
  auto first = run_postedit(c1, segs, options());
  EXPECT_EQ(cold->calls(), 4u);

  auto warm = std::make_shared<MockProvider>();
  LlmClient c2(warm, client_options(dir.path()));
  auto second = run_postedit(c2, segs, options());
  EXPECT_EQ(warm->calls(), 0u);
  for (auto* run : {&first, &second}) {
    for (auto& r : run->results) r.created_at.clear();
  }
  EXPECT_EQ(results_to_jsonl(first.results), results_to_jsonl(second.results));
}

TEST(RunPostEdit, DirectMode) {
  auto mock = std::make_shared<MockProvider>();
  LlmClient client(mock, client_options());
  RunOptions o = options();
  o.mode = PromptMode::kDirect;
  auto run = run_postedit(client, segments(2), o);
  EXPECT_EQ(run.counts.successes, 2u);
  EXPECT_TRUE(run.results[0].edits.empty());
}

TEST(RunTranslate, OneRecordPerSegment) {
  auto mock = std::make_shared<MockProvider>();
  LlmClient client(mock, client_options());
  auto segs = segments(3);
  RunOptions o = options();
  CompletionRequest last{o.model, build_zeroshot_prompt(segs[2]), o.params};
  mock->set_reply(client.digest(last), "  \n");
  auto run = run_translate(client, segs, o);
  ASSERT_EQ(run.translations.size(), 3u);
  EXPECT_EQ(run.counts, (RunCounts{3, 2, 1, 0}));
  EXPECT_FALSE(run.translations[0].text.empty());
  EXPECT_TRUE(run.translations[2].error.has_value());
}

TEST(RunId, StableAndSensitive) {
  DecodingParams p;
  auto a = compute_run_id("abc", "m", PromptMode::kCot, kPromptVersion, p);
  EXPECT_EQ(a.size(), 16u);
  EXPECT_EQ(a, compute_run_id("abc", "m", PromptMode::kCot, kPromptVersion, p));
  EXPECT_NE(a, compute_run_id("abd", "m", PromptMode::kCot, kPromptVersion, p));
  EXPECT_NE(a, compute_run_id("abc", "m", PromptMode::kDirect, kPromptVersion, p));
  p.temperature = 0.7;
  EXPECT_NE(a, compute_run_id("abc", "m", PromptMode::kCot, kPromptVersion, p));
}

TEST(Manifest, JsonRoundTrip) {
  RunManifest m;
  m.run_id = "0123456789abcdef";
  m.corpus_path = "c.jsonl";
  m.corpus_digest = io::sha256_hex("x");
  m.model = "m";
  m.mode = "cot";
  m.prompt_version = std::string(kPromptVersion);
  m.started_at = "2026-01-01T00:00:00Z";
  m.finished_at = "2026-01-01T00:01:00Z";
  m.counts = {3, 2, 1, 0};
  nlohmann::json j = m;
  EXPECT_EQ(j["corpus"]["sha256"], m.corpus_digest);
  EXPECT_EQ(j["counts"]["parse_failures"], 1);
  RunManifest back = j.get<RunManifest>();
  EXPECT_EQ(back.counts, m.counts);
  EXPECT_EQ(nlohmann::json(back), j);
}

TEST(Jsonl, ResultsAndTranslationsRoundTrip) {
  auto mock = std::make_shared<MockProvider>();
  LlmClient client(mock, client_options());
  auto run = run_postedit(client, segments(3), options());
  auto tr = run_translate(client, segments(3), options());
  testutil::TempDir dir;
  dir.write("r.jsonl", results_to_jsonl(run.results));
  dir.write("t.jsonl", translations_to_jsonl(tr.translations));
  EXPECT_EQ(results_to_jsonl(load_results_jsonl(dir / "r.jsonl")), results_to_jsonl(run.results));
  EXPECT_EQ(translations_to_jsonl(load_translations_jsonl(dir / "t.jsonl")),
            translations_to_jsonl(tr.translations));
  dir.write("bad.jsonl", "{\"oops\n");
  try {
    load_results_jsonl(dir / "bad.jsonl");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
}

}  // namespace
}  // namespace pe
