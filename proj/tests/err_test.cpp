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


#include <set>

#include <fmt/format.h>
#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "pe/err.hpp"
#include "pe/io.hpp"
#include "pe/metrics.hpp"
#include "test_util.hpp"

namespace pe {
namespace {

using nlohmann::json;

std::vector<Segment> make_segments(int n) {
  std::vector<Segment> out;
  for (int i = 0; i < n; ++i) {
    Segment s;
    s.id = "sys:" + std::to_string(i);
    s.lang = {"en", "de"};
    s.source = "source " + std::to_string(i);
    s.initial_translation = "Quelle " + std::to_string(i);
    s.system = "sys";
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<PostEditResult> make_results(const std::vector<Segment>& segs) {
  std::vector<PostEditResult> out;
  for (const auto& s : segs) {
    PostEditResult r;
    r.segment_id = s.id;
    r.edits = {"Fix the noun."};
    r.improved = s.initial_translation + " neu";
    r.model = "m";
    out.push_back(std::move(r));
  }
  return out;
}

TEST(ErrExport, DeterministicForSeed) {
  auto segs = make_segments(20);
  auto results = make_results(segs);
  auto a = samples_to_jsonl(export_err_samples(results, segs, 8, 42));
  auto b = samples_to_jsonl(export_err_samples(results, segs, 8, 42));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, samples_to_jsonl(export_err_samples(results, segs, 8, 43)));
  auto samples = export_err_samples(results, segs, 8, 42);
  EXPECT_EQ(samples[0].sample_id, "err-0001");
  EXPECT_EQ(samples[7].sample_id, "err-0008");
  std::set<std::string> ids;
  for (const auto& s : samples) ids.insert(s.segment_id);
  EXPECT_EQ(ids.size(), 8u);
}

TEST(ErrExport, SkipsIneligibleAndReportsShortfall) {
  auto segs = make_segments(4);
  auto results = make_results(segs);
  results[0].mode = PromptMode::kDirect;
  results[1].error = "parse failed";
  results[1].improved.clear();
  results[2].edits.clear();
  auto samples = export_err_samples(results, segs, 1, 1);
  ASSERT_EQ(samples.size(), 1u);
  EXPECT_EQ(samples[0].segment_id, "sys:3");
  try {
    export_err_samples(results, segs, 3, 1);
    FAIL();
  } catch (const DataError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find('3'), std::string::npos);
    EXPECT_NE(msg.find('1'), std::string::npos);
  }
  EXPECT_THROW(export_err_samples(results, segs, 0, 1), DataError);
}

TEST(ErrExport, JsonlRoundTrip) {
  auto segs = make_segments(5);
  auto samples = export_err_samples(make_results(segs), segs, 5, 7);
  testutil::TempDir dir;
  auto text = samples_to_jsonl(samples);
  dir.write("s.jsonl", text);
  EXPECT_EQ(samples_to_jsonl(load_samples_jsonl(dir / "s.jsonl")), text);
}

TEST(ErrImport, LaterJudgmentWins) {
  auto segs = make_segments(3);
  auto samples = export_err_samples(make_results(segs), segs, 3, 0);
  testutil::TempDir dir;
  dir.write("j.jsonl",
            "{\"sample_id\":\"err-0001\",\"realized\":false,\"annotator\":\"a\"}\n"
            "{\"sample_id\":\"err-0002\",\"realized\":true,\"annotator\":\"a\"}\n"
            "\n"
            "{\"sample_id\":\"err-0001\",\"realized\":true,\"annotator\":\"b\"}\n");
  std::vector<std::string> warnings;
  auto j = import_judgments(dir / "j.jsonl", samples, &warnings);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_TRUE(j[0].realized);
  EXPECT_EQ(j[0].annotator, "b");
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("err-0001"), std::string::npos);
  EXPECT_EQ(err_score(j), 100.0);
}

TEST(ErrImport, Errors) {
  auto segs = make_segments(2);
  auto samples = export_err_samples(make_results(segs), segs, 2, 0);
  testutil::TempDir dir;
  dir.write("unknown.jsonl", "{\"sample_id\":\"err-0099\",\"realized\":true,\"annotator\":\"a\"}\n");
  EXPECT_THROW(import_judgments(dir / "unknown.jsonl", samples), DataError);
  dir.write("bad.jsonl", "{\"sample_id\":\"err-0001\"\n");
  EXPECT_THROW(import_judgments(dir / "bad.jsonl", samples), DataError);
}

TEST(ErrScore, Percentage) {
  std::vector<ErrJudgment> j = {{"a", true, "x", {}}, {"b", false, "x", {}}, {"c", true, "x", {}}};
  EXPECT_NEAR(err_score(j), 200.0 / 3.0, 1e-12);
  EXPECT_EQ(fmt::format("{:.1f}", err_score(j)), "66.7");
  EXPECT_THROW(err_score({}), EmptyCorpus);
}

class ServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    auto segs = make_segments(3);
    samples_ = export_err_samples(make_results(segs), segs, 3, 5);
  }
  std::vector<ErrSample> samples_;
  testutil::TempDir dir_;
};

TEST_F(ServerTest, ApiRoundTrip) {
  auto path = dir_ / "judgments.jsonl";
  {
    AnnotationServer server(samples_, path);
    int port = server.start("127.0.0.1", 0);
    httplib::Client cli("127.0.0.1", port);

    auto res = cli.Get("/api/samples");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    auto listed = json::parse(res->body);
    ASSERT_EQ(listed.size(), 3u);
    EXPECT_EQ(listed[0]["sample_id"], "err-0001");
    EXPECT_TRUE(listed[0].contains("diff"));

    const bool verdicts[] = {true, false, true};
    for (int i = 0; i < 3; ++i) {
      json body = {{"sample_id", samples_[i].sample_id}, {"realized", verdicts[i]}, {"annotator", "ann"}};
      auto post = cli.Post("/api/judgments", body.dump(), "application/json");
      ASSERT_TRUE(post);
      EXPECT_EQ(post->status, 200);
    }
    // Revise the second one twice; only the last counts.
    json again = {{"sample_id", samples_[1].sample_id}, {"realized", true}, {"annotator", "ann"}};
    ASSERT_EQ(cli.Post("/api/judgments", again.dump(), "application/json")->status, 200);
    again["realized"] = false;
    ASSERT_EQ(cli.Post("/api/judgments", again.dump(), "application/json")->status, 200);

    auto progress = json::parse(cli.Get("/api/progress")->body);
    EXPECT_EQ(progress["total"], 3);
    EXPECT_EQ(progress["judged"], 3);

    auto judged = json::parse(cli.Get("/api/judgments")->body).get<std::vector<ErrJudgment>>();
    ASSERT_EQ(judged.size(), 3u);
    EXPECT_EQ(fmt::format("{:.1f}", err_score(judged)), "66.7");

    auto bad = cli.Post("/api/judgments", "not json", "application/json");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 400);
    json unknown = {{"sample_id", "err-9999"}, {"realized", true}, {"annotator", "ann"}};
    auto missing = cli.Post("/api/judgments", unknown.dump(), "application/json");
    ASSERT_TRUE(missing);
    EXPECT_EQ(missing->status, 404);

    auto page = cli.Get("/");
    ASSERT_TRUE(page);
    EXPECT_EQ(page->status, 200);
    server.stop();
  }
  auto persisted = import_judgments(path, samples_);
  EXPECT_EQ(fmt::format("{:.1f}", err_score(persisted)), "66.7");

  // A restarted server resumes from the file.
  AnnotationServer resumed(samples_, path);
  int port = resumed.start("127.0.0.1", 0);
  httplib::Client cli("127.0.0.1", port);
  auto progress = json::parse(cli.Get("/api/progress")->body);
  EXPECT_EQ(progress["judged"], 3);
}

TEST_F(ServerTest, OccupiedPortThrows) {
  AnnotationServer first(samples_, dir_ / "a.jsonl");
  int port = first.start("127.0.0.1", 0);
  AnnotationServer second(samples_, dir_ / "b.jsonl");
  EXPECT_THROW(second.start("127.0.0.1", port), ServiceError);
}

TEST_F(ServerTest, DuplicateSampleIdsRejected) {
  auto dup = samples_;
  dup[1].sample_id = dup[0].sample_id;
  EXPECT_THROW(AnnotationServer(dup, dir_ / "j.jsonl"), DataError);
}

}  // namespace
}  // namespace pe
