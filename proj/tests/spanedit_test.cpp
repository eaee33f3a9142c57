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

#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pe/prompting.hpp"
#include "pe/spanedit.hpp"
#include "pe/text.hpp"
#include "test_util.hpp"

namespace pe {
namespace {

MqmSpan major(std::string id, std::size_t s, std::size_t e, std::string rater = "r1") {
  return {std::move(id), s, e, Severity::kMajor, "Accuracy/Mistranslation", std::move(rater)};
}

// Rebuilds both sides from the script and checks per-op consistency.
void check_reconstructs(const std::u32string& a, const std::u32string& b, const Alignment& al) {
  std::u32string src, dst;
  std::size_t si = 0, di = 0;
  for (const auto& op : al.ops) {
    ASSERT_EQ(op.src_start, si);
    ASSERT_EQ(op.dst_start, di);
    auto s = a.substr(op.src_start, op.src_end - op.src_start);
    auto d = b.substr(op.dst_start, op.dst_end - op.dst_start);
    switch (op.kind) {
      case EditKind::kMatch: ASSERT_EQ(s, d); break;
      case EditKind::kSubstitute:
        ASSERT_EQ(s.size(), d.size());
        for (std::size_t k = 0; k < s.size(); ++k) ASSERT_NE(s[k], d[k]);
        break;
      case EditKind::kDelete: ASSERT_TRUE(d.empty()); break;
      case EditKind::kInsert: ASSERT_TRUE(s.empty()); break;
    }
    src += s;
    dst += d;
    si = op.src_end;
    di = op.dst_end;
  }
  ASSERT_EQ(src, a);
  ASSERT_EQ(dst, b);
}

TEST(Align, IdenticalIsOneMatch) {
  Alignment al = align("Haus", "Haus");
  ASSERT_EQ(al.ops.size(), 1u);
  EXPECT_EQ(al.ops[0], (EditOp{EditKind::kMatch, 0, 4, 0, 4}));
  EXPECT_EQ(al.cost(), 0u);
}

TEST(Align, EmptySides) {
  EXPECT_TRUE(align("", "").ops.empty());
  EXPECT_EQ(align("", "ab").ops, (std::vector<EditOp>{{EditKind::kInsert, 0, 0, 0, 2}}));
  EXPECT_EQ(align("ab", "").ops, (std::vector<EditOp>{{EditKind::kDelete, 0, 2, 0, 0}}));
}

TEST(Align, CountsCodePoints) {
  Alignment al = align("Straße", "Strasse");
  EXPECT_EQ(al.cost(), 2u);
  check_reconstructs(text::decode_utf8("Straße"), text::decode_utf8("Strasse"), al);
}

TEST(Align, DuplicatedWordCollapses) {
  Alignment al = align("ServicesServices -", "Services -");
  EXPECT_EQ(al.cost(), 8u);
  check_reconstructs(U"ServicesServices -", U"Services -", al);
}

TEST(AlignProperty, CostMatchesOracleAndReconstructs) {
  std::mt19937 rng(424242);
  std::uniform_int_distribution<int> len(0, 12), ch(0, 3);
  const char32_t alphabet[] = {U'a', U'b', U'ä', U' '};
  for (int i = 0; i < 500; ++i) {
    std::u32string a, b;
    for (int k = len(rng); k > 0; --k) a += alphabet[ch(rng)];
    for (int k = len(rng); k > 0; --k) b += alphabet[ch(rng)];
    Alignment al = align(a, b);
    ASSERT_EQ(static_cast<int>(al.cost()), oracle::char_distance(a, b));
    check_reconstructs(a, b, al);
    // Utf-8 entry point agrees with the code point one.
    ASSERT_EQ(align(text::encode_utf8(a), text::encode_utf8(b)), al);
    for (std::size_t k = 1; k < al.ops.size(); ++k) ASSERT_NE(al.ops[k].kind, al.ops[k - 1].kind);
  }
}

TEST(Align, JsonRoundTrip) {
  Alignment al = align("abc", "axcd");
  nlohmann::json j = al;
  EXPECT_EQ(j.get<Alignment>(), al);
  EXPECT_TRUE(j.contains("ops"));
  EXPECT_EQ(j["ops"][0]["kind"], "match");
}

TEST(SpanModified, SubstitutionDeletionInsertion) {
  // "the old house", span "old" = [4, 7)
  MqmSpan s = major("x", 4, 7);
  EXPECT_TRUE(span_modified(align("the old house", "the new house"), s));
  EXPECT_TRUE(span_modified(align("the old house", "the house"), s));
  EXPECT_TRUE(span_modified(align("the old house", "the olld house"), s));
  EXPECT_FALSE(span_modified(align("the old house", "the old house"), s));
  EXPECT_FALSE(span_modified(align("the old house", "the old houses"), s));
}

TEST(SpanModified, BoundaryInsertionDoesNotCount) {
  Alignment al = align("my cat", "my xcat");
  ASSERT_EQ(al.ops[1], (EditOp{EditKind::kInsert, 3, 3, 3, 4}));
  EXPECT_FALSE(span_modified(al, major("x", 3, 6)));
  EXPECT_FALSE(span_modified(align("my cat", "my catx"), major("x", 3, 6)));
}

TEST(SpanModified, OutOfRangeThrows) {
  EXPECT_THROW(span_modified(align("abc", "abc"), major("x", 2, 4)), DataError);
  EXPECT_THROW(span_modified(align("abc", "abc"), major("x", 2, 1)), DataError);
}

TEST(SpanModifiedProperty, MonotoneUnderWidening) {
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> len(1, 12), ch(0, 2);
  for (int i = 0; i < 300; ++i) {
    std::string a, b;
    for (int k = len(rng); k > 0; --k) a += "abc"[ch(rng)];
    for (int k = len(rng); k > 0; --k) b += "abc"[ch(rng)];
    Alignment al = align(a, b);
    std::uniform_int_distribution<std::size_t> pos(0, a.size());
    std::size_t s = pos(rng), e = pos(rng);
    if (s > e) std::swap(s, e);
    if (s == e) continue;
    if (!span_modified(al, major("x", s, e))) continue;
    // Any span containing a modified span is modified too.
    ASSERT_TRUE(span_modified(al, major("x", s > 0 ? s - 1 : 0, e)));
    ASSERT_TRUE(span_modified(al, major("x", s, e < a.size() ? e + 1 : e)));
    ASSERT_TRUE(span_modified(al, major("x", 0, a.size())));
  }
}

TEST(SpanModified, LettersExampleServicesServices) {
  auto seg = fixtures::letters_segment();
  ParsedPostEdit pe = parse_postedit_output(testutil::read(testutil::fixture("cot_reply_four_edits.txt")),
                                            PromptMode::kCot);
  auto t = text::decode_utf8(seg.initial_translation);
  auto at = t.find(U"ServicesServices");
  ASSERT_NE(at, std::u32string::npos);
  Alignment al = align(seg.initial_translation, pe.improved);
  EXPECT_TRUE(span_modified(al, major(seg.id, at, at + 16)));
}

TEST(E3s, TenSegmentFixtureScoresSeventy) {
  auto items = fixtures::e3s_corpus();
  auto counts = e3s_counts(items, Execution::kSerial);
  const std::vector<std::size_t> modified = {1, 1, 1, 1, 1, 1, 1, 0, 0, 0};
  for (std::size_t i = 0; i < items.size(); ++i) {
    EXPECT_EQ(counts[i].first, 1u);
    EXPECT_EQ(counts[i].second, modified[i]) << items[i].segment_id;
  }
  E3sReport r = e3s_score(items, "synthetic");
  EXPECT_EQ(r.spans_total, 10u);
  EXPECT_EQ(r.spans_modified, 7u);
  EXPECT_EQ(r.e3s, 70.0);
  EXPECT_FALSE(r.initial_qe.has_value());
}

TEST(E3s, DuplicateSpansCountOnce) {
  E3sItem item{"s", "the old house", "the new house",
               {major("s", 4, 7, "r1"), major("s", 4, 7, "r1"), major("s", 8, 13, "r2")}};
  E3sReport r = e3s_score({item}, "x");
  EXPECT_EQ(r.spans_total, 2u);
  EXPECT_EQ(r.spans_modified, 1u);
  EXPECT_EQ(r.e3s, 50.0);
}

TEST(E3s, SameOffsetsFromTwoRatersBothCount) {
  E3sItem item{"s", "the old house", "the new house",
               {major("s", 4, 7, "r1"), major("s", 4, 7, "r2")}};
  EXPECT_EQ(e3s_score({item}, "x").spans_total, 2u);
}

TEST(E3s, Errors) {
  EXPECT_THROW(e3s_score({}, "x"), EmptyDenominator);
  E3sItem none{"s", "a", "b", {}};
  EXPECT_THROW(e3s_score({none}, "x"), EmptyDenominator);
  MqmSpan minor = major("s", 0, 1);
  minor.severity = Severity::kMinor;
  EXPECT_THROW(e3s_score({{"s", "a", "b", {minor}}}, "x"), DataError);
}

TEST(E3s, QeMeans) {
  auto items = fixtures::e3s_corpus();
  std::map<std::string, double> init, post;
  for (std::size_t i = 0; i < items.size(); ++i) {
    init[items[i].segment_id] = static_cast<double>(i);
    post[items[i].segment_id] = static_cast<double>(i) + 1.0;
  }
  E3sReport r = e3s_score(items, "s", {&init, &post});
  EXPECT_DOUBLE_EQ(*r.initial_qe, 4.5);
  EXPECT_DOUBLE_EQ(*r.pe_qe, 5.5);
  init.erase(items[0].segment_id);
  EXPECT_THROW(e3s_score(items, "s", {&init, &post}), DataError);
}

TEST(E3sProperty, AdditiveOverDisjointCorpora) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> len(2, 10), ch(0, 2);
  std::vector<E3sItem> items;
  for (int i = 0; i < 60; ++i) {
    std::string a, b;
    for (int k = len(rng); k > 0; --k) a += "abc"[ch(rng)];
    for (int k = len(rng); k > 0; --k) b += "abc"[ch(rng)];
    std::uniform_int_distribution<std::size_t> pos(0, a.size() - 1);
    std::size_t s = pos(rng);
    items.push_back({"s" + std::to_string(i), a, b, {major("s" + std::to_string(i), s, s + 1)}});
  }
  std::vector<E3sItem> left(items.begin(), items.begin() + 25), right(items.begin() + 25, items.end());
  E3sReport all = e3s_score(items, "x", {}, Execution::kSerial);
  E3sReport l = e3s_score(left, "x", {}, Execution::kParallel);
  E3sReport r = e3s_score(right, "x", {}, Execution::kParallel);
  EXPECT_EQ(all.spans_total, l.spans_total + r.spans_total);
  EXPECT_EQ(all.spans_modified, l.spans_modified + r.spans_modified);
  EXPECT_EQ(e3s_counts(items, Execution::kSerial), e3s_counts(items, Execution::kParallel));
}

}  // namespace
}  // namespace pe
