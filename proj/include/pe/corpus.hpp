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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace pe {

/// Source/target language codes (ISO-639-1/3, lowercase).
struct LangPair {
  std::string src;
  std::string tgt;

  /// Parses "en-de". Throws DataError.
  static LangPair parse(std::string_view spec);
  /// Throws DataError unless both codes are 2-3 lowercase letters and differ.
  void validate() const;
  std::string str() const { return src + "-" + tgt; }

  bool operator==(const LangPair&) const = default;
};

/// One source sentence S with its machine translation T.
struct Segment {
  std::string id;
  LangPair lang;
  std::string source;
  std::string initial_translation;
  std::optional<std::string> reference;
  std::string system;
  std::optional<std::string> doc_id;

  void validate() const;
  bool operator==(const Segment&) const = default;
};

enum class Severity { kMajor, kMinor, kNeutral };

std::string_view to_string(Severity s);
/// Case-insensitive. Throws DataError on unknown strings.
Severity parse_severity(std::string_view s);

/// A human-annotated error span in a segment's initial translation.
/// Offsets count Unicode scalar values of the tag-stripped target.
struct MqmSpan {
  std::string segment_id;
  std::size_t start = 0;
  std::size_t end = 0;
  Severity severity = Severity::kMajor;
  std::string category;
  std::optional<std::string> rater;

  bool operator==(const MqmSpan&) const = default;
};

struct AnnotatedSegment {
  Segment segment;
  std::vector<MqmSpan> spans;
};

enum class CorpusFormat { kTsv, kJsonl };

/// Loads a parallel corpus. TSV rows are `source<TAB>translation[<TAB>reference]`
/// with an optional header row; JSONL records use the Segment field names.
/// Missing ids become "<system>:<row-index>".
std::vector<Segment> load_segments(const std::filesystem::path& path, CorpusFormat format,
                                   const LangPair& lang, const std::string& system);

/// Reads MQM rows (system, seg_id, source, target, category, severity[, rater]).
/// Spans are marked in the target with <v>...</v>; rows sharing
/// (system, seg_id) are merged onto one segment. When a header row is
/// present, columns are located by name, so exports with extra columns
/// (doc, rater) also load.
std::vector<AnnotatedSegment> parse_mqm_tsv(const std::filesystem::path& path,
                                            const LangPair& lang);

/// Strips <v>/</v> markers. Returns the stripped text and the (start, end)
/// offsets of each marked run. Throws DataError on unbalanced or nested tags.
std::pair<std::string, std::vector<std::pair<std::size_t, std::size_t>>> strip_span_tags(
    std::string_view target);

std::vector<MqmSpan> filter_major(const std::vector<MqmSpan>& spans);

void to_json(nlohmann::json& j, const LangPair& l);
void from_json(const nlohmann::json& j, LangPair& l);
void to_json(nlohmann::json& j, const Segment& s);
void from_json(const nlohmann::json& j, Segment& s);
void to_json(nlohmann::json& j, const MqmSpan& s);
void from_json(const nlohmann::json& j, MqmSpan& s);

std::string segments_to_jsonl(const std::vector<Segment>& segments);
std::string spans_to_jsonl(const std::vector<MqmSpan>& spans);
std::vector<MqmSpan> load_spans_jsonl(const std::filesystem::path& path);

}  // namespace pe
