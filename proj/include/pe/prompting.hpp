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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pe/corpus.hpp"

namespace pe {

/// cot: the model lists proposed edits E before the improved translation T'.
/// direct: the model emits T' only. zeroshot: translate S from scratch (Z).
enum class PromptMode { kCot, kDirect, kZeroShot };

std::string_view to_string(PromptMode m);
PromptMode parse_prompt_mode(std::string_view s);

inline constexpr std::string_view kPromptVersion = "v1";

struct PromptMessages {
  std::string system_text;
  std::string user_text;
  PromptMode mode = PromptMode::kCot;

  bool operator==(const PromptMessages&) const = default;
};

struct DecodingParams {
  double temperature = 0.0;
  double top_p = 1.0;
  int max_tokens = 1024;

  void validate() const;
  bool operator==(const DecodingParams&) const = default;
};

struct PostEditResult {
  std::string segment_id;
  PromptMode mode = PromptMode::kCot;
  std::string raw_output;
  std::vector<std::string> edits;
  std::string improved;
  std::string model;
  DecodingParams params;
  std::string prompt_version{kPromptVersion};
  std::string created_at;
  /// Set when the call or the parse failed; `improved` is then empty.
  std::optional<std::string> error;

  bool ok() const { return !error.has_value(); }
};

struct ZeroShotTranslation {
  std::string segment_id;
  std::string text;
  std::string model;
  std::optional<std::string> error;
};

/// English display name for an ISO code ("de" -> "German"); unknown codes
/// are returned unchanged.
std::string language_name(std::string_view code);

/// The raw template text for a mode, e.g. for `pe prompts show`.
struct PromptTemplate {
  std::string_view system_text;
  std::string_view user_text;
};
PromptTemplate prompt_template(PromptMode mode, std::string_view version = kPromptVersion);

PromptMessages build_postedit_prompt(const Segment& segment, PromptMode mode);
PromptMessages build_zeroshot_prompt(const Segment& segment);

struct ParsedPostEdit {
  std::vector<std::string> edits;
  std::string improved;

  bool operator==(const ParsedPostEdit&) const = default;
};

/// Extracts E and T' from a model reply. Throws ParseError when a cot reply
/// has no "Improved Translation" header or the translation is empty.
ParsedPostEdit parse_postedit_output(std::string_view raw, PromptMode mode);

/// Renders edits and translation in the canonical cot layout
/// ("Proposed Improvements:" numbered list, then "Improved Translation:").
std::string render_postedit_output(const std::vector<std::string>& edits,
                                   std::string_view improved);

void to_json(nlohmann::json& j, const DecodingParams& p);
void from_json(const nlohmann::json& j, DecodingParams& p);
void to_json(nlohmann::json& j, const PostEditResult& r);
void from_json(const nlohmann::json& j, PostEditResult& r);
void to_json(nlohmann::json& j, const ZeroShotTranslation& z);
void from_json(const nlohmann::json& j, ZeroShotTranslation& z);

}  // namespace pe
