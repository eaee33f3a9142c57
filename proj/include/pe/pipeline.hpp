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

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pe/corpus.hpp"
#include "pe/llm_client.hpp"
#include "pe/prompting.hpp"

namespace pe {

struct RunCounts {
  std::size_t segments = 0;
  std::size_t successes = 0;
  std::size_t parse_failures = 0;
  std::size_t call_failures = 0;

  bool operator==(const RunCounts&) const = default;
};

struct RunManifest {
  std::string run_id;
  std::string corpus_path;
  std::string corpus_digest;
  std::string model;
  std::string mode;
  std::string prompt_version;
  DecodingParams params;
  std::string started_at;
  std::string finished_at;
  RunCounts counts;
};

/// First 16 hex chars of SHA-256 over the run's identifying inputs.
std::string compute_run_id(const std::string& corpus_digest, const std::string& model,
                           PromptMode mode, std::string_view prompt_version,
                           const DecodingParams& params);

struct RunOptions {
  std::string model;
  PromptMode mode = PromptMode::kCot;
  DecodingParams params;
  int max_inflight = 4;
};

struct PostEditRun {
  std::vector<PostEditResult> results;  // one per segment, input order
  RunCounts counts;
};

/// One result per segment. Call failures and parse failures are recorded
/// in the result (`error` set, raw text kept) rather than dropped.
PostEditRun run_postedit(LlmClient& client, const std::vector<Segment>& segments,
                         const RunOptions& options);

struct TranslateRun {
  std::vector<ZeroShotTranslation> translations;
  RunCounts counts;
};

TranslateRun run_translate(LlmClient& client, const std::vector<Segment>& segments,
                           const RunOptions& options);

void to_json(nlohmann::json& j, const RunManifest& m);
void from_json(const nlohmann::json& j, RunManifest& m);

std::string results_to_jsonl(const std::vector<PostEditResult>& results);
std::vector<PostEditResult> load_results_jsonl(const std::filesystem::path& path);
std::string translations_to_jsonl(const std::vector<ZeroShotTranslation>& translations);
std::vector<ZeroShotTranslation> load_translations_jsonl(const std::filesystem::path& path);

}  // namespace pe
