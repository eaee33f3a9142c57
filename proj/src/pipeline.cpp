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

#include "pe/pipeline.hpp"

#include <fmt/format.h>

#include "pe/io.hpp"
#include "pe/text.hpp"

namespace pe {

using nlohmann::json;

std::string compute_run_id(const std::string& corpus_digest, const std::string& model,
                           PromptMode mode, std::string_view prompt_version,
                           const DecodingParams& params) {
  json key = {{"corpus", corpus_digest},
              {"model", model},
              {"mode", to_string(mode)},
              {"prompt_version", prompt_version},
              {"params", params}};
  return io::sha256_hex(key.dump()).substr(0, 16);
}

namespace {

std::vector<CompletionRequest> build_requests(const std::vector<Segment>& segments,
                                              const RunOptions& options, bool zeroshot) {
  std::vector<CompletionRequest> requests;
  requests.reserve(segments.size());
  for (const auto& seg : segments) {
    requests.push_back({options.model,
                        zeroshot ? build_zeroshot_prompt(seg)
                                 : build_postedit_prompt(seg, options.mode),
                        options.params});
  }
  return requests;
}

}  // namespace

PostEditRun run_postedit(LlmClient& client, const std::vector<Segment>& segments,
                         const RunOptions& options) {
  options.params.validate();
  auto items = client.batch_complete(build_requests(segments, options, false),
                                     options.max_inflight);
  PostEditRun run;
  run.counts.segments = segments.size();
  for (std::size_t i = 0; i < segments.size(); ++i) {
    PostEditResult r;
    r.segment_id = segments[i].id;
    r.mode = options.mode;
    r.model = options.model;
    r.params = options.params;
    r.prompt_version = std::string(kPromptVersion);
    r.created_at = io::utc_timestamp();
    if (!items[i].ok()) {
      r.error = "call failed: " + items[i].error;
      ++run.counts.call_failures;
    } else {
      r.raw_output = items[i].response->text;
      try {
        ParsedPostEdit parsed = parse_postedit_output(r.raw_output, options.mode);
        r.edits = std::move(parsed.edits);
        r.improved = std::move(parsed.improved);
        ++run.counts.successes;
      } catch (const ParseError& e) {
        r.error = std::string("parse failed: ") + e.what();
        ++run.counts.parse_failures;
      }
    }
    run.results.push_back(std::move(r));
  }
  return run;
}

TranslateRun run_translate(LlmClient& client, const std::vector<Segment>& segments,
                           const RunOptions& options) {
  options.params.validate();
  auto items = client.batch_complete(build_requests(segments, options, true),
                                     options.max_inflight);
  TranslateRun run;
  run.counts.segments = segments.size();
  for (std::size_t i = 0; i < segments.size(); ++i) {
    ZeroShotTranslation z;
    z.segment_id = segments[i].id;
    z.model = options.model;
    if (!items[i].ok()) {
      z.error = "call failed: " + items[i].error;
      ++run.counts.call_failures;
    } else {
      z.text = std::string(text::trim(items[i].response->text));
      if (z.text.empty()) {
        z.error = "parse failed: empty translation";
        ++run.counts.parse_failures;
      } else {
        ++run.counts.successes;
      }
    }
    run.translations.push_back(std::move(z));
  }
  return run;
}

void to_json(json& j, const RunManifest& m) {
  j = json{{"run_id", m.run_id},
           {"corpus", {{"path", m.corpus_path}, {"sha256", m.corpus_digest}}},
           {"model", m.model},
           {"mode", m.mode},
           {"prompt_version", m.prompt_version},
           {"params", m.params},
           {"started_at", m.started_at},
           {"finished_at", m.finished_at},
           {"counts",
            {{"segments", m.counts.segments},
             {"successes", m.counts.successes},
             {"parse_failures", m.counts.parse_failures},
             {"call_failures", m.counts.call_failures}}}};
}

void from_json(const json& j, RunManifest& m) {
  j.at("run_id").get_to(m.run_id);
  j.at("corpus").at("path").get_to(m.corpus_path);
  j.at("corpus").at("sha256").get_to(m.corpus_digest);
  j.at("model").get_to(m.model);
  j.at("mode").get_to(m.mode);
  j.at("prompt_version").get_to(m.prompt_version);
  j.at("params").get_to(m.params);
  j.at("started_at").get_to(m.started_at);
  j.at("finished_at").get_to(m.finished_at);
  const json& c = j.at("counts");
  c.at("segments").get_to(m.counts.segments);
  c.at("successes").get_to(m.counts.successes);
  c.at("parse_failures").get_to(m.counts.parse_failures);
  c.at("call_failures").get_to(m.counts.call_failures);
}

namespace {

template <typename T>
std::string to_jsonl(const std::vector<T>& items) {
  std::string out;
  for (const auto& item : items) {
    out += json(item).dump();
    out += '\n';
  }
  return out;
}

template <typename T>
std::vector<T> from_jsonl(const std::filesystem::path& path) {
  std::string content = io::read_file(path);
  std::vector<T> out;
  std::size_t lineno = 0;
  for (auto line : text::split_lines(content)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(json::parse(line).get<T>());
    } catch (const json::exception& e) {
      throw DataError(fmt::format("{}: line {}: {}", path.string(), lineno, e.what()));
    }
  }
  return out;
}

}  // namespace

std::string results_to_jsonl(const std::vector<PostEditResult>& results) {
  return to_jsonl(results);
}

std::vector<PostEditResult> load_results_jsonl(const std::filesystem::path& path) {
  return from_jsonl<PostEditResult>(path);
}

std::string translations_to_jsonl(const std::vector<ZeroShotTranslation>& translations) {
  return to_jsonl(translations);
}

std::vector<ZeroShotTranslation> load_translations_jsonl(const std::filesystem::path& path) {
  return from_jsonl<ZeroShotTranslation>(path);
}

}  // namespace pe
