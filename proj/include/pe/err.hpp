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

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pe/corpus.hpp"
#include "pe/prompting.hpp"
#include "pe/spanedit.hpp"

// Edit realization rate: humans judge, per sample, whether every edit the
// model proposed actually appears in its improved translation.

namespace pe {

struct ErrSample {
  std::string sample_id;
  std::string segment_id;
  std::string source;
  std::string initial_translation;
  std::vector<std::string> edits;
  std::string improved;
  Alignment diff;  // initial_translation -> improved
  std::string model;
};

struct ErrJudgment {
  std::string sample_id;
  bool realized = false;
  std::string annotator;
  std::optional<std::string> note;

  bool operator==(const ErrJudgment&) const = default;
};

/// Uniform sample of n eligible results (cot mode, parsed, nonempty edits)
/// without replacement. The draw depends only on (results order, n, seed)
/// and is identical on every platform.
std::vector<ErrSample> export_err_samples(const std::vector<PostEditResult>& results,
                                          const std::vector<Segment>& segments, int n,
                                          std::uint64_t seed);

/// Reads judgments JSONL. `realized` may be a JSON boolean or 0/1. A
/// repeated sample_id replaces the earlier judgment (and adds a warning).
std::vector<ErrJudgment> import_judgments(const std::filesystem::path& path,
                                          const std::vector<ErrSample>& samples,
                                          std::vector<std::string>* warnings = nullptr);

/// 100 * realized / judged. Throws EmptyCorpus when there are no judgments.
double err_score(const std::vector<ErrJudgment>& judgments);

void to_json(nlohmann::json& j, const ErrSample& s);
void from_json(const nlohmann::json& j, ErrSample& s);
void to_json(nlohmann::json& j, const ErrJudgment& jd);
/// Strict: sample_id and annotator strings, realized boolean or 0/1.
void from_json(const nlohmann::json& j, ErrJudgment& jd);

std::string samples_to_jsonl(const std::vector<ErrSample>& samples);
std::vector<ErrSample> load_samples_jsonl(const std::filesystem::path& path);

class ServiceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// HTTP service for annotation sessions:
///   GET  /api/samples    all samples
///   GET  /api/judgments  current judgment per judged sample (last wins)
///   POST /api/judgments  {sample_id, realized, annotator, note?}
///   GET  /api/progress   {total, judged}
/// plus static UI assets from `static_dir` when given. Every accepted POST
/// is appended and flushed to the judgments JSONL file before replying.
class AnnotationServer {
 public:
  AnnotationServer(std::vector<ErrSample> samples, std::filesystem::path judgments_path,
                   std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~AnnotationServer();
  AnnotationServer(const AnnotationServer&) = delete;
  AnnotationServer& operator=(const AnnotationServer&) = delete;

  /// Binds and starts serving on a background thread. port 0 picks a free
  /// port. Returns the bound port. Throws ServiceError if binding fails.
  int start(const std::string& host, int port);
  /// Blocks until stop() is called from elsewhere.
  void wait();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Starts an AnnotationServer on localhost.
std::unique_ptr<AnnotationServer> serve_annotation(std::vector<ErrSample> samples, int port,
                                                   std::filesystem::path judgments_path);

}  // namespace pe
