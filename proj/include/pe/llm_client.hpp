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

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pe/error.hpp"
#include "pe/prompting.hpp"

namespace pe {

struct CompletionRequest {
  std::string model;
  PromptMessages messages;
  DecodingParams params;
};

struct CompletionResponse {
  std::string text;
  std::string model;
  bool cached = false;
  long latency_ms = 0;
};

/// HTTP 429 from the provider. Retried with backoff by LlmClient.
class RateLimited : public ProviderError {
 public:
  explicit RateLimited(const std::string& what) : ProviderError(what, 429) {}
};

/// One chat-completion backend. send() makes exactly one attempt and
/// reports failures as TransportError (retryable), RateLimited (retryable)
/// or ProviderError (final). Implementations must be thread-safe.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string name() const = 0;
  virtual std::string send(const CompletionRequest& request) = 0;
};

/// Canonical JSON of (provider, model, messages, params): sorted keys, no
/// whitespace. This is what the cache key digests and what cache files store.
nlohmann::json canonical_request(const std::string& provider, const CompletionRequest& request);

/// SHA-256 hex of canonical_request(...).dump().
std::string request_digest(const std::string& provider, const CompletionRequest& request);

/// OpenAI-compatible `POST {base_url}/chat/completions`.
class OpenAiProvider : public Provider {
 public:
  struct Config {
    std::string base_url = "https://api.openai.com/v1";
    std::string api_key_env = "PE_API_KEY";
    std::chrono::seconds timeout{120};
  };

  /// Reads the credential from the configured environment variable and
  /// PE_BASE_URL when set. Throws ConfigError when no credential is present.
  static std::unique_ptr<OpenAiProvider> from_env(Config config);
  OpenAiProvider(Config config, std::string api_key);

  std::string name() const override { return "openai"; }
  std::string send(const CompletionRequest& request) override;

 private:
  Config config_;
  std::string api_key_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

/// Deterministic in-process provider. Replies come from a canned map keyed
/// by request digest; requests without an entry get a synthetic reply that
/// is a pure function of the digest (a well-formed cot answer for cot
/// prompts, a single line otherwise). Records every call.
class MockProvider : public Provider {
 public:
  MockProvider() = default;
  explicit MockProvider(std::map<std::string, std::string> canned) : canned_(std::move(canned)) {}

  /// Loads a JSON object {digest: reply}.
  static std::map<std::string, std::string> load_canned(const std::filesystem::path& path);

  std::string name() const override { return "mock"; }
  std::string send(const CompletionRequest& request) override;

  void set_reply(const std::string& digest, std::string text);
  /// Makes the request with this digest fail. `status` 0 raises a
  /// TransportError, 429 RateLimited, anything else ProviderError. `times`
  /// bounds how many calls fail (-1 = always).
  void fail(const std::string& digest, int status, int times = -1);
  void set_latency(std::chrono::milliseconds d) { latency_ = d; }

  std::vector<std::string> call_log() const;
  std::size_t calls() const;
  int max_inflight_observed() const { return max_inflight_.load(); }

  static std::string synthetic_reply(const std::string& digest, PromptMode mode);

 private:
  struct Failure {
    int status;
    int remaining;
  };
  mutable std::mutex mu_;
  std::map<std::string, std::string> canned_;
  std::map<std::string, Failure> failures_;
  std::vector<std::string> log_;
  std::chrono::milliseconds latency_{0};
  std::atomic<int> inflight_{0};
  std::atomic<int> max_inflight_{0};
};

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds base_delay{1000};
  double multiplier = 2.0;
};

/// Full-jitter delay for the given retry (0-based): uniform in
/// [0, base * multiplier^retry].
std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int retry, std::mt19937_64& rng);

struct ClientOptions {
  std::optional<std::filesystem::path> cache_dir;
  RetryPolicy retry;
  std::function<void(std::chrono::milliseconds)> sleep;  // defaults to this_thread::sleep_for
  std::uint64_t jitter_seed = std::random_device{}();
};

enum class ErrorKind { kNone, kTransport, kProvider, kOther };

struct BatchItem {
  std::optional<CompletionResponse> response;
  ErrorKind error_kind = ErrorKind::kNone;
  std::string error;

  bool ok() const { return response.has_value(); }
};

/// Caching, retrying front end over a Provider. Safe for concurrent use.
class LlmClient {
 public:
  LlmClient(std::shared_ptr<Provider> provider, ClientOptions options = {});

  /// Cache hit: returns the stored text with cached=true without calling
  /// the provider. Miss: calls with retries, stores, returns cached=false.
  CompletionResponse complete(const CompletionRequest& request);

  /// Runs requests on at most max_inflight worker threads. Output order
  /// matches input order; failures are embedded per item.
  std::vector<BatchItem> batch_complete(const std::vector<CompletionRequest>& requests,
                                        int max_inflight);

  std::string digest(const CompletionRequest& request) const;
  std::optional<std::filesystem::path> cache_path(const std::string& digest) const;
  const Provider& provider() const { return *provider_; }

 private:
  std::optional<std::string> cache_lookup(const std::string& digest) const;
  void cache_store(const std::string& digest, const CompletionRequest& request,
                   const std::string& text) const;
  std::string call_with_retries(const CompletionRequest& request);

  std::shared_ptr<Provider> provider_;
  ClientOptions options_;
  std::mutex rng_mu_;
  std::mt19937_64 rng_;
};

}  // namespace pe
