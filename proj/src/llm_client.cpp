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

#include "pe/llm_client.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>

#include "pe/io.hpp"

namespace pe {

namespace fs = std::filesystem;
using nlohmann::json;

json canonical_request(const std::string& provider, const CompletionRequest& request) {
  // nlohmann::json objects are std::map backed, so keys serialize sorted.
  json messages = json::array();
  messages.push_back({{"role", "system"}, {"content", request.messages.system_text}});
  messages.push_back({{"role", "user"}, {"content", request.messages.user_text}});
  return json{{"provider", provider},
              {"model", request.model},
              {"messages", messages},
              {"params",
               {{"temperature", request.params.temperature},
                {"top_p", request.params.top_p},
                {"max_tokens", request.params.max_tokens}}}};
}

std::string request_digest(const std::string& provider, const CompletionRequest& request) {
  return io::sha256_hex(canonical_request(provider, request).dump());
}

// ---------------------------------------------------------------------------
// OpenAI-compatible provider

std::unique_ptr<OpenAiProvider> OpenAiProvider::from_env(Config config) {
  if (const char* url = std::getenv("PE_BASE_URL"); url && *url) config.base_url = url;
  const char* key = std::getenv(config.api_key_env.c_str());
  if (!key || !*key) {
    throw ConfigError(fmt::format("environment variable {} holds no API credential",
                                  config.api_key_env));
  }
  return std::make_unique<OpenAiProvider>(std::move(config), key);
}

OpenAiProvider::OpenAiProvider(Config config, std::string api_key)
    : config_(std::move(config)), api_key_(std::move(api_key)) {
  const std::string& url = config_.base_url;
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("base URL must start with http:// or https://: " + url);
  }
  std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw ConfigError("unsupported URL scheme: " + scheme);
  auto path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

std::string OpenAiProvider::send(const CompletionRequest& request) {
  json body = {
      {"model", request.model},
      {"messages",
       json::array({{{"role", "system"}, {"content", request.messages.system_text}},
                    {{"role", "user"}, {"content", request.messages.user_text}}})},
      {"temperature", request.params.temperature},
      {"top_p", request.params.top_p},
      {"max_tokens", request.params.max_tokens},
  };
  httplib::Client cli(scheme_host_port_);
  cli.set_connection_timeout(config_.timeout);
  cli.set_read_timeout(config_.timeout);
  cli.set_write_timeout(config_.timeout);
  httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
  auto res = cli.Post(path_prefix_ + "/chat/completions", headers, body.dump(), "application/json");
  if (!res) {
    throw TransportError("request to " + scheme_host_port_ + " failed: " +
                         httplib::to_string(res.error()));
  }
  if (res->status == 429) throw RateLimited("provider rate limit (HTTP 429)");
  if (res->status >= 500) {
    throw TransportError(fmt::format("provider server error (HTTP {})", res->status));
  }
  if (res->status < 200 || res->status >= 300) {
    throw ProviderError(fmt::format("provider rejected the request (HTTP {}): {}", res->status,
                                    res->body.substr(0, 200)),
                        res->status);
  }
  try {
    json reply = json::parse(res->body);
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw ProviderError(std::string("malformed chat completion response: ") + e.what(), res->status);
  }
}

// ---------------------------------------------------------------------------
// Mock provider

std::map<std::string, std::string> MockProvider::load_canned(const fs::path& path) {
  try {
    return json::parse(io::read_file(path)).get<std::map<std::string, std::string>>();
  } catch (const json::exception& e) {
    throw DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string MockProvider::synthetic_reply(const std::string& digest, PromptMode mode) {
  std::string tag = digest.substr(0, 8);
  switch (mode) {
    case PromptMode::kCot:
      return fmt::format(
          "Proposed Improvements:\n1. Mock edit {}.\n\nImproved Translation:\nMock translation {}.\n",
          tag, tag);
    case PromptMode::kDirect:
      return fmt::format("Mock translation {}.", tag);
    case PromptMode::kZeroShot:
      return fmt::format("Mock zero-shot translation {}.", tag);
  }
  return tag;
}

std::string MockProvider::send(const CompletionRequest& request) {
  int now = ++inflight_;
  int seen = max_inflight_.load();
  while (now > seen && !max_inflight_.compare_exchange_weak(seen, now)) {
  }
  struct Leave {
    std::atomic<int>& n;
    ~Leave() { --n; }
  } leave{inflight_};

  std::string digest = request_digest(name(), request);
  std::optional<std::string> reply;
  std::optional<int> fail_status;
  {
    std::lock_guard lock(mu_);
    log_.push_back(digest);
    if (auto it = failures_.find(digest); it != failures_.end() && it->second.remaining != 0) {
      fail_status = it->second.status;
      if (it->second.remaining > 0) --it->second.remaining;
    }
    if (auto it = canned_.find(digest); it != canned_.end()) reply = it->second;
  }
  if (latency_.count() > 0) std::this_thread::sleep_for(latency_);
  if (fail_status) {
    if (*fail_status == 0) throw TransportError("mock transport failure");
    if (*fail_status == 429) throw RateLimited("mock rate limit");
    throw ProviderError(fmt::format("mock provider error (HTTP {})", *fail_status), *fail_status);
  }
  return reply ? *reply : synthetic_reply(digest, request.messages.mode);
}

void MockProvider::set_reply(const std::string& digest, std::string text) {
  std::lock_guard lock(mu_);
  canned_[digest] = std::move(text);
}

void MockProvider::fail(const std::string& digest, int status, int times) {
  std::lock_guard lock(mu_);
  failures_[digest] = {status, times};
}

std::vector<std::string> MockProvider::call_log() const {
  std::lock_guard lock(mu_);
  return log_;
}

std::size_t MockProvider::calls() const {
  std::lock_guard lock(mu_);
  return log_.size();
}

// ---------------------------------------------------------------------------
// Client

std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int retry, std::mt19937_64& rng) {
  double cap = static_cast<double>(policy.base_delay.count()) * std::pow(policy.multiplier, retry);
  std::uniform_real_distribution<double> dist(0.0, cap);
  return std::chrono::milliseconds(static_cast<long>(dist(rng)));
}

LlmClient::LlmClient(std::shared_ptr<Provider> provider, ClientOptions options)
    : provider_(std::move(provider)), options_(std::move(options)), rng_(options_.jitter_seed) {
  if (!provider_) throw ConfigError("no provider configured");
  if (!options_.sleep) {
    options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

std::string LlmClient::digest(const CompletionRequest& request) const {
  return request_digest(provider_->name(), request);
}

std::optional<fs::path> LlmClient::cache_path(const std::string& digest) const {
  if (!options_.cache_dir) return std::nullopt;
  return *options_.cache_dir / digest.substr(0, 2) / (digest + ".json");
}

std::optional<std::string> LlmClient::cache_lookup(const std::string& digest) const {
  auto path = cache_path(digest);
  if (!path || !fs::exists(*path)) return std::nullopt;
  try {
    json entry = json::parse(io::read_file(*path));
    return entry.at("response").get<std::string>();
  } catch (const std::exception&) {
    return std::nullopt;  // unreadable entry: treat as a miss and rewrite it
  }
}

void LlmClient::cache_store(const std::string& digest, const CompletionRequest& request,
                            const std::string& text) const {
  auto path = cache_path(digest);
  if (!path) return;
  json entry = {{"request", canonical_request(provider_->name(), request)}, {"response", text}};
  io::write_file_atomic(*path, entry.dump(2) + "\n");
}

std::string LlmClient::call_with_retries(const CompletionRequest& request) {
  for (int attempt = 0;; ++attempt) {
    try {
      return provider_->send(request);
    } catch (const RateLimited&) {
      if (attempt >= options_.retry.max_retries) {
        throw ProviderError(
            fmt::format("rate limited after {} retries", options_.retry.max_retries), 429);
      }
    } catch (const TransportError& e) {
      if (attempt >= options_.retry.max_retries) {
        throw TransportError(
            fmt::format("{} (after {} retries)", e.what(), options_.retry.max_retries));
      }
    }
    std::chrono::milliseconds delay;
    {
      std::lock_guard lock(rng_mu_);
      delay = backoff_delay(options_.retry, attempt, rng_);
    }
    options_.sleep(delay);
  }
}

CompletionResponse LlmClient::complete(const CompletionRequest& request) {
  if (request.model.empty()) throw ConfigError("completion request without a model");
  const auto start = std::chrono::steady_clock::now();
  std::string key = digest(request);
  CompletionResponse response;
  response.model = request.model;
  if (auto hit = cache_lookup(key)) {
    response.text = std::move(*hit);
    response.cached = true;
  } else {
    response.text = call_with_retries(request);
    cache_store(key, request, response.text);
  }
  response.latency_ms = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                              std::chrono::steady_clock::now() - start)
                                              .count());
  return response;
}

std::vector<BatchItem> LlmClient::batch_complete(const std::vector<CompletionRequest>& requests,
                                                 int max_inflight) {
  if (max_inflight < 1) throw DataError("max_inflight must be at least 1");
  std::vector<BatchItem> items(requests.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < requests.size(); i = next++) {
      BatchItem& item = items[i];
      try {
        item.response = complete(requests[i]);
      } catch (const TransportError& e) {
        item.error_kind = ErrorKind::kTransport;
        item.error = e.what();
      } catch (const ProviderError& e) {
        item.error_kind = ErrorKind::kProvider;
        item.error = e.what();
      } catch (const ConfigError& e) {
        item.error_kind = ErrorKind::kProvider;
        item.error = e.what();
      } catch (const std::exception& e) {
        item.error_kind = ErrorKind::kOther;
        item.error = e.what();
      }
    }
  };
  const std::size_t workers = std::min(requests.size(), static_cast<std::size_t>(max_inflight));
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(worker);
  }
  return items;
}

}  // namespace pe
