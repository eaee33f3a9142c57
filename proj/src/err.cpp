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

#include "pe/err.hpp"

#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <thread>
#include <unordered_map>

#include <fmt/format.h>
#include <httplib.h>

#include "pe/io.hpp"
#include "pe/metrics.hpp"
#include "pe/text.hpp"

namespace pe {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// JSON

void to_json(json& j, const ErrSample& s) {
  j = json{{"sample_id", s.sample_id},
           {"segment_id", s.segment_id},
           {"source", s.source},
           {"initial_translation", s.initial_translation},
           {"edits", s.edits},
           {"improved", s.improved},
           {"diff", s.diff},
           {"model", s.model}};
}

void from_json(const json& j, ErrSample& s) {
  j.at("sample_id").get_to(s.sample_id);
  j.at("segment_id").get_to(s.segment_id);
  j.at("source").get_to(s.source);
  j.at("initial_translation").get_to(s.initial_translation);
  j.at("edits").get_to(s.edits);
  j.at("improved").get_to(s.improved);
  j.at("diff").get_to(s.diff);
  j.at("model").get_to(s.model);
}

// `note` is omitted when absent so posted and served judgments compare
// byte for byte.
void to_json(json& j, const ErrJudgment& jd) {
  j = json{{"sample_id", jd.sample_id}, {"realized", jd.realized}, {"annotator", jd.annotator}};
  if (jd.note) j["note"] = *jd.note;
}

void from_json(const json& j, ErrJudgment& jd) {
  if (!j.is_object()) throw DataError("judgment must be a JSON object");
  auto sid = j.find("sample_id");
  if (sid == j.end() || !sid->is_string()) throw DataError("judgment needs a string sample_id");
  jd.sample_id = sid->get<std::string>();
  auto r = j.find("realized");
  if (r == j.end()) throw DataError("judgment needs 'realized'");
  if (r->is_boolean()) {
    jd.realized = r->get<bool>();
  } else if (r->is_number_integer() && (r->get<long>() == 0 || r->get<long>() == 1)) {
    jd.realized = r->get<long>() == 1;
  } else {
    throw DataError(fmt::format("'realized' must be a boolean, got {}", r->dump()));
  }
  auto a = j.find("annotator");
  if (a == j.end() || !a->is_string()) throw DataError("judgment needs a string annotator");
  jd.annotator = a->get<std::string>();
  auto note = j.find("note");
  if (note != j.end() && !note->is_null()) {
    if (!note->is_string()) throw DataError("'note' must be a string");
    jd.note = note->get<std::string>();
  } else {
    jd.note.reset();
  }
}

std::string samples_to_jsonl(const std::vector<ErrSample>& samples) {
  std::string out;
  for (const auto& s : samples) {
    out += json(s).dump();
    out += '\n';
  }
  return out;
}

std::vector<ErrSample> load_samples_jsonl(const fs::path& path) {
  std::string content = io::read_file(path);
  std::vector<ErrSample> samples;
  std::size_t lineno = 0;
  for (auto line : text::split_lines(content)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      samples.push_back(json::parse(line).get<ErrSample>());
    } catch (const std::exception& e) {
      throw DataError(fmt::format("line {}: {}", lineno, e.what()));
    }
  }
  return samples;
}

// ---------------------------------------------------------------------------
// Export / import / score

namespace {

// Uniform integer in [0, bound) from raw 64-bit draws, by rejection. Kept
// local because std::uniform_int_distribution differs across standard
// libraries and the export must be byte-stable.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t excess = (kMax % bound + 1) % bound;  // 2^64 mod bound
  while (true) {
    std::uint64_t x = rng();
    if (x <= kMax - excess) return x % bound;
  }
}

}  // namespace

std::vector<ErrSample> export_err_samples(const std::vector<PostEditResult>& results,
                                          const std::vector<Segment>& segments, int n,
                                          std::uint64_t seed) {
  if (n <= 0) throw DataError("sample size must be positive");
  std::vector<const PostEditResult*> eligible;
  for (const auto& r : results) {
    if (r.mode == PromptMode::kCot && r.ok() && !r.edits.empty() && !r.improved.empty()) {
      eligible.push_back(&r);
    }
  }
  if (static_cast<std::size_t>(n) > eligible.size()) {
    throw DataError(fmt::format("requested {} samples but only {} results are eligible", n,
                                eligible.size()));
  }
  std::unordered_map<std::string_view, const Segment*> by_id;
  for (const auto& s : segments) by_id.emplace(s.id, &s);

  std::mt19937_64 rng(seed);
  const std::size_t count = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + static_cast<std::size_t>(bounded(rng, eligible.size() - i));
    std::swap(eligible[i], eligible[j]);
  }

  std::vector<ErrSample> samples;
  samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const PostEditResult& r = *eligible[i];
    auto it = by_id.find(r.segment_id);
    if (it == by_id.end()) throw DataError("result refers to unknown segment " + r.segment_id);
    const Segment& seg = *it->second;
    ErrSample s;
    s.sample_id = fmt::format("err-{:04d}", i + 1);
    s.segment_id = seg.id;
    s.source = seg.source;
    s.initial_translation = seg.initial_translation;
    s.edits = r.edits;
    s.improved = r.improved;
    s.diff = align(seg.initial_translation, r.improved);
    s.model = r.model;
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<ErrJudgment> import_judgments(const fs::path& path,
                                          const std::vector<ErrSample>& samples,
                                          std::vector<std::string>* warnings) {
  std::unordered_map<std::string_view, bool> known;
  for (const auto& s : samples) known.emplace(s.sample_id, true);

  std::string content = io::read_file(path);
  std::vector<ErrJudgment> judgments;
  std::unordered_map<std::string, std::size_t> position;
  std::size_t lineno = 0;
  for (auto line : text::split_lines(content)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    ErrJudgment jd;
    try {
      jd = json::parse(line).get<ErrJudgment>();
    } catch (const std::exception& e) {
      throw DataError(fmt::format("line {}: {}", lineno, e.what()));
    }
    if (!known.contains(jd.sample_id)) {
      throw DataError(fmt::format("line {}: unknown sample_id '{}'", lineno, jd.sample_id));
    }
    auto [it, inserted] = position.emplace(jd.sample_id, judgments.size());
    if (inserted) {
      judgments.push_back(std::move(jd));
    } else {
      if (warnings) {
        warnings->push_back(fmt::format("line {}: sample '{}' judged again; keeping the later judgment",
                                        lineno, jd.sample_id));
      }
      judgments[it->second] = std::move(jd);
    }
  }
  return judgments;
}

double err_score(const std::vector<ErrJudgment>& judgments) {
  if (judgments.empty()) throw EmptyCorpus("no judgments to score");
  std::size_t realized = 0;
  for (const auto& j : judgments) realized += j.realized ? 1 : 0;
  return 100.0 * static_cast<double>(realized) / static_cast<double>(judgments.size());
}

// ---------------------------------------------------------------------------
// Annotation service

namespace {

constexpr const char* kFallbackPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>ERR annotation</title></head>
<body>
<h1>ERR annotation service</h1>
<p>The annotation UI bundle is not installed. Start the server with
<code>--static DIR</code> to serve it. The JSON API is available at
<code>/api/samples</code>, <code>/api/judgments</code> and <code>/api/progress</code>.</p>
</body></html>
)";

}  // namespace

struct AnnotationServer::Impl {
  std::vector<ErrSample> samples;
  std::unordered_map<std::string, std::size_t> sample_index;
  fs::path judgments_path;
  std::optional<fs::path> static_dir;

  std::mutex mu;
  std::map<std::size_t, ErrJudgment> latest;  // keyed by sample position

  httplib::Server server;
  std::thread thread;

  void load_existing() {
    if (!fs::exists(judgments_path)) return;
    for (auto& jd : import_judgments(judgments_path, samples)) {
      latest[sample_index.at(jd.sample_id)] = std::move(jd);
    }
  }

  json judgments_json() {
    std::lock_guard lock(mu);
    json arr = json::array();
    for (const auto& [pos, jd] : latest) arr.push_back(jd);
    return arr;
  }

  void routes() {
    server.Get("/api/samples", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(json(samples).dump(), "application/json");
    });
    server.Get("/api/judgments", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(judgments_json().dump(), "application/json");
    });
    server.Get("/api/progress", [this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lock(mu);
      json body = {{"total", samples.size()}, {"judged", latest.size()}};
      res.set_content(body.dump(), "application/json");
    });
    server.Post("/api/judgments", [this](const httplib::Request& req, httplib::Response& res) {
      auto fail = [&](int status, const std::string& msg) {
        res.status = status;
        res.set_content(json{{"error", msg}}.dump(), "application/json");
      };
      ErrJudgment jd;
      try {
        jd = json::parse(req.body).get<ErrJudgment>();
      } catch (const std::exception& e) {
        return fail(400, e.what());
      }
      auto it = sample_index.find(jd.sample_id);
      if (it == sample_index.end()) return fail(404, "unknown sample_id " + jd.sample_id);
      std::string line = json(jd).dump();
      {
        std::lock_guard lock(mu);
        try {
          io::append_line(judgments_path, line);
        } catch (const std::exception& e) {
          return fail(500, e.what());
        }
        latest[it->second] = jd;
      }
      res.set_content(line, "application/json");
    });
    bool mounted = static_dir && fs::is_directory(*static_dir) &&
                   server.set_mount_point("/", static_dir->string());
    if (!mounted) {
      server.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(kFallbackPage, "text/html; charset=utf-8");
      });
    }
  }
};

AnnotationServer::AnnotationServer(std::vector<ErrSample> samples, fs::path judgments_path,
                                   std::optional<fs::path> static_dir)
    : impl_(std::make_unique<Impl>()) {
  impl_->samples = std::move(samples);
  for (std::size_t i = 0; i < impl_->samples.size(); ++i) {
    if (!impl_->sample_index.emplace(impl_->samples[i].sample_id, i).second) {
      throw DataError("duplicate sample_id " + impl_->samples[i].sample_id);
    }
  }
  impl_->judgments_path = std::move(judgments_path);
  impl_->static_dir = std::move(static_dir);
  impl_->load_existing();
  impl_->routes();
  // httplib's default also sets SO_REUSEPORT, which lets a second server
  // silently share a port that is already in use.
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
}

AnnotationServer::~AnnotationServer() { stop(); }

int AnnotationServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
    if (bound <= 0) throw ServiceError("cannot bind " + host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    throw ServiceError(fmt::format("cannot bind {}:{} (port in use?)", host, port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void AnnotationServer::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

void AnnotationServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::unique_ptr<AnnotationServer> serve_annotation(std::vector<ErrSample> samples, int port,
                                                   fs::path judgments_path) {
  auto server = std::make_unique<AnnotationServer>(std::move(samples), std::move(judgments_path));
  server->start("127.0.0.1", port);
  return server;
}

}  // namespace pe
