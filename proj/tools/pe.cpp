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

// pe: post-editing experiment driver.
//
// Exit codes: 0 ok, 1 usage, 2 data, 3 provider/transport.

#include <csignal>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "pe/corpus.hpp"
#include "pe/err.hpp"
#include "pe/io.hpp"
#include "pe/llm_client.hpp"
#include "pe/metrics.hpp"
#include "pe/pipeline.hpp"
#include "pe/prompting.hpp"
#include "pe/report.hpp"
#include "pe/spanedit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitProvider = 3;

struct Globals {
  std::optional<fs::path> cache_dir;
  std::uint64_t seed = 0;
  std::string format = "text";
  bool parallel = false;

  pe::TableFormat table_format() const { return pe::parse_table_format(format); }
  pe::Execution exec() const { return parallel ? pe::Execution::kParallel : pe::Execution::kSerial; }
};

void warn(const std::string& msg) { std::cerr << "pe: warning: " << msg << "\n"; }

void require_file(const fs::path& path, std::string_view role, std::string_view flag) {
  if (!fs::exists(path)) {
    throw pe::UsageError(fmt::format("{} file ({}) not found: {}", role, flag, path.string()));
  }
}

// Writes to `out` atomically, or to stdout when `out` is empty.
void emit(const std::string& content, const std::string& out) {
  if (out.empty()) {
    std::cout << content;
  } else {
    pe::io::write_file_atomic(out, content);
  }
}

std::vector<pe::Segment> load_corpus(const fs::path& path) {
  require_file(path, "corpus", "--corpus");
  // JSONL carries its own ids and language pairs.
  return pe::load_segments(path, pe::CorpusFormat::kJsonl, pe::LangPair{}, "");
}

std::map<std::string, const pe::Segment*> index_segments(const std::vector<pe::Segment>& segs) {
  std::map<std::string, const pe::Segment*> by_id;
  for (const auto& s : segs) by_id[s.id] = &s;
  return by_id;
}

// ---------------------------------------------------------------------------
// ingest

struct IngestArgs {
  std::string input;
  std::string input_format = "tsv";
  std::string lang;
  std::string system = "system";
  std::string out;
  std::string spans_out;
};

int cmd_ingest(const IngestArgs& a) {
  require_file(a.input, "input", "--input");
  pe::LangPair lang = pe::LangPair::parse(a.lang);
  lang.validate();
  std::vector<pe::Segment> segments;
  std::vector<pe::MqmSpan> spans;
  if (a.input_format == "mqm") {
    for (auto& annotated : pe::parse_mqm_tsv(a.input, lang)) {
      segments.push_back(std::move(annotated.segment));
      spans.insert(spans.end(), annotated.spans.begin(), annotated.spans.end());
    }
  } else if (a.input_format == "tsv" || a.input_format == "jsonl") {
    segments = pe::load_segments(
        a.input, a.input_format == "tsv" ? pe::CorpusFormat::kTsv : pe::CorpusFormat::kJsonl, lang,
        a.system);
  } else {
    throw pe::UsageError("--input-format must be tsv, jsonl or mqm");
  }
  if (segments.empty()) warn("input holds no segments");
  pe::io::write_file_atomic(a.out, pe::segments_to_jsonl(segments));
  if (!a.spans_out.empty()) {
    pe::io::write_file_atomic(a.spans_out, pe::spans_to_jsonl(spans));
  } else if (!spans.empty()) {
    warn(fmt::format("{} spans parsed but --spans-out not given", spans.size()));
  }
  std::cerr << fmt::format("ingested {} segments, {} spans\n", segments.size(), spans.size());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// prompts

int cmd_prompts_show(const std::string& mode, const std::string& version) {
  std::vector<pe::PromptMode> modes;
  if (mode == "all") {
    modes = {pe::PromptMode::kCot, pe::PromptMode::kDirect, pe::PromptMode::kZeroShot};
  } else {
    modes = {pe::parse_prompt_mode(mode)};
  }
  for (auto m : modes) {
    auto t = pe::prompt_template(m, version);
    std::cout << fmt::format("== {} / {} / system ==\n{}\n\n== {} / {} / user ==\n{}\n\n",
                             pe::to_string(m), version, t.system_text, pe::to_string(m), version,
                             t.user_text);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// postedit / translate

struct RunArgs {
  std::string corpus;
  std::string mode = "cot";
  std::string model;
  std::string provider = "openai";
  std::string mock_file;
  std::string mock_log;
  std::string out;
  int max_inflight = 4;
  double temperature = 0.0;
  double top_p = 1.0;
  int max_tokens = 1024;
};

struct Backend {
  std::shared_ptr<pe::Provider> provider;
  std::shared_ptr<pe::MockProvider> mock;  // set for the mock provider
};

Backend make_backend(const RunArgs& a) {
  Backend b;
  if (a.provider == "openai") {
    b.provider = pe::OpenAiProvider::from_env({});
  } else if (a.provider == "mock") {
    b.mock = a.mock_file.empty()
                 ? std::make_shared<pe::MockProvider>()
                 : std::make_shared<pe::MockProvider>(pe::MockProvider::load_canned(a.mock_file));
    b.provider = b.mock;
  } else {
    throw pe::UsageError("--provider must be openai or mock");
  }
  return b;
}

void write_mock_log(const Backend& b, const std::string& path) {
  if (path.empty() || !b.mock) return;
  std::string log;
  for (const auto& d : b.mock->call_log()) log += d + "\n";
  pe::io::write_file_atomic(path, log);
}

pe::RunManifest start_manifest(const RunArgs& a, const pe::RunOptions& opt, std::string_view mode) {
  pe::RunManifest m;
  m.corpus_path = a.corpus;
  m.corpus_digest = pe::io::sha256_hex(pe::io::read_file(a.corpus));
  m.model = opt.model;
  m.mode = std::string(mode);
  m.prompt_version = std::string(pe::kPromptVersion);
  m.params = opt.params;
  m.run_id = pe::compute_run_id(m.corpus_digest, m.model, opt.mode, m.prompt_version, m.params);
  m.started_at = pe::io::utc_timestamp();
  return m;
}

pe::RunOptions run_options(const RunArgs& a, pe::PromptMode mode) {
  pe::RunOptions opt;
  opt.model = a.model;
  opt.mode = mode;
  opt.params = {a.temperature, a.top_p, a.max_tokens};
  opt.params.validate();
  opt.max_inflight = a.max_inflight;
  return opt;
}

int finish_run(pe::RunManifest& m, const pe::RunCounts& counts, const RunArgs& a) {
  m.finished_at = pe::io::utc_timestamp();
  m.counts = counts;
  pe::io::write_file_atomic(a.out + ".manifest.json", json(m).dump(2) + "\n");
  std::cerr << fmt::format("run {}: {} segments, {} ok, {} parse failures, {} call failures\n",
                           m.run_id, counts.segments, counts.successes, counts.parse_failures,
                           counts.call_failures);
  if (counts.segments > 0 && counts.call_failures == counts.segments) return kExitProvider;
  return kExitOk;
}

pe::LlmClient make_client(const Backend& b, const Globals& g) {
  pe::ClientOptions opts;
  opts.cache_dir = g.cache_dir;
  opts.jitter_seed = g.seed;
  return pe::LlmClient(b.provider, opts);
}

int cmd_postedit(const RunArgs& a, const Globals& g) {
  pe::PromptMode mode = pe::parse_prompt_mode(a.mode);
  if (mode == pe::PromptMode::kZeroShot) throw pe::UsageError("use `pe translate` for zeroshot");
  auto segments = load_corpus(a.corpus);
  auto opt = run_options(a, mode);
  Backend backend = make_backend(a);  // misconfiguration fails here, before any call
  auto client = make_client(backend, g);
  auto manifest = start_manifest(a, opt, pe::to_string(mode));
  if (segments.empty()) warn("corpus is empty");
  auto run = pe::run_postedit(client, segments, opt);
  pe::io::write_file_atomic(a.out, pe::results_to_jsonl(run.results));
  write_mock_log(backend, a.mock_log);
  return finish_run(manifest, run.counts, a);
}

int cmd_translate(const RunArgs& a, const Globals& g) {
  auto segments = load_corpus(a.corpus);
  auto opt = run_options(a, pe::PromptMode::kZeroShot);
  Backend backend = make_backend(a);
  auto client = make_client(backend, g);
  auto manifest = start_manifest(a, opt, "zeroshot");
  if (segments.empty()) warn("corpus is empty");
  auto run = pe::run_translate(client, segments, opt);
  pe::io::write_file_atomic(a.out, pe::translations_to_jsonl(run.translations));
  write_mock_log(backend, a.mock_log);
  return finish_run(manifest, run.counts, a);
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string corpus;
  std::string results;
  std::string zeroshot;
  std::string spans;
  std::string system;
  std::string casing = "folded";
  std::string initial_scores;
  std::string pe_scores;
  std::vector<std::string> scores;     // label:metric=path
  std::vector<std::string> hypotheses;  // label=results.jsonl
  double bin_width = 0.1;
  std::string out;
  std::string json_out;
};

std::map<std::string, const pe::PostEditResult*> ok_results(
    const std::vector<pe::PostEditResult>& results) {
  std::map<std::string, const pe::PostEditResult*> by_id;
  for (const auto& r : results) {
    if (r.ok()) by_id[r.segment_id] = &r;
  }
  return by_id;
}

std::string system_label(const EvalArgs& a, const std::vector<pe::PostEditResult>& results) {
  if (!a.system.empty()) return a.system;
  return results.empty() ? std::string("system") : results.front().model;
}

int cmd_eval_adherence(const EvalArgs& a, const Globals& g) {
  require_file(a.corpus, "initial translations corpus", "--corpus");
  require_file(a.results, "post-edit results", "--results");
  require_file(a.zeroshot, "zero-shot translations", "--zeroshot");
  auto segments = load_corpus(a.corpus);
  auto results = pe::load_results_jsonl(a.results);
  auto zs = pe::load_translations_jsonl(a.zeroshot);
  auto by_result = ok_results(results);
  std::map<std::string, const pe::ZeroShotTranslation*> by_z;
  for (const auto& z : zs) {
    if (!z.error) by_z[z.segment_id] = &z;
  }
  std::vector<pe::AdherenceTriple> triples;
  std::string lang;
  std::size_t skipped = 0;
  for (const auto& s : segments) {
    auto r = by_result.find(s.id);
    auto z = by_z.find(s.id);
    if (r == by_result.end() || z == by_z.end()) {
      ++skipped;
      continue;
    }
    lang = s.lang.tgt;
    triples.push_back({r->second->improved, s.initial_translation, z->second->text});
  }
  if (skipped) warn(fmt::format("{} segments lack a usable result or zero-shot output", skipped));
  pe::Casing casing = a.casing == "preserved" ? pe::Casing::kPreserved : pe::Casing::kFolded;
  if (a.casing != "folded" && a.casing != "preserved") {
    throw pe::UsageError("--casing must be folded or preserved");
  }
  auto row = pe::adherence_report(triples, lang, system_label(a, results), casing);
  if (!a.json_out.empty()) pe::io::write_file_atomic(a.json_out, json(row).dump(2) + "\n");
  emit(pe::render_adherence_table({row}, g.table_format()), a.out);
  return kExitOk;
}

int cmd_eval_e3s(const EvalArgs& a, const Globals& g) {
  require_file(a.spans, "MQM spans", "--spans");
  require_file(a.corpus, "initial translations corpus", "--corpus");
  require_file(a.results, "post-edit results", "--results");
  auto segments = load_corpus(a.corpus);
  auto results = pe::load_results_jsonl(a.results);
  auto spans = pe::filter_major(pe::load_spans_jsonl(a.spans));
  auto by_result = ok_results(results);
  std::map<std::string, std::vector<pe::MqmSpan>> by_segment;
  for (auto& s : spans) by_segment[s.segment_id].push_back(std::move(s));

  std::vector<pe::E3sItem> items;
  std::size_t skipped = 0;
  for (const auto& s : segments) {
    auto sp = by_segment.find(s.id);
    if (sp == by_segment.end()) continue;
    auto r = by_result.find(s.id);
    if (r == by_result.end()) {
      ++skipped;
      continue;
    }
    items.push_back({s.id, s.initial_translation, r->second->improved, sp->second});
  }
  if (skipped) warn(fmt::format("{} annotated segments lack a usable result", skipped));

  std::optional<std::map<std::string, double>> initial_qe, pe_qe;
  if (!a.initial_scores.empty()) {
    require_file(a.initial_scores, "initial QE scores", "--initial-scores");
    initial_qe = pe::load_external_scores(a.initial_scores);
  }
  if (!a.pe_scores.empty()) {
    require_file(a.pe_scores, "post-edit QE scores", "--pe-scores");
    pe_qe = pe::load_external_scores(a.pe_scores);
  }
  pe::QeScores qe{initial_qe ? &*initial_qe : nullptr, pe_qe ? &*pe_qe : nullptr};
  auto report = pe::e3s_score(items, system_label(a, results), qe, g.exec());
  if (!a.json_out.empty()) pe::io::write_file_atomic(a.json_out, json(report).dump(2) + "\n");
  emit(pe::render_e3s_table({report}, g.table_format()), a.out);
  return kExitOk;
}

double mean(const std::map<std::string, double>& scores) {
  if (scores.empty()) throw pe::EmptyCorpus("score file holds no scores");
  double sum = 0.0;
  for (const auto& [id, v] : scores) sum += v;
  return sum / static_cast<double>(scores.size());
}

int cmd_eval_quality(const EvalArgs& a, const Globals& g) {
  if (a.scores.empty() && a.hypotheses.empty()) {
    throw pe::UsageError("eval quality needs --scores or --hyp inputs");
  }
  std::vector<pe::QualityRow> rows;
  auto row_for = [&](const std::string& label) -> pe::QualityRow& {
    for (auto& r : rows) {
      if (r.label == label) return r;
    }
    rows.push_back({label, {}});
    return rows.back();
  };
  for (const auto& spec : a.scores) {
    auto colon = spec.find(':');
    auto eq = spec.find('=', colon == std::string::npos ? 0 : colon);
    if (colon == std::string::npos || eq == std::string::npos) {
      throw pe::UsageError("--scores expects label:metric=path, got " + spec);
    }
    std::string path = spec.substr(eq + 1);
    require_file(path, "score", "--scores");
    row_for(spec.substr(0, colon))
        .scores.emplace_back(spec.substr(colon + 1, eq - colon - 1),
                             mean(pe::load_external_scores(path)));
  }
  if (!a.hypotheses.empty()) {
    require_file(a.corpus, "reference corpus", "--corpus");
    auto segments = load_corpus(a.corpus);
    auto by_id = index_segments(segments);
    for (const auto& spec : a.hypotheses) {
      auto eq = spec.find('=');
      if (eq == std::string::npos) throw pe::UsageError("--hyp expects label=results.jsonl");
      std::string path = spec.substr(eq + 1);
      require_file(path, "hypothesis results", "--hyp");
      std::vector<std::pair<pe::TokenSeq, pe::TokenSeq>> pairs;
      double chrf_sum = 0.0;
      for (const auto& r : pe::load_results_jsonl(path)) {
        auto s = by_id.find(r.segment_id);
        if (!r.ok() || s == by_id.end() || !s->second->reference) continue;
        const auto& tgt = s->second->lang.tgt;
        pairs.emplace_back(pe::tokenize(r.improved, tgt), pe::tokenize(*s->second->reference, tgt));
        chrf_sum += pe::chrf(r.improved, *s->second->reference);
      }
      if (pairs.empty()) throw pe::EmptyCorpus("no results with references in " + path);
      auto& row = row_for(spec.substr(0, eq));
      row.scores.emplace_back("BLEU", pe::corpus_bleu(pairs));
      row.scores.emplace_back("chrF", chrf_sum / static_cast<double>(pairs.size()));
      row.scores.emplace_back("TER", pe::corpus_ter(pairs, g.exec()));
    }
  }
  if (!a.json_out.empty()) pe::io::write_file_atomic(a.json_out, json(rows).dump(2) + "\n");
  emit(pe::render_quality_table(rows, g.table_format()), a.out);
  return kExitOk;
}

int cmd_eval_histogram(const EvalArgs& a) {
  require_file(a.initial_scores, "initial scores", "--initial-scores");
  require_file(a.pe_scores, "post-edit scores", "--pe-scores");
  auto deltas = pe::score_deltas(pe::load_external_scores(a.initial_scores),
                                 pe::load_external_scores(a.pe_scores));
  emit(pe::histogram_to_tsv(pe::gain_histogram(deltas, a.bin_width)), a.out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// err

struct ErrArgs {
  std::string results;
  std::string corpus;
  std::string samples;
  std::string judgments;
  std::string static_dir;
  std::string host = "127.0.0.1";
  std::string out;
  int n = 50;
  int port = 8080;
};

int cmd_err_export(const ErrArgs& a, const Globals& g) {
  require_file(a.results, "post-edit results", "--results");
  auto segments = load_corpus(a.corpus);
  auto samples = pe::export_err_samples(pe::load_results_jsonl(a.results), segments, a.n, g.seed);
  pe::io::write_file_atomic(a.out, pe::samples_to_jsonl(samples));
  std::cerr << fmt::format("exported {} samples\n", samples.size());
  return kExitOk;
}

pe::AnnotationServer* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_err_serve(const ErrArgs& a) {
  require_file(a.samples, "ERR samples", "--samples");
  std::optional<fs::path> static_dir;
  if (!a.static_dir.empty()) static_dir = a.static_dir;
  pe::AnnotationServer server(pe::load_samples_jsonl(a.samples), a.judgments, static_dir);
  int port = server.start(a.host, a.port);
  std::cerr << fmt::format("serving {} on http://{}:{}/ (Ctrl-C to stop)\n", a.samples, a.host,
                           port);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.wait();
  g_server = nullptr;
  return kExitOk;
}

int cmd_err_score(const ErrArgs& a, const Globals& g) {
  require_file(a.samples, "ERR samples", "--samples");
  require_file(a.judgments, "judgments", "--judgments");
  auto samples = pe::load_samples_jsonl(a.samples);
  std::vector<std::string> warnings;
  auto judgments = pe::import_judgments(a.judgments, samples, &warnings);
  for (const auto& w : warnings) warn(w);
  double score = pe::err_score(judgments);
  std::size_t realized = 0;
  for (const auto& j : judgments) realized += j.realized ? 1 : 0;
  if (g.table_format() == pe::TableFormat::kTsv) {
    std::cout << fmt::format("err\trealized\tjudged\tsamples\n{}\t{}\t{}\t{}\n",
                             pe::format_fixed(score, 1), realized, judgments.size(),
                             samples.size());
  } else {
    std::cout << fmt::format("ERR {} ({} of {} judged samples realized; {} samples total)\n",
                             pe::format_fixed(score, 1), realized, judgments.size(),
                             samples.size());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report

template <typename T>
std::vector<T> load_reports(const std::vector<std::string>& paths) {
  std::vector<T> out;
  for (const auto& p : paths) {
    require_file(p, "report", "input");
    json j = json::parse(pe::io::read_file(p));
    if (j.is_array()) {
      for (const auto& e : j) out.push_back(e.get<T>());
    } else {
      out.push_back(j.get<T>());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

int run(int argc, char** argv) {
  CLI::App app{"Post-editing experiments with chat LLMs: run, evaluate, report."};
  app.require_subcommand(1);
  Globals g;
  std::string cache_dir;
  app.add_option("--cache-dir", cache_dir, "Response cache directory");
  app.add_option("--seed", g.seed, "Seed for sampling and retry jitter");
  app.add_option("--format", g.format, "Table format: text or tsv")
      ->check(CLI::IsMember({"text", "tsv"}));
  app.add_flag("--parallel", g.parallel, "Use OpenMP for corpus-level metric kernels");

  // ingest
  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Normalize a corpus into segments JSONL");
  ingest_cmd->add_option("--input", ingest.input)->required();
  ingest_cmd->add_option("--input-format", ingest.input_format)
      ->check(CLI::IsMember({"tsv", "jsonl", "mqm"}));
  ingest_cmd->add_option("--lang", ingest.lang, "Language pair, e.g. en-de")->required();
  ingest_cmd->add_option("--system", ingest.system, "MT system name for plain corpora");
  ingest_cmd->add_option("--out", ingest.out)->required();
  ingest_cmd->add_option("--spans-out", ingest.spans_out, "MQM spans JSONL (mqm input)");

  // prompts
  auto* prompts_cmd = app.add_subcommand("prompts", "Inspect prompt templates");
  prompts_cmd->require_subcommand(1);
  std::string prompt_mode = "all";
  std::string prompt_version{pe::kPromptVersion};
  auto* show_cmd = prompts_cmd->add_subcommand("show", "Print templates");
  show_cmd->add_option("--mode", prompt_mode)
      ->check(CLI::IsMember({"all", "cot", "direct", "zeroshot"}));
  show_cmd->add_option("--version", prompt_version);

  // postedit / translate
  RunArgs run_args;
  auto add_run_options = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", run_args.corpus, "Segments JSONL")->required();
    cmd->add_option("--model", run_args.model)->required();
    cmd->add_option("--provider", run_args.provider)->check(CLI::IsMember({"openai", "mock"}));
    cmd->add_option("--mock-file", run_args.mock_file, "Canned replies {digest: text}");
    cmd->add_option("--mock-log", run_args.mock_log, "Write mock call digests here");
    cmd->add_option("--out", run_args.out)->required();
    cmd->add_option("--max-inflight", run_args.max_inflight)->check(CLI::PositiveNumber);
    cmd->add_option("--temperature", run_args.temperature);
    cmd->add_option("--top-p", run_args.top_p);
    cmd->add_option("--max-tokens", run_args.max_tokens);
  };
  auto* postedit_cmd = app.add_subcommand("postedit", "Post-edit initial translations");
  add_run_options(postedit_cmd);
  postedit_cmd->add_option("--mode", run_args.mode)->check(CLI::IsMember({"cot", "direct"}));
  auto* translate_cmd = app.add_subcommand("translate", "Zero-shot translate sources");
  add_run_options(translate_cmd);

  // eval
  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Compute metrics");
  eval_cmd->require_subcommand(1);
  auto add_outputs = [&](CLI::App* cmd) {
    cmd->add_option("--out", eval.out, "Write the table here instead of stdout");
    cmd->add_option("--json-out", eval.json_out, "Also write the report as JSON");
  };
  auto* adherence_cmd = eval_cmd->add_subcommand("adherence", "TER(T',T) vs TER(T',Z)");
  adherence_cmd->add_option("--corpus", eval.corpus, "Segments JSONL (T)")->required();
  adherence_cmd->add_option("--results", eval.results, "Post-edit results (T')")->required();
  adherence_cmd->add_option("--zeroshot", eval.zeroshot, "Zero-shot translations (Z)")->required();
  adherence_cmd->add_option("--system", eval.system);
  adherence_cmd->add_option("--casing", eval.casing);
  add_outputs(adherence_cmd);
  auto* e3s_cmd = eval_cmd->add_subcommand("e3s", "Share of Major spans edited");
  e3s_cmd->add_option("--spans", eval.spans, "MQM spans JSONL")->required();
  e3s_cmd->add_option("--corpus", eval.corpus, "Segments JSONL (T)")->required();
  e3s_cmd->add_option("--results", eval.results, "Post-edit results (T')")->required();
  e3s_cmd->add_option("--initial-scores", eval.initial_scores, "QE scores of T");
  e3s_cmd->add_option("--pe-scores", eval.pe_scores, "QE scores of T'");
  e3s_cmd->add_option("--system", eval.system);
  add_outputs(e3s_cmd);
  auto* quality_cmd = eval_cmd->add_subcommand("quality", "Quality table");
  quality_cmd->add_option("--scores", eval.scores, "label:metric=scores.tsv (repeatable)");
  quality_cmd->add_option("--hyp", eval.hypotheses, "label=results.jsonl (repeatable)");
  quality_cmd->add_option("--corpus", eval.corpus, "Segments JSONL with references");
  add_outputs(quality_cmd);
  auto* histogram_cmd = eval_cmd->add_subcommand("histogram", "Score gain histogram");
  histogram_cmd->add_option("--initial-scores", eval.initial_scores)->required();
  histogram_cmd->add_option("--pe-scores", eval.pe_scores)->required();
  histogram_cmd->add_option("--bin-width", eval.bin_width)->check(CLI::PositiveNumber);
  histogram_cmd->add_option("--out", eval.out);

  // err
  ErrArgs err;
  auto* err_cmd = app.add_subcommand("err", "Edit realization rate workflow");
  err_cmd->require_subcommand(1);
  auto* export_cmd = err_cmd->add_subcommand("export", "Sample results for annotation");
  export_cmd->add_option("--results", err.results)->required();
  export_cmd->add_option("--corpus", err.corpus)->required();
  export_cmd->add_option("--n", err.n)->check(CLI::PositiveNumber);
  export_cmd->add_option("--out", err.out)->required();
  auto* serve_cmd = err_cmd->add_subcommand("serve", "Serve the annotation API and UI");
  serve_cmd->add_option("--samples", err.samples)->required();
  serve_cmd->add_option("--judgments", err.judgments)->required();
  serve_cmd->add_option("--port", err.port)->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", err.host);
  serve_cmd->add_option("--static-dir", err.static_dir, "Built annotation UI");
  auto* score_cmd = err_cmd->add_subcommand("score", "Score judgments");
  score_cmd->add_option("--samples", err.samples)->required();
  score_cmd->add_option("--judgments", err.judgments)->required();

  // report
  std::vector<std::string> report_inputs;
  std::string report_out;
  auto* report_cmd = app.add_subcommand("report", "Render tables from eval JSON reports");
  report_cmd->require_subcommand(1);
  std::map<std::string, CLI::App*> report_subs;
  for (const char* name : {"adherence", "quality", "e3s"}) {
    auto* sub = report_cmd->add_subcommand(name, std::string("Render the ") + name + " table");
    sub->add_option("inputs", report_inputs, "Report JSON files from eval --json-out")
        ->required();
    sub->add_option("--out", report_out);
    report_subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (!cache_dir.empty()) g.cache_dir = cache_dir;
  try {
    if (*ingest_cmd) return cmd_ingest(ingest);
    if (*show_cmd) return cmd_prompts_show(prompt_mode, prompt_version);
    if (*postedit_cmd) return cmd_postedit(run_args, g);
    if (*translate_cmd) return cmd_translate(run_args, g);
    if (*adherence_cmd) return cmd_eval_adherence(eval, g);
    if (*e3s_cmd) return cmd_eval_e3s(eval, g);
    if (*quality_cmd) return cmd_eval_quality(eval, g);
    if (*histogram_cmd) return cmd_eval_histogram(eval);
    if (*export_cmd) return cmd_err_export(err, g);
    if (*serve_cmd) return cmd_err_serve(err);
    if (*score_cmd) return cmd_err_score(err, g);
    if (*report_subs["adherence"]) {
      emit(pe::render_adherence_table(load_reports<pe::AdherenceRow>(report_inputs),
                                      g.table_format()),
           report_out);
      return kExitOk;
    }
    if (*report_subs["quality"]) {
      emit(pe::render_quality_table(load_reports<pe::QualityRow>(report_inputs), g.table_format()),
           report_out);
      return kExitOk;
    }
    if (*report_subs["e3s"]) {
      emit(pe::render_e3s_table(load_reports<pe::E3sReport>(report_inputs), g.table_format()),
           report_out);
      return kExitOk;
    }
  } catch (const pe::UsageError& e) {
    std::cerr << "pe: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pe::DataError& e) {
    std::cerr << "pe: data error: " << e.what() << "\n";
    return kExitData;
  } catch (const pe::ConfigError& e) {
    std::cerr << "pe: configuration error: " << e.what() << "\n";
    return kExitProvider;
  } catch (const pe::ProviderError& e) {
    std::cerr << "pe: provider error: " << e.what() << "\n";
    return kExitProvider;
  } catch (const pe::TransportError& e) {
    std::cerr << "pe: transport error: " << e.what() << "\n";
    return kExitProvider;
  } catch (const pe::ServiceError& e) {
    std::cerr << "pe: " << e.what() << "\n";
    return kExitProvider;
  } catch (const std::exception& e) {
    std::cerr << "pe: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
