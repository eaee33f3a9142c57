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

#include "pe/corpus.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "pe/error.hpp"
#include "pe/io.hpp"
#include "pe/text.hpp"

namespace pe {

using nlohmann::json;

namespace {

bool valid_code(std::string_view code) {
  if (code.size() < 2 || code.size() > 3) return false;
  return std::all_of(code.begin(), code.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

std::string line_prefix(std::size_t line) { return fmt::format("line {}: ", line); }

}  // namespace

LangPair LangPair::parse(std::string_view spec) {
  auto dash = spec.find('-');
  if (dash == std::string_view::npos) {
    throw DataError(fmt::format("language pair '{}' must look like src-tgt", spec));
  }
  LangPair lp{std::string(spec.substr(0, dash)), std::string(spec.substr(dash + 1))};
  lp.validate();
  return lp;
}

void LangPair::validate() const {
  if (!valid_code(src) || !valid_code(tgt)) {
    throw DataError(fmt::format("invalid language codes '{}'-'{}'", src, tgt));
  }
  if (src == tgt) throw DataError("source and target language are identical: " + src);
}

void Segment::validate() const {
  if (id.empty()) throw DataError("segment id is empty");
  lang.validate();
  if (source.empty()) throw DataError("segment " + id + ": empty source");
  if (initial_translation.empty()) throw DataError("segment " + id + ": empty translation");
}

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::kMajor: return "Major";
    case Severity::kMinor: return "Minor";
    case Severity::kNeutral: return "Neutral";
  }
  return "?";
}

Severity parse_severity(std::string_view s) {
  std::string lower = text::to_lower(text::trim(s));
  if (lower == "major") return Severity::kMajor;
  if (lower == "minor") return Severity::kMinor;
  if (lower == "neutral") return Severity::kNeutral;
  if (lower.empty()) throw DataError("missing severity");
  throw DataError(fmt::format("unknown severity '{}'", s));
}

std::vector<MqmSpan> filter_major(const std::vector<MqmSpan>& spans) {
  std::vector<MqmSpan> out;
  std::copy_if(spans.begin(), spans.end(), std::back_inserter(out),
               [](const MqmSpan& s) { return s.severity == Severity::kMajor; });
  return out;
}

// ---------------------------------------------------------------------------
// JSON

void to_json(json& j, const LangPair& l) { j = json{{"src", l.src}, {"tgt", l.tgt}}; }

void from_json(const json& j, LangPair& l) {
  j.at("src").get_to(l.src);
  j.at("tgt").get_to(l.tgt);
}

void to_json(json& j, const Segment& s) {
  j = json{{"id", s.id},
           {"lang", s.lang},
           {"source", s.source},
           {"initial_translation", s.initial_translation},
           {"system", s.system}};
  j["reference"] = s.reference ? json(*s.reference) : json(nullptr);
  j["doc_id"] = s.doc_id ? json(*s.doc_id) : json(nullptr);
}

namespace {

std::optional<std::string> optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

void from_json(const json& j, Segment& s) {
  j.at("id").get_to(s.id);
  j.at("lang").get_to(s.lang);
  j.at("source").get_to(s.source);
  j.at("initial_translation").get_to(s.initial_translation);
  s.system = j.value("system", std::string());
  s.reference = optional_string(j, "reference");
  s.doc_id = optional_string(j, "doc_id");
}

void to_json(json& j, const MqmSpan& s) {
  j = json{{"segment_id", s.segment_id},
           {"start", s.start},
           {"end", s.end},
           {"severity", to_string(s.severity)},
           {"category", s.category}};
  j["rater"] = s.rater ? json(*s.rater) : json(nullptr);
}

void from_json(const json& j, MqmSpan& s) {
  j.at("segment_id").get_to(s.segment_id);
  j.at("start").get_to(s.start);
  j.at("end").get_to(s.end);
  s.severity = parse_severity(j.at("severity").get<std::string>());
  s.category = j.value("category", std::string());
  s.rater = optional_string(j, "rater");
}

std::string segments_to_jsonl(const std::vector<Segment>& segments) {
  std::string out;
  for (const auto& s : segments) {
    out += json(s).dump();
    out += '\n';
  }
  return out;
}

std::string spans_to_jsonl(const std::vector<MqmSpan>& spans) {
  std::string out;
  for (const auto& s : spans) {
    out += json(s).dump();
    out += '\n';
  }
  return out;
}

std::vector<MqmSpan> load_spans_jsonl(const std::filesystem::path& path) {
  std::string content = io::read_file(path);
  std::vector<MqmSpan> spans;
  std::size_t lineno = 0;
  for (auto line : text::split_lines(content)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      spans.push_back(json::parse(line).get<MqmSpan>());
    } catch (const json::exception& e) {
      throw DataError(line_prefix(lineno) + e.what());
    }
  }
  return spans;
}

// ---------------------------------------------------------------------------
// Plain corpora

namespace {

std::vector<Segment> load_tsv(std::string_view content, const LangPair& lang,
                              const std::string& system) {
  std::vector<Segment> out;
  std::size_t lineno = 0;
  std::size_t row = 0;
  for (auto line : text::split_lines(content)) {
    ++lineno;
    if (line.empty()) continue;
    auto cols = text::split(line, '\t');
    if (lineno == 1 && (cols[0] == "source" || cols[0] == "system")) continue;
    if (cols.size() < 2) {
      throw DataError(line_prefix(lineno) + "expected ≥2 columns");
    }
    Segment seg;
    seg.id = fmt::format("{}:{}", system, row++);
    seg.lang = lang;
    seg.source = std::string(cols[0]);
    seg.initial_translation = std::string(cols[1]);
    if (cols.size() >= 3 && !cols[2].empty()) seg.reference = std::string(cols[2]);
    seg.system = system;
    try {
      text::decode_utf8(line);
      seg.validate();
    } catch (const DataError& e) {
      throw DataError(line_prefix(lineno) + e.what());
    }
    out.push_back(std::move(seg));
  }
  return out;
}

std::vector<Segment> load_jsonl(std::string_view content, const LangPair& lang,
                                const std::string& system) {
  std::vector<Segment> out;
  std::size_t lineno = 0;
  std::size_t row = 0;
  for (auto line : text::split_lines(content)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      json j = json::parse(line);
      if (!j.is_object()) throw DataError("expected a JSON object");
      Segment seg;
      seg.system = j.contains("system") && j["system"].is_string() ? j["system"].get<std::string>()
                                                                   : system;
      seg.id = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>()
                                                       : fmt::format("{}:{}", seg.system, row);
      seg.lang = j.contains("lang") && !j["lang"].is_null() ? j["lang"].get<LangPair>() : lang;
      j.at("source").get_to(seg.source);
      j.at("initial_translation").get_to(seg.initial_translation);
      seg.reference = optional_string(j, "reference");
      seg.doc_id = optional_string(j, "doc_id");
      text::decode_utf8(seg.source);
      text::decode_utf8(seg.initial_translation);
      seg.validate();
      out.push_back(std::move(seg));
      ++row;
    } catch (const json::exception& e) {
      throw DataError(line_prefix(lineno) + e.what());
    } catch (const DataError& e) {
      throw DataError(line_prefix(lineno) + e.what());
    }
  }
  return out;
}

}  // namespace

std::vector<Segment> load_segments(const std::filesystem::path& path, CorpusFormat format,
                                   const LangPair& lang, const std::string& system) {
  // JSONL records may carry their own pair; each segment is validated anyway.
  if (format == CorpusFormat::kTsv) lang.validate();
  std::string content = io::read_file(path);
  auto segments = format == CorpusFormat::kTsv ? load_tsv(content, lang, system)
                                               : load_jsonl(content, lang, system);
  std::unordered_set<std::string> seen;
  for (const auto& s : segments) {
    if (!seen.insert(s.id).second) throw DataError("duplicate segment id " + s.id);
  }
  return segments;
}

// ---------------------------------------------------------------------------
// MQM

std::pair<std::string, std::vector<std::pair<std::size_t, std::size_t>>> strip_span_tags(
    std::string_view target) {
  static constexpr std::string_view kOpen = "<v>";
  static constexpr std::string_view kClose = "</v>";
  std::string stripped;
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t chars = 0;
  std::optional<std::size_t> open_at;
  std::size_t i = 0;
  while (i < target.size()) {
    if (target.substr(i, kOpen.size()) == kOpen) {
      if (open_at) throw DataError("nested <v> tag");
      open_at = chars;
      i += kOpen.size();
    } else if (target.substr(i, kClose.size()) == kClose) {
      if (!open_at) throw DataError("</v> without matching <v>");
      runs.emplace_back(*open_at, chars);
      open_at.reset();
      i += kClose.size();
    } else {
      if ((static_cast<unsigned char>(target[i]) & 0xC0) != 0x80) ++chars;
      stripped.push_back(target[i]);
      ++i;
    }
  }
  if (open_at) throw DataError("<v> without matching </v>");
  return {std::move(stripped), std::move(runs)};
}

namespace {

struct MqmColumns {
  std::size_t system = 0, seg_id = 1, source = 2, target = 3, category = 4, severity = 5;
  std::optional<std::size_t> rater;
  std::size_t required = 6;
};

std::optional<MqmColumns> header_columns(const std::vector<std::string_view>& cells) {
  if (cells.empty() || (cells[0] != "system" && cells[0] != "source")) return std::nullopt;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < cells.size(); ++i) index.emplace(std::string(cells[i]), i);
  MqmColumns cols;
  auto need = [&](const char* name) {
    auto it = index.find(name);
    if (it == index.end()) throw DataError(fmt::format("MQM header lacks column '{}'", name));
    return it->second;
  };
  cols.system = need("system");
  cols.seg_id = need("seg_id");
  cols.source = need("source");
  cols.target = need("target");
  cols.category = need("category");
  cols.severity = need("severity");
  if (auto it = index.find("rater"); it != index.end()) cols.rater = it->second;
  cols.required = std::max({cols.system, cols.seg_id, cols.source, cols.target, cols.category,
                            cols.severity}) + 1;
  return cols;
}

}  // namespace

std::vector<AnnotatedSegment> parse_mqm_tsv(const std::filesystem::path& path,
                                            const LangPair& lang) {
  lang.validate();
  std::string content = io::read_file(path);
  std::vector<AnnotatedSegment> out;
  std::map<std::string, std::size_t> by_id;
  MqmColumns cols;
  std::size_t lineno = 0;
  for (auto line : text::split_lines(content)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = text::split(line, '\t');
    if (lineno == 1) {
      if (auto hdr = header_columns(cells)) {
        cols = *hdr;
        continue;
      }
      if (cells.size() >= 7) cols.rater = 6;
    }
    if (cells.size() < cols.required) {
      throw DataError(line_prefix(lineno) +
                      fmt::format("expected ≥{} columns, got {}", cols.required, cells.size()));
    }
    std::string system(cells[cols.system]);
    std::string seg_id(cells[cols.seg_id]);
    std::string id = system + ":" + seg_id;

    std::string stripped;
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    try {
      text::decode_utf8(line);
      std::tie(stripped, runs) = strip_span_tags(cells[cols.target]);
    } catch (const DataError& e) {
      throw DataError(line_prefix(lineno) + "seg_id " + seg_id + ": " + e.what());
    }

    // "No-error" rows annotate a clean segment and carry no span.
    std::string sev_text = text::to_lower(text::trim(cells[cols.severity]));
    std::optional<Severity> severity;
    if (sev_text != "no-error") {
      try {
        severity = parse_severity(cells[cols.severity]);
      } catch (const DataError& e) {
        throw DataError(line_prefix(lineno) + "seg_id " + seg_id + ": " + e.what());
      }
    } else if (!runs.empty()) {
      throw DataError(line_prefix(lineno) + "seg_id " + seg_id + ": No-error row marks a span");
    }

    auto [it, inserted] = by_id.emplace(id, out.size());
    if (inserted) {
      Segment seg;
      seg.id = id;
      seg.lang = lang;
      seg.source = std::string(cells[cols.source]);
      seg.initial_translation = stripped;
      seg.system = system;
      try {
        seg.validate();
      } catch (const DataError& e) {
        throw DataError(line_prefix(lineno) + e.what());
      }
      out.push_back({std::move(seg), {}});
    } else if (out[it->second].segment.initial_translation != stripped) {
      throw DataError(line_prefix(lineno) + "seg_id " + seg_id +
                      ": target text conflicts with an earlier row of the same segment");
    }
    auto& entry = out[it->second];
    for (auto [b, e] : runs) {
      if (b == e) continue;  // empty <v></v> marks an omission; nothing to edit
      MqmSpan span;
      span.segment_id = id;
      span.start = b;
      span.end = e;
      span.severity = *severity;
      span.category = std::string(cells[cols.category]);
      if (cols.rater && *cols.rater < cells.size() && !cells[*cols.rater].empty()) {
        span.rater = std::string(cells[*cols.rater]);
      }
      entry.spans.push_back(std::move(span));
    }
  }
  return out;
}

}  // namespace pe
