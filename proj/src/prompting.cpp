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

#include "pe/prompting.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "pe/error.hpp"
#include "pe/text.hpp"
#include "prompt_resources.hpp"

namespace pe {

using nlohmann::json;

std::string_view to_string(PromptMode m) {
  switch (m) {
    case PromptMode::kCot: return "cot";
    case PromptMode::kDirect: return "direct";
    case PromptMode::kZeroShot: return "zeroshot";
  }
  return "?";
}

PromptMode parse_prompt_mode(std::string_view s) {
  if (s == "cot") return PromptMode::kCot;
  if (s == "direct") return PromptMode::kDirect;
  if (s == "zeroshot") return PromptMode::kZeroShot;
  throw DataError(fmt::format("unknown mode '{}' (expected cot, direct or zeroshot)", s));
}

void DecodingParams::validate() const {
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw DataError("temperature must be >= 0");
  }
  if (!(top_p > 0.0 && top_p <= 1.0)) throw DataError("top_p must be in (0, 1]");
  if (max_tokens <= 0) throw DataError("max_tokens must be positive");
}

std::string language_name(std::string_view code) {
  static const std::map<std::string_view, std::string_view> kNames = {
      {"ar", "Arabic"},    {"bg", "Bulgarian"}, {"bn", "Bengali"},    {"cs", "Czech"},
      {"da", "Danish"},    {"de", "German"},    {"el", "Greek"},      {"en", "English"},
      {"es", "Spanish"},   {"et", "Estonian"},  {"fi", "Finnish"},    {"fr", "French"},
      {"ha", "Hausa"},     {"he", "Hebrew"},    {"hi", "Hindi"},      {"hr", "Croatian"},
      {"hu", "Hungarian"}, {"id", "Indonesian"}, {"is", "Icelandic"}, {"it", "Italian"},
      {"iu", "Inuktitut"}, {"ja", "Japanese"},  {"km", "Khmer"},      {"ko", "Korean"},
      {"liv", "Livonian"}, {"lt", "Lithuanian"}, {"lv", "Latvian"},   {"ms", "Malay"},
      {"nl", "Dutch"},     {"no", "Norwegian"}, {"pl", "Polish"},     {"ps", "Pashto"},
      {"pt", "Portuguese"}, {"ro", "Romanian"}, {"ru", "Russian"},    {"sah", "Yakut"},
      {"sk", "Slovak"},    {"sl", "Slovenian"}, {"sr", "Serbian"},    {"sv", "Swedish"},
      {"ta", "Tamil"},     {"th", "Thai"},      {"tr", "Turkish"},    {"uk", "Ukrainian"},
      {"vi", "Vietnamese"}, {"zh", "Chinese"},
  };
  auto it = kNames.find(code);
  return it == kNames.end() ? std::string(code) : std::string(it->second);
}

PromptTemplate prompt_template(PromptMode mode, std::string_view version) {
  std::string prefix(to_string(mode));
  std::optional<std::string_view> system, user;
  for (const auto& r : detail::prompt_resources()) {
    if (r.version != version) continue;
    if (r.name == prefix + ".system") system = r.text;
    if (r.name == prefix + ".user") user = r.text;
  }
  if (!system || !user) {
    throw DataError(fmt::format("no {} prompt for version '{}'", prefix, version));
  }
  return {*system, *user};
}

namespace {

using Vars = std::array<std::pair<std::string_view, std::string_view>, 4>;

// Single pass, so placeholder-like text inside S or T is never expanded.
std::string render(std::string_view tmpl, const Vars& vars) {
  std::string out;
  out.reserve(tmpl.size() + 256);
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      auto close = tmpl.find('}', i);
      if (close != std::string_view::npos) {
        auto key = tmpl.substr(i + 1, close - i - 1);
        auto it = std::find_if(vars.begin(), vars.end(), [&](const auto& v) { return v.first == key; });
        if (it != vars.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

PromptMessages build(const Segment& segment, PromptMode mode) {
  segment.validate();
  std::string src = language_name(segment.lang.src);
  std::string tgt = language_name(segment.lang.tgt);
  std::string_view translation = mode == PromptMode::kZeroShot ? std::string_view()
                                                              : segment.initial_translation;
  Vars vars{{{"src_lang", src}, {"tgt_lang", tgt}, {"source", segment.source},
             {"translation", translation}}};
  auto tmpl = prompt_template(mode);
  return {render(tmpl.system_text, vars), render(tmpl.user_text, vars), mode};
}

}  // namespace

PromptMessages build_postedit_prompt(const Segment& segment, PromptMode mode) {
  if (mode == PromptMode::kZeroShot) {
    throw DataError("post-edit prompts are built for cot or direct mode");
  }
  return build(segment, mode);
}

PromptMessages build_zeroshot_prompt(const Segment& segment) {
  return build(segment, PromptMode::kZeroShot);
}

// ---------------------------------------------------------------------------
// Output parsing

namespace {

enum class LineKind { kOther, kImprovements, kTranslation };

struct Classified {
  LineKind kind = LineKind::kOther;
  std::string_view rest;
};

bool is_emphasis(char c) { return c == '*' || c == '_'; }

bool iequals_prefix(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) return false;
  }
  return true;
}

// A header line is "[#...] [**]Proposed Improvements[**][:][**] [rest]".
// Without a colon the header must end the line.
Classified classify(std::string_view line) {
  std::string_view s = text::trim(line);
  while (!s.empty() && (s.front() == '#' || s.front() == ' ')) s.remove_prefix(1);
  while (!s.empty() && is_emphasis(s.front())) s.remove_prefix(1);
  static constexpr std::pair<std::string_view, LineKind> kHeaders[] = {
      {"proposed improvements", LineKind::kImprovements},
      {"proposed improvement", LineKind::kImprovements},
      {"improved translation", LineKind::kTranslation},
  };
  for (auto [prefix, kind] : kHeaders) {
    if (!iequals_prefix(s, prefix)) continue;
    std::string_view r = s.substr(prefix.size());
    while (!r.empty() && (is_emphasis(r.front()) || r.front() == ' ')) r.remove_prefix(1);
    if (!r.empty() && r.front() == ':') {
      r.remove_prefix(1);
      while (!r.empty() && (is_emphasis(r.front()) || r.front() == ' ')) r.remove_prefix(1);
      return {kind, text::trim(r)};
    }
    if (r.empty()) return {kind, {}};
  }
  return {};
}

// Numbered-list markers: "1.", "1)", "- ".
std::optional<std::string_view> strip_item_marker(std::string_view line) {
  std::string_view s = text::trim(line);
  if (s.size() >= 2 && s[0] == '-' && s[1] == ' ') return text::trim(s.substr(2));
  std::size_t d = 0;
  while (d < s.size() && std::isdigit(static_cast<unsigned char>(s[d]))) ++d;
  if (d == 0 || d >= s.size() || (s[d] != '.' && s[d] != ')')) return std::nullopt;
  std::string_view rest = s.substr(d + 1);
  if (!rest.empty() && rest.front() != ' ' && rest.front() != '\t') return std::nullopt;
  return text::trim(rest);
}

std::string strip_surrounding_quotes(std::string_view s) {
  static constexpr std::pair<std::string_view, std::string_view> kPairs[] = {
      {"\"", "\""}, {"'", "'"}, {"“", "”"}, {"„", "“"},
      {"«", "»"}, {"「", "」"},
  };
  for (auto [open, close] : kPairs) {
    if (s.size() < open.size() + close.size()) continue;
    if (s.substr(0, open.size()) != open || s.substr(s.size() - close.size()) != close) continue;
    std::string_view inner = s.substr(open.size(), s.size() - open.size() - close.size());
    if (inner.find(open) != std::string_view::npos || inner.find(close) != std::string_view::npos) {
      continue;
    }
    return std::string(text::trim(inner));
  }
  return std::string(s);
}

bool is_none_item(std::string_view item) {
  std::string lower = text::to_lower(item);
  return lower == "none" || lower == "none." || lower == "n/a";
}

}  // namespace

ParsedPostEdit parse_postedit_output(std::string_view raw, PromptMode mode) {
  if (mode == PromptMode::kZeroShot) throw DataError("zero-shot output has no edit list");
  if (mode == PromptMode::kDirect) {
    std::string improved(text::trim(raw));
    if (improved.empty()) throw ParseError("empty model output", std::string(raw));
    return {{}, std::move(improved)};
  }

  auto lines = text::split_lines(raw);
  std::vector<Classified> kinds;
  kinds.reserve(lines.size());
  for (auto line : lines) kinds.push_back(classify(line));

  // The last translation header is authoritative.
  std::optional<std::size_t> tr;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (kinds[i].kind == LineKind::kTranslation) tr = i;
  }
  if (!tr) throw ParseError("missing 'Improved Translation' header", std::string(raw));

  std::vector<std::string_view> body;
  if (!kinds[*tr].rest.empty()) body.push_back(kinds[*tr].rest);
  for (std::size_t i = *tr + 1; i < lines.size(); ++i) {
    if (kinds[i].kind == LineKind::kImprovements) break;
    body.push_back(lines[i]);
  }
  std::string joined;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) joined += '\n';
    joined += body[i];
  }
  std::string improved = strip_surrounding_quotes(text::trim(joined));
  if (improved.empty()) throw ParseError("empty improved translation", std::string(raw));

  // Edit list: the last improvements header before the translation,
  // otherwise the first one after it.
  std::optional<std::size_t> imp;
  for (std::size_t i = 0; i < *tr; ++i) {
    if (kinds[i].kind == LineKind::kImprovements) imp = i;
  }
  if (!imp) {
    for (std::size_t i = *tr + 1; i < kinds.size(); ++i) {
      if (kinds[i].kind == LineKind::kImprovements) {
        imp = i;
        break;
      }
    }
  }

  std::vector<std::string> edits;
  if (imp) {
    std::vector<std::string_view> section;
    if (!kinds[*imp].rest.empty()) section.push_back(kinds[*imp].rest);
    for (std::size_t i = *imp + 1; i < lines.size() && kinds[i].kind == LineKind::kOther; ++i) {
      section.push_back(lines[i]);
    }
    for (auto line : section) {
      if (text::trim(line).empty()) continue;
      if (auto item = strip_item_marker(line)) {
        edits.emplace_back(*item);
      } else if (!edits.empty()) {
        edits.back() += ' ';
        edits.back() += text::trim(line);
      } else {
        edits.emplace_back(text::trim(line));
      }
    }
    std::erase_if(edits, [](const std::string& e) { return e.empty() || is_none_item(e); });
  }
  return {std::move(edits), std::move(improved)};
}

std::string render_postedit_output(const std::vector<std::string>& edits,
                                   std::string_view improved) {
  std::string out = "Proposed Improvements:\n";
  for (std::size_t i = 0; i < edits.size(); ++i) {
    out += fmt::format("{}. {}\n", i + 1, edits[i]);
  }
  out += "\nImproved Translation:\n";
  out += improved;
  out += '\n';
  return out;
}

// ---------------------------------------------------------------------------
// JSON

void to_json(json& j, const DecodingParams& p) {
  j = json{{"temperature", p.temperature}, {"top_p", p.top_p}, {"max_tokens", p.max_tokens}};
}

void from_json(const json& j, DecodingParams& p) {
  j.at("temperature").get_to(p.temperature);
  j.at("top_p").get_to(p.top_p);
  j.at("max_tokens").get_to(p.max_tokens);
}

void to_json(json& j, const PostEditResult& r) {
  j = json{{"segment_id", r.segment_id},
           {"mode", to_string(r.mode)},
           {"raw_output", r.raw_output},
           {"edits", r.edits},
           {"improved", r.improved},
           {"model", r.model},
           {"params", r.params},
           {"prompt_version", r.prompt_version},
           {"created_at", r.created_at}};
  j["error"] = r.error ? json(*r.error) : json(nullptr);
}

void from_json(const json& j, PostEditResult& r) {
  j.at("segment_id").get_to(r.segment_id);
  r.mode = parse_prompt_mode(j.at("mode").get<std::string>());
  j.at("raw_output").get_to(r.raw_output);
  j.at("edits").get_to(r.edits);
  j.at("improved").get_to(r.improved);
  j.at("model").get_to(r.model);
  j.at("params").get_to(r.params);
  r.prompt_version = j.value("prompt_version", std::string(kPromptVersion));
  r.created_at = j.value("created_at", std::string());
  if (auto it = j.find("error"); it != j.end() && !it->is_null()) {
    r.error = it->get<std::string>();
  } else {
    r.error.reset();
  }
}

void to_json(json& j, const ZeroShotTranslation& z) {
  j = json{{"segment_id", z.segment_id}, {"text", z.text}, {"model", z.model}};
  j["error"] = z.error ? json(*z.error) : json(nullptr);
}

void from_json(const json& j, ZeroShotTranslation& z) {
  j.at("segment_id").get_to(z.segment_id);
  j.at("text").get_to(z.text);
  j.at("model").get_to(z.model);
  if (auto it = j.find("error"); it != j.end() && !it->is_null()) {
    z.error = it->get<std::string>();
  } else {
    z.error.reset();
  }
}

}  // namespace pe
