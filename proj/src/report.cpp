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

#include "pe/report.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "pe/text.hpp"

namespace pe {

TableFormat parse_table_format(std::string_view s) {
  if (s == "text") return TableFormat::kText;
  if (s == "tsv") return TableFormat::kTsv;
  throw UsageError(fmt::format("unknown format '{}' (expected text or tsv)", s));
}

Direction metric_direction(std::string_view metric) {
  std::string lower = text::to_lower(metric);
  if (lower.starts_with("ter")) return Direction::kLowerBetter;
  return Direction::kHigherBetter;
}

std::string format_fixed(double value, int decimals) {
  std::string s = fmt::format("{:.{}f}", value, decimals);
  if (s.starts_with("-") && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

namespace {

using Grid = std::vector<std::vector<std::string>>;

// First column left-aligned, the rest right-aligned, two spaces apart.
std::string render_text(const Grid& grid) {
  std::vector<std::size_t> width;
  for (const auto& row : grid) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], text::length(row[c]));
    }
  }
  std::string out;
  for (const auto& row : grid) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::size_t pad = width[c] - text::length(row[c]);
      if (c == 0) {
        line += row[c];
        line.append(pad, ' ');
      } else {
        line += "  ";
        line.append(pad, ' ');
        line += row[c];
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line;
    out += '\n';
  }
  return out;
}

std::string render_tsv(const Grid& grid) {
  std::string out;
  for (const auto& row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += '\t';
      out += row[c];
    }
    out += '\n';
  }
  return out;
}

std::string render(const Grid& grid, TableFormat format) {
  return format == TableFormat::kText ? render_text(grid) : render_tsv(grid);
}

}  // namespace

std::string render_adherence_table(const std::vector<AdherenceRow>& rows, TableFormat format) {
  if (rows.empty()) throw DataError("adherence table needs at least one row");
  Grid grid;
  if (format == TableFormat::kText) {
    grid.push_back({"System", "TER(T′,Z)", "TER(T′,T)", ""});
    for (const auto& r : rows) {
      std::string z = format_fixed(r.ter_pe_vs_zeroshot, 1);
      std::string t = format_fixed(r.ter_pe_vs_initial, 1);
      std::string note;
      switch (r.closer_to) {
        case CloserTo::kInitial: t += '*'; break;
        case CloserTo::kZeroShot: z += '*'; break;
        case CloserTo::kTie: note = "tie"; break;
      }
      // Unflagged cells get a blank flag slot so digits stay aligned.
      if (!z.ends_with('*')) z += ' ';
      if (!t.ends_with('*')) t += ' ';
      grid.push_back({r.system, z, t, note});
    }
  } else {
    grid.push_back({"System", "TER(T′,Z)", "TER(T′,T)", "closer_to"});
    for (const auto& r : rows) {
      grid.push_back({r.system, format_fixed(r.ter_pe_vs_zeroshot, 1),
                      format_fixed(r.ter_pe_vs_initial, 1), std::string(to_string(r.closer_to))});
    }
  }
  return render(grid, format);
}

std::string render_quality_table(const std::vector<QualityRow>& rows, TableFormat format) {
  if (rows.empty()) throw DataError("quality table needs at least one row");
  std::vector<std::string> metrics;
  for (const auto& [m, v] : rows.front().scores) metrics.push_back(m);
  const std::set<std::string> expected(metrics.begin(), metrics.end());
  if (expected.size() != metrics.size()) throw DataError("duplicate metric column");

  // Reorder every row to the first row's column order.
  std::vector<std::vector<double>> values;
  for (const auto& row : rows) {
    std::set<std::string> keys;
    for (const auto& [m, v] : row.scores) keys.insert(m);
    if (keys != expected || row.scores.size() != metrics.size()) {
      throw DataError(fmt::format("row '{}' does not carry the same metrics as '{}'", row.label,
                                  rows.front().label));
    }
    std::vector<double> v(metrics.size());
    for (std::size_t c = 0; c < metrics.size(); ++c) {
      for (const auto& [m, x] : row.scores) {
        if (m == metrics[c]) v[c] = x;
      }
    }
    values.push_back(std::move(v));
  }

  std::vector<double> best(metrics.size());
  for (std::size_t c = 0; c < metrics.size(); ++c) {
    best[c] = values[0][c];
    for (const auto& v : values) {
      best[c] = metric_direction(metrics[c]) == Direction::kLowerBetter ? std::min(best[c], v[c])
                                                                        : std::max(best[c], v[c]);
    }
  }

  Grid grid;
  std::vector<std::string> header{"System"};
  header.insert(header.end(), metrics.begin(), metrics.end());
  if (format == TableFormat::kTsv) header.push_back("best");
  grid.push_back(header);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<std::string> line{rows[r].label};
    std::string flags;
    for (std::size_t c = 0; c < metrics.size(); ++c) {
      std::string cell = format_fixed(values[r][c], 2);
      bool flagged = values[r][c] == best[c];
      if (format == TableFormat::kText) {
        cell += flagged ? '*' : ' ';
      } else if (flagged) {
        if (!flags.empty()) flags += ',';
        flags += metrics[c];
      }
      line.push_back(std::move(cell));
    }
    if (format == TableFormat::kTsv) line.push_back(flags);
    grid.push_back(std::move(line));
  }
  return render(grid, format);
}

std::string render_e3s_table(const std::vector<E3sReport>& reports, TableFormat format) {
  if (reports.empty()) throw DataError("E3S table needs at least one report");
  Grid grid;
  grid.push_back({"System", "Initial-QE", "PE-QE", "E3S"});
  for (const auto& r : reports) {
    grid.push_back({r.system, r.initial_qe ? format_fixed(*r.initial_qe, 2) : "",
                    r.pe_qe ? format_fixed(*r.pe_qe, 2) : "", format_fixed(r.e3s, 2)});
  }
  return render(grid, format);
}

void to_json(nlohmann::json& j, const AdherenceRow& r) {
  j = {{"system", r.system},
       {"ter_pe_vs_zeroshot", r.ter_pe_vs_zeroshot},
       {"ter_pe_vs_initial", r.ter_pe_vs_initial},
       {"closer_to", to_string(r.closer_to)}};
}

void from_json(const nlohmann::json& j, AdherenceRow& r) {
  j.at("system").get_to(r.system);
  j.at("ter_pe_vs_zeroshot").get_to(r.ter_pe_vs_zeroshot);
  j.at("ter_pe_vs_initial").get_to(r.ter_pe_vs_initial);
  r.closer_to = parse_closer_to(j.at("closer_to").get<std::string>());
}

void to_json(nlohmann::json& j, const QualityRow& r) {
  j = {{"label", r.label}, {"scores", r.scores}};
}

void from_json(const nlohmann::json& j, QualityRow& r) {
  j.at("label").get_to(r.label);
  j.at("scores").get_to(r.scores);
}

}  // namespace pe
