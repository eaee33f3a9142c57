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

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pe/metrics.hpp"
#include "pe/spanedit.hpp"

namespace pe {

enum class TableFormat { kText, kTsv };
TableFormat parse_table_format(std::string_view s);

enum class Direction { kHigherBetter, kLowerBetter };

/// TER-family metrics are lower-better; QE/COMET/chrF/BLEU/E3S and
/// anything unregistered are higher-better.
Direction metric_direction(std::string_view metric);

struct QualityRow {
  std::string label;
  std::vector<std::pair<std::string, double>> scores;  // metric -> score, column order
};

/// Text: aligned columns, the "*" suffix flags a cell. TSV: tab-separated
/// with flags moved to a separate trailing column.

/// System, TER(T′,Z), TER(T′,T) at one decimal; the smaller TER is flagged,
/// ties are noted instead.
std::string render_adherence_table(const std::vector<AdherenceRow>& rows, TableFormat format);

/// Best value per column flagged (all tied values), two decimals. Throws
/// DataError when rows do not share the same metric set.
std::string render_quality_table(const std::vector<QualityRow>& rows, TableFormat format);

/// System, Initial-QE, PE-QE, E3S at two decimals; absent QE cells blank.
std::string render_e3s_table(const std::vector<E3sReport>& reports, TableFormat format);

std::string format_fixed(double value, int decimals);

void to_json(nlohmann::json& j, const AdherenceRow& r);
void from_json(const nlohmann::json& j, AdherenceRow& r);
/// {"label": ..., "scores": [[metric, value], ...]} keeps column order.
void to_json(nlohmann::json& j, const QualityRow& r);
void from_json(const nlohmann::json& j, QualityRow& r);

}  // namespace pe
