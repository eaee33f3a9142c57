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

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pe/corpus.hpp"
#include "pe/spanedit.hpp"

namespace fixtures {

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(PE_FIXTURE_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// The en-de letters sentence whose translation contains "ServicesServices".
inline pe::Segment letters_segment() {
  auto j = nlohmann::json::parse(read_fixture("letters_segment.json"));
  pe::Segment s;
  s.id = "letters:0";
  s.lang = {"en", "de"};
  s.system = "letters";
  s.source = j.at("source").get<std::string>();
  s.initial_translation = j.at("initial_translation").get<std::string>();
  return s;
}

/// Ten one-span segments. The first seven post-edits touch the Major span
/// (substitution, deletion, inner insertion); the last three leave it alone
/// (identical, edits elsewhere, insertion at the span boundary).
inline std::vector<pe::E3sItem> e3s_corpus() {
  struct Row {
    const char* t;
    const char* t_prime;
    std::size_t start, end;
  };
  const Row rows[] = {
      {"the old house", "the new house", 4, 7},
      {"a red car", "a car", 2, 5},
      {"big dog barks", "big dogg barks", 4, 7},
      {"she sings well", "she sang well", 4, 9},
      {"we eat bread", "we ate bread", 3, 6},
      {"blue sky today", "blue skies today", 5, 8},
      {"fast train", "slow train", 0, 4},
      {"green grass", "green grass", 0, 5},
      {"cold water", "warm water", 5, 10},
      {"my cat", "my xcat", 3, 6},
  };
  std::vector<pe::E3sItem> items;
  int i = 0;
  for (const auto& r : rows) {
    std::string id = "syn:" + std::to_string(i++);
    items.push_back({id, r.t, r.t_prime,
                     {{id, r.start, r.end, pe::Severity::kMajor, "Accuracy/Mistranslation", "r1"}}});
  }
  return items;
}

}  // namespace fixtures
