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


// Serial vs OpenMP corpus kernels on synthetic data.

#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "pe/metrics.hpp"
#include "pe/spanedit.hpp"

namespace {

using pe::Execution;

std::vector<std::string> random_words(std::mt19937& rng, int len, int vocab) {
  std::uniform_int_distribution<int> w(0, vocab - 1);
  std::vector<std::string> out;
  for (int i = 0; i < len; ++i) out.push_back("w" + std::to_string(w(rng)));
  return out;
}

std::vector<std::pair<pe::TokenSeq, pe::TokenSeq>> ter_corpus(std::size_t n) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> len(15, 35);
  std::vector<std::pair<pe::TokenSeq, pe::TokenSeq>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    pe::TokenSeq hyp{random_words(rng, len(rng), 30), "de", pe::Casing::kFolded};
    pe::TokenSeq ref{random_words(rng, len(rng), 30), "de", pe::Casing::kFolded};
    pairs.emplace_back(std::move(hyp), std::move(ref));
  }
  return pairs;
}

std::vector<pe::E3sItem> e3s_corpus(std::size_t n) {
  std::mt19937 rng(12);
  std::uniform_int_distribution<int> len(80, 200), ch(0, 25), edit(0, 9);
  std::vector<pe::E3sItem> items;
  for (std::size_t i = 0; i < n; ++i) {
    std::string t;
    for (int k = len(rng); k > 0; --k) t += static_cast<char>('a' + ch(rng));
    std::string tp = t;
    for (auto& c : tp) {
      if (edit(rng) == 0) c = static_cast<char>('a' + ch(rng));
    }
    std::string id = "b:" + std::to_string(i);
    std::vector<pe::MqmSpan> spans;
    for (std::size_t s = 0; s + 10 <= t.size(); s += 40) {
      spans.push_back({id, s, s + 10, pe::Severity::kMajor, "Accuracy", "r1"});
    }
    items.push_back({id, t, tp, spans});
  }
  return items;
}

void BM_TerStatsAll(benchmark::State& state, Execution exec) {
  auto pairs = ter_corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pe::ter_stats_all(pairs, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_E3sCounts(benchmark::State& state, Execution exec) {
  auto items = e3s_corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pe::e3s_counts(items, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK_CAPTURE(BM_TerStatsAll, serial, Execution::kSerial)->Arg(64)->Arg(512);
BENCHMARK_CAPTURE(BM_TerStatsAll, parallel, Execution::kParallel)->Arg(64)->Arg(512);
BENCHMARK_CAPTURE(BM_E3sCounts, serial, Execution::kSerial)->Arg(64)->Arg(512);
BENCHMARK_CAPTURE(BM_E3sCounts, parallel, Execution::kParallel)->Arg(64)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
