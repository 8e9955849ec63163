// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "mqag/textmetrics.hpp"

namespace {

std::vector<std::string> random_tokens(std::mt19937_64& rng, std::size_t n) {
  static const char* const kWords[] = {"the", "van", "men", "armed", "police", "city",
                                       "robbed", "said", "on", "monday", "security", "cash"};
  std::vector<std::string> out(n);
  for (auto& t : out) t = kWords[rng() % std::size(kWords)];
  return out;
}

void BM_Lcs(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_tokens(rng, n / 8), b = random_tokens(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(mqag::text::lcs_length(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Lcs)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_Rouge1(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto a = random_tokens(rng, 60), b = random_tokens(rng, 600);
  for (auto _ : state) benchmark::DoNotOptimize(mqag::text::rouge1_f1(a, b));
}
BENCHMARK(BM_Rouge1);

void BM_Tokenize(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const std::string text = mqag::text::join(random_tokens(rng, 600));
  for (auto _ : state) benchmark::DoNotOptimize(mqag::text::tokenize(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Tokenize);

}  // namespace
