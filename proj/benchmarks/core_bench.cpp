#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "advq/diversity.hpp"
#include "advq/pairing.hpp"
#include "advq/random.hpp"
#include "advq/text.hpp"
#include "advq/vocabulary.hpp"

namespace {

using namespace advq;

std::vector<std::vector<std::string>> random_docs(std::size_t n, std::size_t vocab, Rng& rng) {
  std::vector<std::vector<std::string>> docs(n);
  for (auto& d : docs) {
    const auto len = 50 + rng.uniform(200);
    for (std::uint64_t i = 0; i < len; ++i) {
      // Squaring skews the draw toward low ids, roughly like word frequencies.
      const double u = rng.uniform_real();
      d.push_back("w" + std::to_string(static_cast<std::size_t>(u * u * static_cast<double>(vocab))));
    }
  }
  return docs;
}

void BM_Tokenize(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < 200; ++i) text += "I've been drinking coffee (about 6 cups!) every day... ";
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Tokenize);

void BM_TfidfVectors(benchmark::State& state) {
  Rng rng(1);
  const auto docs = random_docs(static_cast<std::size_t>(state.range(0)), 5000, rng);
  const auto stats = VocabularyStats::build(docs, 2, 2);
  for (auto _ : state) {
    for (const auto& d : docs) benchmark::DoNotOptimize(tfidf_vector(d, stats));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TfidfVectors)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_PairCandidates(benchmark::State& state) {
  Rng rng(2);
  const auto docs = random_docs(static_cast<std::size_t>(state.range(0)), 5000, rng);
  std::vector<TokenizedDoc> tdocs;
  for (std::size_t i = 0; i < docs.size(); ++i) tdocs.push_back({"d" + std::to_string(i), docs[i]});
  const auto stats = VocabularyStats::build(tdocs, 1, 2);
  NeighborParams params;
  params.exact = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(build_pair_candidates(tdocs, stats, params));
}
BENCHMARK(BM_PairCandidates)
    ->ArgNames({"docs", "exact"})
    ->Args({1000, 0})
    ->Args({1000, 1})
    ->Args({3000, 0})
    ->Args({3000, 1})
    ->Unit(benchmark::kMillisecond);

void BM_GreedyPair(benchmark::State& state) {
  Rng rng(3);
  std::vector<PairCandidate> candidates;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (std::size_t i = 0; i < n * 20; ++i) {
    auto a = rng.uniform(n), b = rng.uniform(n);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    candidates.push_back({"d" + std::to_string(a), "d" + std::to_string(b), rng.uniform_real()});
  }
  for (auto _ : state) benchmark::DoNotOptimize(greedy_pair(candidates));
}
BENCHMARK(BM_GreedyPair)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_KMeans(benchmark::State& state) {
  Rng rng(4);
  Matrix points(static_cast<std::size_t>(state.range(0)), 100);
  for (auto& x : points.data) x = rng.uniform_real();
  for (auto _ : state) benchmark::DoNotOptimize(cluster_topics(points, 20, 7, 20));
}
BENCHMARK(BM_KMeans)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
