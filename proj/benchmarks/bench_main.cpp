#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ctxsim/cluster.hpp"
#include "ctxsim/corpus.hpp"
#include "ctxsim/null_model.hpp"
#include "ctxsim/similarity.hpp"
#include "ctxsim/spectral.hpp"

namespace {

using namespace ctxsim;

// n bags of 2050 words drawn from a Zipf-ish vocabulary of `vocab` words.
std::vector<BagOfWords> make_bags(std::size_t n, std::size_t vocab, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> weights(vocab);
  for (std::size_t k = 0; k < vocab; ++k) weights[k] = 1.0 / static_cast<double>(k + 1);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::vector<BagOfWords> bags(n);
  for (std::size_t i = 0; i < n; ++i) {
    bags[i].target = "t" + std::to_string(i);
    for (int w = 0; w < 2050; ++w) ++bags[i].counts["w" + std::to_string(pick(rng))];
    bags[i].total = 2050;
  }
  return bags;
}

DenseMatrix random_symmetric(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = u(rng);
  return m;
}

void BM_Tokenize(benchmark::State& state) {
  std::string text;
  std::mt19937_64 rng(1);
  const char* words[] = {"the", "Joy", "of", "finding", "a", "quiet,", "sunlit", "morning!", "1984", "caf\xC3\xA9"};
  for (int i = 0; i < 10000; ++i) text += std::string(words[rng() % 10]) + " ";
  CleanupRules rules;
  rules.stoplist = {"the", "of"};
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(text, rules));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Tokenize);

void BM_SimilarityMatrix(benchmark::State& state) {
  const auto bags = make_bags(static_cast<std::size_t>(state.range(0)), 10000, 2);
  for (auto _ : state) benchmark::DoNotOptimize(build_similarity_matrix(bags, 1));
}
BENCHMARK(BM_SimilarityMatrix)->Arg(32)->Arg(130)->Unit(benchmark::kMillisecond);

void BM_Shuffle(benchmark::State& state) {
  const auto bags = make_bags(130, 10000, 3);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(shuffle_null_model(bags, seed++));
}
BENCHMARK(BM_Shuffle)->Unit(benchmark::kMillisecond);

void BM_Jacobi(benchmark::State& state) {
  const auto m = random_symmetric(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(m));
}
BENCHMARK(BM_Jacobi)->Arg(32)->Arg(130)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ElbowCurve(benchmark::State& state) {
  const auto m = random_symmetric(130);
  const auto spectrum = eigendecompose(m);
  for (auto _ : state) benchmark::DoNotOptimize(elbow_curve(m, spectrum));
}
BENCHMARK(BM_ElbowCurve)->Unit(benchmark::kMillisecond);

void BM_Ward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> pts(n, std::vector<double>(8));
  for (auto& p : pts)
    for (auto& v : p) v = g(rng);
  DistanceMatrix d{{}, DenseMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    d.labels.push_back("p" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < 8; ++k) s += (pts[i][k] - pts[j][k]) * (pts[i][k] - pts[j][k]);
      d.values(i, j) = std::sqrt(s);
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(ward_linkage(d));
}
BENCHMARK(BM_Ward)->Arg(130)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
