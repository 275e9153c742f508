#include <array>
#include <cmath>
#include <set>

#include "ctxsim/error.hpp"
#include "ctxsim/null_model.hpp"
#include "ctxsim/rank_stats.hpp"
#include "ctxsim/similarity.hpp"
#include "doctest.h"
#include "synthetic_corpus.hpp"

using namespace ctxsim;

namespace {

BagOfWords bag(std::string target, std::initializer_list<std::pair<const char*, std::int64_t>> counts) {
  BagOfWords b;
  b.target = std::move(target);
  for (auto [w, c] : counts) {
    b.counts[w] = c;
    b.total += c;
  }
  return b;
}

std::map<std::string, std::int64_t> union_counts(std::span<const BagOfWords> bags) {
  std::map<std::string, std::int64_t> out;
  for (const auto& b : bags)
    for (const auto& [w, c] : b.counts) out[w] += c;
  return out;
}

}  // namespace

TEST_CASE("the engine is the standard 64-bit Mersenne Twister") {
  Rng rng;
  rng.discard(9999);
  CHECK(rng() == 9981545732273789042ull);
}

TEST_CASE("uniform_below") {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) CHECK(uniform_below(rng, 1) == 0);

  std::array<int, 6> hist{};
  for (int i = 0; i < 60000; ++i) {
    auto v = uniform_below(rng, 6);
    REQUIRE(v < 6);
    ++hist[v];
  }
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);

  const std::uint64_t huge = (1ull << 63) + 12345;
  for (int i = 0; i < 1000; ++i) CHECK(uniform_below(rng, huge) < huge);
}

TEST_CASE("shuffle conserves the pooled multiset and bag sizes") {
  std::vector<BagOfWords> bags{bag("joy", {{"bright", 3}, {"sun", 2}}), bag("fear", {{"dark", 4}, {"sun", 1}}),
                               bag("awe", {{"sky", 5}})};
  for (std::uint64_t seed : {0ull, 1ull, 42ull, ~0ull}) {
    auto shuffled = shuffle_null_model(bags, seed);
    REQUIRE(shuffled.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(shuffled[i].target == bags[i].target);
      CHECK(shuffled[i].total == 5);
      std::int64_t sum = 0;
      for (const auto& [w, c] : shuffled[i].counts) {
        CHECK(c > 0);
        sum += c;
      }
      CHECK(sum == 5);
    }
    CHECK(union_counts(shuffled) == union_counts(bags));
  }
}

TEST_CASE("shuffle is a function of the seed") {
  std::vector<BagOfWords> bags{bag("x", {{"a", 1}, {"b", 1}}), bag("y", {{"c", 1}, {"d", 1}})};
  auto a = shuffle_null_model(bags, 7), b = shuffle_null_model(bags, 7);
  for (std::size_t i = 0; i < 2; ++i) CHECK(a[i].counts == b[i].counts);

  std::set<std::map<std::string, std::int64_t, std::less<>>> first_bags;
  for (std::uint64_t seed = 7; seed < 27; ++seed) first_bags.insert(shuffle_null_model(bags, seed)[0].counts);
  CHECK(first_bags.size() > 1);
}

TEST_CASE("shuffle deals every permutation about equally often") {
  std::vector<BagOfWords> bags{bag("x", {{"a", 1}}), bag("y", {{"b", 1}}), bag("z", {{"c", 1}})};
  std::map<std::string, int> hist;
  for (std::uint64_t seed = 0; seed < 6000; ++seed) {
    auto s = shuffle_null_model(bags, seed);
    std::string key;
    for (const auto& b : s) key += b.counts.begin()->first;
    ++hist[key];
  }
  CHECK(hist.size() == 6);
  for (const auto& [perm, count] : hist) CHECK(std::abs(count - 1000) < 150);
}

TEST_CASE("shuffle requires equal bag sizes") {
  std::vector<BagOfWords> bags{bag("x", {{"a", 2}}), bag("y", {{"b", 3}})};
  CHECK_THROWS_AS(shuffle_null_model(bags, 0), DataError);
  CHECK_THROWS_AS(shuffle_null_model(std::span<const BagOfWords>{}, 0), DataError);
}

TEST_CASE("shuffled similarities are higher and more homogeneous on a planted corpus") {
  testing::TempDir tmp;
  testing::PlantedSpec spec;
  spec.seed = 8;
  auto planted = testing::write_planted_corpus(tmp.path(), spec);
  auto corpus = assemble_corpus(tmp.path(), planted.targets, CorpusOptions{});
  auto s = summary_stats(build_similarity_matrix(corpus.bags));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto r = summary_stats(build_similarity_matrix(shuffle_null_model(corpus.bags, seed)));
    CHECK(r.std < s.std);
    CHECK(r.mean > s.mean);
  }
}
