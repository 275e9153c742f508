#include <cmath>
#include <random>

#include "ctxsim/error.hpp"
#include "ctxsim/similarity.hpp"
#include "doctest.h"

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

BagOfWords random_bag(std::mt19937_64& rng, std::size_t vocab, std::int64_t max_count) {
  std::uniform_int_distribution<std::size_t> words(1, vocab);
  std::uniform_int_distribution<std::int64_t> count(1, max_count);
  BagOfWords b;
  b.target = "t";
  for (std::size_t k = words(rng); k > 0; --k) {
    auto w = "w" + std::to_string(words(rng) - 1);
    auto c = count(rng);
    b.counts[w] += c;
    b.total += c;
  }
  return b;
}

// Dense count vectors over the union vocabulary, multiplied term by term.
std::int64_t dense_dot_oracle(const BagOfWords& a, const BagOfWords& b, std::size_t vocab) {
  std::vector<std::int64_t> ya(vocab, 0), yb(vocab, 0);
  for (const auto& [w, c] : a.counts) ya[std::stoul(w.substr(1))] = c;
  for (const auto& [w, c] : b.counts) yb[std::stoul(w.substr(1))] = c;
  std::int64_t s = 0;
  for (std::size_t l = 0; l < vocab; ++l) s += ya[l] * yb[l];
  return s;
}

}  // namespace

TEST_CASE("raw similarity: worked examples") {
  CHECK(raw_similarity(bag("a", {{"a", 2}, {"b", 1}}), bag("b", {{"a", 1}, {"b", 3}})) == 5);
  for (std::int64_t n : {1, 7, 2050})
    CHECK(raw_similarity(bag("x", {{"w", n}}), bag("y", {{"w", n}})) == n * n);
  CHECK(raw_similarity(bag("x", {{"p", 3}}), bag("y", {{"q", 4}})) == 0);
}

TEST_CASE("vocabulary and vectorize") {
  std::vector<BagOfWords> bags{bag("x", {{"b", 1}}), bag("y", {{"a", 3}, {"c", 1}})};
  Vocabulary vocab(bags);
  REQUIRE(vocab.size() == 3);
  CHECK(vocab.word(0) == "a");
  CHECK(vocab.word(2) == "c");
  CHECK(vocab.index("b") == 1);
  CHECK_FALSE(vocab.contains("d"));
  CHECK_THROWS_AS(vocab.index("d"), DataError);

  std::vector<BagOfWords> ab{bag("x", {{"a", 1}, {"b", 1}})};
  auto y = vectorize(bag("t", {{"a", 3}}), Vocabulary(ab));
  CHECK(y.dimension == 2);
  CHECK(y.entries == std::vector<std::pair<std::uint32_t, std::int64_t>>{{0, 3}});
  CHECK_THROWS_WITH_AS(vectorize(bag("t", {{"zzz", 1}}), Vocabulary(ab)), doctest::Contains("zzz"),
                       DataError);
}

TEST_CASE("dot: dimension mismatch") {
  SparseVector a{{{0, 1}}, 2}, b{{{0, 1}}, 3};
  CHECK_THROWS_AS(dot(a, b), DataError);
}

TEST_CASE("multiset sum equals the sparse and dense dot products (property)") {
  std::mt19937_64 rng(2011);
  for (int c = 0; c < 2000; ++c) {
    const std::size_t vocab = 1 + c % 50;
    std::vector<BagOfWords> pair{random_bag(rng, vocab, 20), random_bag(rng, vocab, 20)};
    Vocabulary v(pair);
    const auto ya = vectorize(pair[0], v), yb = vectorize(pair[1], v);
    const auto multiset = raw_similarity(pair[0], pair[1]);
    CHECK(multiset == dot(ya, yb));
    CHECK(multiset == dense_dot_oracle(pair[0], pair[1], vocab));
    CHECK(multiset == raw_similarity(pair[1], pair[0]));
    // Cauchy-Schwarz on the integer values.
    const auto aa = raw_similarity(pair[0], pair[0]), bb = raw_similarity(pair[1], pair[1]);
    CHECK(static_cast<double>(multiset) * multiset <= static_cast<double>(aa) * bb);
  }
}

TEST_CASE("normalized similarity") {
  CHECK(normalized_similarity(49, 49, 49) == 1.0);
  CHECK(normalized_similarity(0, 4, 9) == 0.0);
  CHECK(normalized_similarity(5, 5, 10) == doctest::Approx(5.0 / std::sqrt(50.0)).epsilon(1e-15));
  CHECK(normalized_similarity(5, 5, 10) == doctest::Approx(0.70711).epsilon(1e-5));
  CHECK_THROWS_AS(normalized_similarity(0, 0, 5), DataError);
  CHECK_THROWS_AS(normalized_similarity(-1, 5, 5), DataError);
}

TEST_CASE("similarity matrix: worked examples") {
  std::vector<BagOfWords> three{bag("p", {{"a", 2}, {"b", 1}}), bag("q", {{"a", 1}, {"b", 3}}),
                                bag("r", {{"c", 4}})};
  auto s = build_similarity_matrix(three);
  CHECK(s.labels() == std::vector<std::string>{"p", "q", "r"});
  CHECK(s(0, 1) == doctest::Approx(0.70711).epsilon(1e-5));
  CHECK(s(0, 2) == 0.0);
  CHECK(s(1, 2) == 0.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(s(i, i) == 1.0);

  auto raw = build_raw_similarity_matrix(three);
  CHECK(raw.kind() == SimilarityKind::raw);
  CHECK(raw(0, 0) == 5.0);
  CHECK(raw(1, 1) == 10.0);
  CHECK(raw(2, 2) == 16.0);

  std::vector<BagOfWords> same{bag("x", {{"w", 3}, {"v", 1}}), bag("y", {{"w", 3}, {"v", 1}})};
  CHECK(build_similarity_matrix(same)(0, 1) == doctest::Approx(1.0));
  std::vector<BagOfWords> disjoint{bag("x", {{"w", 3}}), bag("y", {{"v", 3}})};
  CHECK(build_similarity_matrix(disjoint).values() == DenseMatrix::identity(2));

  std::vector<BagOfWords> one{bag("x", {{"w", 1}})};
  CHECK_THROWS_AS(build_similarity_matrix(one), DataError);
}

TEST_CASE("similarity matrix invariants (property)") {
  std::mt19937_64 rng(99);
  for (int c = 0; c < 50; ++c) {
    std::vector<BagOfWords> bags;
    const std::size_t n = 2 + c % 12;
    for (std::size_t i = 0; i < n; ++i) {
      bags.push_back(random_bag(rng, 30, 20));
      bags.back().target = "t" + std::to_string(i);
    }
    auto s = build_similarity_matrix(bags, 1 + c % 4);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(s(i, i) == 1.0);
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(s(i, j) == s(j, i));
        CHECK(s(i, j) >= 0.0);
        CHECK(s(i, j) <= 1.0 + 1e-15);
      }
    }
  }
}

TEST_CASE("similarity matrix constructor rejects bad input") {
  DenseMatrix asym(2, 2, 1.0);
  asym(0, 1) = 0.5;
  asym(1, 0) = 0.4;
  CHECK_THROWS_AS(SimilarityMatrix({"a", "b"}, asym, SimilarityKind::normalized), DataError);
  CHECK_THROWS_AS(SimilarityMatrix({"a"}, DenseMatrix(2, 2), SimilarityKind::normalized), DataError);
  CHECK_THROWS_AS(SimilarityMatrix({"a", "b"}, DenseMatrix(2, 3), SimilarityKind::normalized), DataError);
}
