#include <cmath>
#include <random>

#include "ctxsim/error.hpp"
#include "ctxsim/rank_stats.hpp"
#include "doctest.h"

using namespace ctxsim;

namespace {

SimilarityMatrix matrix(std::vector<std::vector<double>> rows) {
  const std::size_t n = rows.size();
  DenseMatrix m(n, n);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back("t" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return SimilarityMatrix(labels, m, SimilarityKind::normalized);
}

SimilarityMatrix random_matrix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("t" + std::to_string(i));
  SimilarityMatrix s(labels, SimilarityKind::normalized);
  for (std::size_t i = 0; i < n; ++i) {
    s.set(i, i, 1.0);
    for (std::size_t j = i + 1; j < n; ++j) s.set(i, j, u(rng));
  }
  return s;
}

}  // namespace

TEST_CASE("rank entries: order and ties") {
  const double c = 5.0 / std::sqrt(50.0);
  auto ranked = rank_entries(matrix({{1, c, 0}, {c, 1, 0}, {0, 0, 1}}));
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].rank == 1);
  CHECK(ranked[0].value == c);
  CHECK((ranked[0].i == 0 && ranked[0].j == 1));
  CHECK(ranked[0].label_i == "t0");
  CHECK(ranked[0].label_j == "t1");
  CHECK((ranked[1].i == 0 && ranked[1].j == 2));
  CHECK((ranked[2].i == 1 && ranked[2].j == 2));
  CHECK(ranked[2].rank == 3);

  auto two = rank_entries(matrix({{1, 0.3}, {0.3, 1}}));
  REQUIRE(two.size() == 1);
  CHECK(two[0].rank == 1);
}

TEST_CASE("rank entries: 130 targets give 8385 entries, values descending (property)") {
  auto ranked = rank_entries(random_matrix(130, 1));
  CHECK(ranked.size() == 8385);
  for (std::size_t r = 1; r < ranked.size(); ++r) {
    CHECK(ranked[r - 1].value >= ranked[r].value);
    CHECK(ranked[r].rank == r + 1);
    CHECK(ranked[r].i < ranked[r].j);
  }
}

TEST_CASE("linear fit") {
  std::vector<double> x{1, 2, 3};
  auto exact = fit_line(x, std::vector<double>{1, 2, 3});
  CHECK(exact.intercept == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(exact.slope == doctest::Approx(1.0));

  auto flat = fit_line(x, std::vector<double>{0.25, 0.25, 0.25});
  CHECK(flat.intercept == doctest::Approx(0.25));
  CHECK(flat.slope == doctest::Approx(0.0).epsilon(1e-15));

  auto worked = fit_line(x, std::vector<double>{0.9, 0.7, 0.2});
  CHECK(worked.slope == doctest::Approx(-0.35).epsilon(1e-12));
  CHECK(worked.intercept == doctest::Approx(1.3).epsilon(1e-12));

  CHECK_THROWS_AS(fit_line(std::vector<double>{1}, std::vector<double>{1}), DataError);
  CHECK_THROWS_AS(fit_line(std::vector<double>{2, 2}, std::vector<double>{1, 3}), DataError);
}

TEST_CASE("rank range fit") {
  auto ranked = rank_entries(matrix({{1, 0.9, 0.7}, {0.9, 1, 0.2}, {0.7, 0.2, 1}}));
  auto fit = fit_rank_range(ranked, 1, 3);
  CHECK(fit.slope == doctest::Approx(-0.35));
  CHECK(fit.intercept == doctest::Approx(1.3));
  CHECK_THROWS_AS(fit_rank_range(ranked, 2, 2), DataError);
  CHECK_THROWS_AS(fit_rank_range(ranked, 0, 2), DataError);
  CHECK_THROWS_AS(fit_rank_range(ranked, 1, 4), DataError);
}

TEST_CASE("summary statistics") {
  auto constant = summary_stats(matrix({{1, .4, .4}, {.4, 1, .4}, {.4, .4, 1}}));
  CHECK(constant.mean == doctest::Approx(0.4));
  CHECK(constant.std == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(constant.entries == 3);
  CHECK(constant.n == 3);

  auto worked = summary_stats(matrix({{1, 0, 1}, {0, 1, 0}, {1, 0, 1}}));
  CHECK(worked.mean == doctest::Approx(1.0 / 3.0));
  CHECK(worked.std == doctest::Approx(std::sqrt(2.0) / 3.0));

  auto ident = summary_stats(matrix({{1, 0}, {0, 1}}));
  CHECK(ident.mean == 0.0);
  CHECK(ident.std == 0.0);

  CHECK_THROWS_AS(summary_stats(matrix({{1}})), DataError);
}

TEST_CASE("summary statistics match a two-pass oracle (property)") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = random_matrix(3 + seed * 5, seed);
    auto ranked = rank_entries(s);
    double sum = 0;
    for (const auto& e : ranked) sum += e.value;
    const double mean = sum / static_cast<double>(ranked.size());
    double ss = 0;
    for (const auto& e : ranked) ss += (e.value - mean) * (e.value - mean);
    auto stats = summary_stats(s);
    CHECK(stats.mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(stats.std == doctest::Approx(std::sqrt(ss / static_cast<double>(ranked.size()))).epsilon(1e-12));
  }
}
