#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ctxsim/similarity.hpp"

namespace ctxsim {

struct RankedEntry {
  std::size_t rank = 0;  // 1-based
  double value = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;  // i < j
  std::string label_i;
  std::string label_j;
};

// The n(n-1)/2 off-diagonal entries, largest first; ties ordered by (i, j).
using RankedEntries = std::vector<RankedEntry>;

RankedEntries rank_entries(const SimilarityMatrix& m);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
};

// Ordinary least squares y ~ intercept + slope * x. Throws DataError with
// fewer than two points or zero spread in x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// Fit of value against rank over ranks r_lo..r_hi inclusive.
LinearFit fit_rank_range(const RankedEntries& ranked, std::size_t r_lo, std::size_t r_hi);

struct SummaryStats {
  double mean = 0.0;
  double std = 0.0;  // population
  std::size_t n = 0;
  std::size_t entries = 0;
};

// Mean and population standard deviation of the distinct off-diagonal entries.
SummaryStats summary_stats(const SimilarityMatrix& m);

}  // namespace ctxsim
