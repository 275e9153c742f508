#include "ctxsim/rank_stats.hpp"

#include <algorithm>
#include <cmath>

#include "ctxsim/error.hpp"

namespace ctxsim {

RankedEntries rank_entries(const SimilarityMatrix& m) {
  const std::size_t n = m.size();
  RankedEntries ranked;
  ranked.reserve(n * (n - (n > 0 ? 1 : 0)) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      ranked.push_back({0, m(i, j), i, j, m.labels()[i], m.labels()[j]});
  std::sort(ranked.begin(), ranked.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  for (std::size_t r = 0; r < ranked.size(); ++r) ranked[r].rank = r + 1;
  return ranked;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "fit_line: x and y differ in length");
  require(x.size() >= 2, "fit_line: need at least two points");
  const double count = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  require(sxx > 0.0, "fit_line: x values have no spread");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

LinearFit fit_rank_range(const RankedEntries& ranked, std::size_t r_lo, std::size_t r_hi) {
  require(r_lo >= 1 && r_lo < r_hi && r_hi <= ranked.size(),
          "rank range [" + std::to_string(r_lo) + ", " + std::to_string(r_hi) +
              "] is invalid for " + std::to_string(ranked.size()) + " entries");
  std::vector<double> x, y;
  for (std::size_t r = r_lo; r <= r_hi; ++r) {
    x.push_back(static_cast<double>(r));
    y.push_back(ranked[r - 1].value);
  }
  return fit_line(x, y);
}

SummaryStats summary_stats(const SimilarityMatrix& m) {
  const std::size_t n = m.size();
  require(n >= 2, "summary statistics need n >= 2");
  SummaryStats s;
  s.n = n;
  s.entries = n * (n - 1) / 2;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) sum += m(i, j);
  s.mean = sum / static_cast<double>(s.entries);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) ss += (m(i, j) - s.mean) * (m(i, j) - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(s.entries));
  return s;
}

}  // namespace ctxsim
