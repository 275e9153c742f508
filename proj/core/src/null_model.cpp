#include "ctxsim/null_model.hpp"

#include <limits>
#include <string_view>

#include "ctxsim/error.hpp"

namespace ctxsim {

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  require(bound >= 1, "uniform_below: bound must be positive");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::vector<BagOfWords> shuffle_null_model(std::span<const BagOfWords> bags, std::uint64_t seed) {
  require(!bags.empty(), "null model needs at least one bag");
  const std::int64_t bag_total = bags.front().total;
  for (const auto& b : bags)
    require(b.total == bag_total, "null model needs equal bag totals ('" + bags.front().target +
                                      "' has " + std::to_string(bag_total) + ", '" + b.target +
                                      "' has " + std::to_string(b.total) + ")");

  std::vector<std::string_view> pool;
  pool.reserve(static_cast<std::size_t>(bag_total) * bags.size());
  for (const auto& b : bags)
    for (const auto& [word, n] : b.counts) pool.insert(pool.end(), static_cast<std::size_t>(n), word);

  Rng rng(seed);
  for (std::size_t i = pool.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(pool[i - 1], pool[j]);
  }

  std::vector<BagOfWords> out(bags.size());
  auto it = pool.begin();
  for (std::size_t b = 0; b < bags.size(); ++b) {
    out[b].target = bags[b].target;
    out[b].total = bag_total;
    for (std::int64_t k = 0; k < bag_total; ++k, ++it) {
      auto pos = out[b].counts.find(*it);
      if (pos == out[b].counts.end())
        out[b].counts.emplace(std::string(*it), 1);
      else
        ++pos->second;
    }
  }
  return out;
}

}  // namespace ctxsim
