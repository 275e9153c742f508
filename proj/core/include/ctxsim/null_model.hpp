#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ctxsim/corpus.hpp"

namespace ctxsim {

// All randomness uses std::mt19937_64, whose output sequence is fixed by the
// C++ standard. Bounded draws use rejection sampling (below) instead of
// std::uniform_int_distribution, whose algorithm is implementation-defined.
using Rng = std::mt19937_64;

// Uniform integer in [0, bound) for bound >= 1.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

// Pools every word occurrence of every bag into one sequence (bags in order,
// words in lexicographic order within a bag), applies a Fisher-Yates shuffle
// seeded with `seed`, and deals consecutive runs of T words into new bags
// carrying the original targets. All bags must have the same total T.
std::vector<BagOfWords> shuffle_null_model(std::span<const BagOfWords> bags, std::uint64_t seed);

}  // namespace ctxsim
