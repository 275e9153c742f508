#include "ctxsim/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ctxsim/error.hpp"
#include "parallel.hpp"

namespace ctxsim {

Vocabulary::Vocabulary(std::span<const BagOfWords> bags) {
  std::set<std::string_view> distinct;
  for (const auto& bag : bags)
    for (const auto& [word, n] : bag.counts) distinct.insert(word);
  words_.assign(distinct.begin(), distinct.end());
}

std::uint32_t Vocabulary::index(std::string_view word) const {
  auto it = std::lower_bound(words_.begin(), words_.end(), word);
  if (it == words_.end() || *it != word)
    throw DataError("word not in vocabulary: '" + std::string(word) + "'");
  return static_cast<std::uint32_t>(it - words_.begin());
}

bool Vocabulary::contains(std::string_view word) const {
  return std::binary_search(words_.begin(), words_.end(), word);
}

SparseVector vectorize(const BagOfWords& bag, const Vocabulary& vocab) {
  SparseVector v;
  v.dimension = vocab.size();
  v.entries.reserve(bag.counts.size());
  for (const auto& [word, n] : bag.counts) v.entries.emplace_back(vocab.index(word), n);
  // Bag keys and vocabulary share the same ordering, so entries are already sorted.
  return v;
}

std::int64_t dot(const SparseVector& a, const SparseVector& b) {
  require(a.dimension == b.dimension, "dot: dimension mismatch (" + std::to_string(a.dimension) +
                                          " vs " + std::to_string(b.dimension) + ")");
  std::int64_t sum = 0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      sum += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

std::int64_t raw_similarity(const BagOfWords& a, const BagOfWords& b) {
  const auto& small = a.counts.size() <= b.counts.size() ? a : b;
  const auto& large = &small == &a ? b : a;
  std::int64_t sum = 0;
  for (const auto& [word, n] : small.counts) sum += n * large.count(word);
  return sum;
}

double normalized_similarity(std::int64_t s_ij, std::int64_t s_ii, std::int64_t s_jj) {
  require(s_ii > 0 && s_jj > 0, "normalized similarity needs positive self-similarities");
  require(s_ij >= 0, "raw similarity must be nonnegative");
  return static_cast<double>(s_ij) /
         std::sqrt(static_cast<double>(s_ii) * static_cast<double>(s_jj));
}

SimilarityMatrix::SimilarityMatrix(std::vector<std::string> labels, SimilarityKind kind)
    : labels_(std::move(labels)), values_(labels_.size(), labels_.size()), kind_(kind) {}

SimilarityMatrix::SimilarityMatrix(std::vector<std::string> labels, DenseMatrix values,
                                   SimilarityKind kind)
    : labels_(std::move(labels)), values_(std::move(values)), kind_(kind) {
  require(values_.rows() == values_.cols(), "similarity matrix must be square");
  require(values_.rows() == labels_.size(), "similarity matrix size does not match its labels");
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      require(std::abs(values_(i, j) - values_(j, i)) <= 1e-12,
              "similarity matrix is not symmetric at (" + labels_[i] + ", " + labels_[j] + ")");
}

namespace {

std::vector<std::string> labels_of(std::span<const BagOfWords> bags) {
  std::vector<std::string> labels;
  labels.reserve(bags.size());
  for (const auto& b : bags) labels.push_back(b.target);
  return labels;
}

// Upper-triangle dot products, rows distributed across threads. Each row
// writes its own cells, so the result does not depend on scheduling.
DenseMatrix raw_products(std::span<const BagOfWords> bags, unsigned threads) {
  const Vocabulary vocab(bags);
  std::vector<SparseVector> vectors;
  vectors.reserve(bags.size());
  for (const auto& b : bags) vectors.push_back(vectorize(b, vocab));
  const std::size_t n = bags.size();
  DenseMatrix out(n, n);
  detail::parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) out(i, j) = static_cast<double>(dot(vectors[i], vectors[j]));
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) out(i, j) = out(j, i);
  return out;
}

}  // namespace

SimilarityMatrix build_raw_similarity_matrix(std::span<const BagOfWords> bags, unsigned threads) {
  return SimilarityMatrix(labels_of(bags), raw_products(bags, threads), SimilarityKind::raw);
}

SimilarityMatrix build_similarity_matrix(std::span<const BagOfWords> bags, unsigned threads) {
  require(bags.size() >= 2, "similarity needs at least two bags");
  for (const auto& b : bags) require(b.total > 0, "empty bag for target '" + b.target + "'");
  const auto raw = raw_products(bags, threads);
  const std::size_t n = bags.size();
  SimilarityMatrix m(labels_of(bags), SimilarityKind::normalized);
  for (std::size_t i = 0; i < n; ++i) {
    m.set(i, i, 1.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      m.set(i, j,
            normalized_similarity(static_cast<std::int64_t>(raw(i, j)),
                                  static_cast<std::int64_t>(raw(i, i)),
                                  static_cast<std::int64_t>(raw(j, j))));
    }
  }
  return m;
}

}  // namespace ctxsim
