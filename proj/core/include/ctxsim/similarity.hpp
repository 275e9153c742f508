#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctxsim/corpus.hpp"
#include "ctxsim/matrix.hpp"

namespace ctxsim {

// Distinct words of a set of bags, indexed 0..K-1 in lexicographic order.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::span<const BagOfWords> bags);

  std::size_t size() const { return words_.size(); }
  const std::string& word(std::size_t index) const { return words_.at(index); }
  // Throws DataError if the word is unknown.
  std::uint32_t index(std::string_view word) const;
  bool contains(std::string_view word) const;

 private:
  std::vector<std::string> words_;  // sorted, unique
};

// Count vector Y over a vocabulary, stored as (index, count) sorted by index.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, std::int64_t>> entries;
  std::size_t dimension = 0;
};

SparseVector vectorize(const BagOfWords& bag, const Vocabulary& vocab);

// Sum over shared indices of y_i^l * y_j^l. Throws DataError on a dimension
// mismatch.
std::int64_t dot(const SparseVector& a, const SparseVector& b);

// Multiset form: sum over distinct words w of count_a(w) * count_b(w),
// computed directly on the bags without a vocabulary.
std::int64_t raw_similarity(const BagOfWords& a, const BagOfWords& b);

// s_ij / sqrt(s_ii * s_jj). Throws DataError if a diagonal is not positive or
// s_ij is negative.
double normalized_similarity(std::int64_t s_ij, std::int64_t s_ii, std::int64_t s_jj);

enum class SimilarityKind { normalized, raw };

// Symmetric labelled n x n matrix; writes go to both (i, j) and (j, i).
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(std::vector<std::string> labels, SimilarityKind kind);
  // Takes a full matrix; throws DataError if it is not square, does not match
  // the labels, or is asymmetric by more than 1e-12.
  SimilarityMatrix(std::vector<std::string> labels, DenseMatrix values, SimilarityKind kind);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  SimilarityKind kind() const { return kind_; }
  const DenseMatrix& values() const { return values_; }

  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  void set(std::size_t i, std::size_t j, double v) {
    values_(i, j) = v;
    values_(j, i) = v;
  }

 private:
  std::vector<std::string> labels_;
  DenseMatrix values_;
  SimilarityKind kind_ = SimilarityKind::normalized;
};

// Raw (integer-valued) dot products between all bags.
SimilarityMatrix build_raw_similarity_matrix(std::span<const BagOfWords> bags,
                                             unsigned threads = 0);

// Normalized similarity; diagonal exactly 1. Requires n >= 2.
SimilarityMatrix build_similarity_matrix(std::span<const BagOfWords> bags, unsigned threads = 0);

}  // namespace ctxsim
