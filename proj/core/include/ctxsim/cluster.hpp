#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ctxsim/matrix.hpp"
#include "ctxsim/similarity.hpp"

namespace ctxsim {

// sqrt2:     d = sqrt(2 (1 - S)), the Euclidean distance between unit-normalized
//            count vectors.
// one_minus: d = 1 - S.
enum class DistanceKind { sqrt2, one_minus };

std::string_view to_string(DistanceKind kind);
// Accepts "sqrt2" and "one-minus"; throws DataError otherwise.
DistanceKind parse_distance_kind(std::string_view name);

struct DistanceMatrix {
  std::vector<std::string> labels;
  DenseMatrix values;

  std::size_t size() const { return labels.size(); }
  // Symmetric, nonnegative, zero diagonal; throws DataError otherwise.
  void validate() const;
};

// Throws DataError if a similarity lies outside [0, 1] by more than 1e-12.
DistanceMatrix similarity_to_distance(const SimilarityMatrix& s,
                                      DistanceKind kind = DistanceKind::sqrt2);

// Leaves are clusters 0..n-1; the cluster created at step t (1-based) has id
// n - 1 + t. `left` < `right`. `cost` is the increase in the total
// within-cluster sum of squares, n_l n_r / (n_l + n_r) * |c_l - c_r|^2, which
// is d^2 / 2 for two singletons.
struct MergeStep {
  std::size_t step = 0;
  std::size_t left = 0;
  std::size_t right = 0;
  double cost = 0.0;
  std::size_t size = 0;
};

struct Dendrogram {
  std::vector<std::string> leaves;
  std::vector<MergeStep> merges;  // n - 1 steps in order

  std::size_t leaf_count() const { return leaves.size(); }
  // Leaf indices under a cluster id, ascending.
  std::vector<std::size_t> members(std::size_t cluster_id) const;
};

// Ward's minimum-variance agglomeration using the Lance-Williams update on
// squared distances. Ties go to the lexicographically smallest
// (smaller id, larger id) pair. Requires n >= 2.
Dendrogram ward_linkage(const DistanceMatrix& d);

struct Partition {
  std::size_t k = 0;
  std::vector<std::size_t> assignment;           // leaf index -> cluster
  std::vector<std::vector<std::string>> members;  // sorted labels per cluster
};

// Undoes the last k - 1 merges. Clusters are numbered by their smallest
// member label. Throws DataError unless 1 <= k <= n.
Partition cut(const Dendrogram& dendrogram, std::size_t k);

struct TraceEntry {
  MergeStep merge;
  std::vector<std::string> left_members;
  std::vector<std::string> right_members;
};

// First t merges with the labels on each side. Throws DataError if t > n - 1.
std::vector<TraceEntry> merge_trace(const Dendrogram& dendrogram, std::size_t t);

// Newick tree; internal node heights equal merge costs, so each branch length
// is the parent's cost minus the child's (leaves sit at height 0).
std::string to_newick(const Dendrogram& dendrogram);

// One JSON object per merge: {"cost","left","left_members","right",...}.
void write_merges_jsonl(std::ostream& out, const Dendrogram& dendrogram);

}  // namespace ctxsim
