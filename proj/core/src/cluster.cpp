#include "ctxsim/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <tuple>

#include <json.hpp>

#include "ctxsim/error.hpp"

namespace ctxsim {

std::string_view to_string(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::sqrt2:
      return "sqrt2";
    case DistanceKind::one_minus:
      return "one-minus";
  }
  return "sqrt2";
}

DistanceKind parse_distance_kind(std::string_view name) {
  if (name == "sqrt2") return DistanceKind::sqrt2;
  if (name == "one-minus") return DistanceKind::one_minus;
  throw DataError("unknown distance kind '" + std::string(name) + "' (expected sqrt2 or one-minus)");
}

void DistanceMatrix::validate() const {
  const std::size_t n = size();
  require(values.rows() == n && values.cols() == n, "distance matrix size does not match labels");
  for (std::size_t i = 0; i < n; ++i) {
    require(values(i, i) == 0.0, "distance matrix has a nonzero diagonal at " + labels[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      require(values(i, j) == values(j, i), "distance matrix is not symmetric");
      require(values(i, j) >= 0.0 && std::isfinite(values(i, j)),
              "distance matrix has a negative or non-finite entry");
    }
  }
}

DistanceMatrix similarity_to_distance(const SimilarityMatrix& s, DistanceKind kind) {
  const std::size_t n = s.size();
  DistanceMatrix d{s.labels(), DenseMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = s(i, j);
      require(v >= -1e-12 && v <= 1.0 + 1e-12,
              "similarity outside [0, 1] at (" + s.labels()[i] + ", " + s.labels()[j] + ")");
      const double c = std::clamp(v, 0.0, 1.0);
      const double dist = kind == DistanceKind::sqrt2 ? std::sqrt(2.0 * (1.0 - c)) : 1.0 - c;
      d.values(i, j) = dist;
      d.values(j, i) = dist;
    }
  }
  return d;
}

std::vector<std::size_t> Dendrogram::members(std::size_t cluster_id) const {
  const std::size_t n = leaf_count();
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{cluster_id};
  while (!stack.empty()) {
    const auto id = stack.back();
    stack.pop_back();
    if (id < n) {
      out.push_back(id);
    } else {
      require(id - n < merges.size(), "unknown cluster id " + std::to_string(id));
      const auto& m = merges[id - n];
      stack.push_back(m.left);
      stack.push_back(m.right);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Nearest-neighbour bookkeeping over slots; W holds Ward's squared
// dissimilarity, equal to d^2 for singletons.
class WardState {
 public:
  explicit WardState(const DistanceMatrix& d)
      : n_(d.size()),
        w_(n_, n_),
        id_(n_),
        size_(n_, 1),
        active_(n_, true),
        nn_(n_, 0) {
    for (std::size_t i = 0; i < n_; ++i) {
      id_[i] = i;
      for (std::size_t j = 0; j < n_; ++j) w_(i, j) = d.values(i, j) * d.values(i, j);
    }
    for (std::size_t i = 0; i < n_; ++i) refresh(i);
  }

  Dendrogram run(std::vector<std::string> labels) {
    Dendrogram dend;
    dend.leaves = std::move(labels);
    dend.merges.reserve(n_ - 1);
    for (std::size_t step = 1; step < n_; ++step) {
      std::size_t best = n_;
      for (std::size_t s = 0; s < n_; ++s)
        if (active_[s] && (best == n_ || less(s, nn_[s], best, nn_[best]))) best = s;
      const std::size_t a = std::min(best, nn_[best]);
      const std::size_t b = std::max(best, nn_[best]);

      MergeStep m;
      m.step = step;
      m.left = std::min(id_[a], id_[b]);
      m.right = std::max(id_[a], id_[b]);
      m.cost = 0.5 * w_(a, b);
      m.size = size_[a] + size_[b];
      dend.merges.push_back(m);

      const double na = static_cast<double>(size_[a]);
      const double nb = static_cast<double>(size_[b]);
      const double wab = w_(a, b);
      for (std::size_t k = 0; k < n_; ++k) {
        if (!active_[k] || k == a || k == b) continue;
        const double nk = static_cast<double>(size_[k]);
        const double updated =
            ((na + nk) * w_(k, a) + (nb + nk) * w_(k, b) - nk * wab) / (na + nb + nk);
        w_(k, a) = updated;
        w_(a, k) = updated;
      }
      id_[a] = n_ - 1 + step;
      size_[a] = m.size;
      active_[b] = false;

      for (std::size_t k = 0; k < n_; ++k) {
        if (!active_[k] || k == a) continue;
        if (nn_[k] == a || nn_[k] == b)
          refresh(k);
        else if (less(k, a, k, nn_[k]))
          nn_[k] = a;
      }
      refresh(a);
    }
    return dend;
  }

 private:
  auto key(std::size_t s, std::size_t t) const {
    return std::make_tuple(w_(s, t), std::min(id_[s], id_[t]), std::max(id_[s], id_[t]));
  }
  bool less(std::size_t s1, std::size_t t1, std::size_t s2, std::size_t t2) const {
    return key(s1, t1) < key(s2, t2);
  }
  void refresh(std::size_t s) {
    std::size_t best = n_;
    for (std::size_t t = 0; t < n_; ++t) {
      if (t == s || !active_[t]) continue;
      if (best == n_ || less(s, t, s, best)) best = t;
    }
    nn_[s] = best == n_ ? s : best;
  }

  std::size_t n_;
  DenseMatrix w_;
  std::vector<std::size_t> id_;
  std::vector<std::size_t> size_;
  std::vector<bool> active_;
  std::vector<std::size_t> nn_;
};

std::string format_height(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string newick_label(const std::string& label) {
  if (label.find_first_of("()[]':;, \t\n") == std::string::npos && !label.empty()) return label;
  std::string out = "'";
  for (char c : label) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

}  // namespace

Dendrogram ward_linkage(const DistanceMatrix& d) {
  d.validate();
  require(d.size() >= 2, "Ward linkage needs at least two objects");
  return WardState(d).run(d.labels);
}

Partition cut(const Dendrogram& dendrogram, std::size_t k) {
  const std::size_t n = dendrogram.leaf_count();
  require(k >= 1 && k <= n,
          "cut: k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  // Union-find over leaves, applying the first n - k merges.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::size_t> representative(2 * n - 1);
  std::iota(representative.begin(), representative.begin() + static_cast<std::ptrdiff_t>(n),
            std::size_t{0});
  for (std::size_t s = 0; s < n - k; ++s) {
    const auto& m = dendrogram.merges[s];
    const auto ra = find(representative[m.left]);
    const auto rb = find(representative[m.right]);
    parent[rb] = ra;
    representative[n + s] = ra;
  }

  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> group_of_root(n, n);
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    const auto r = find(leaf);
    if (group_of_root[r] == n) {
      group_of_root[r] = groups.size();
      groups.emplace_back();
    }
    groups[group_of_root[r]].push_back(leaf);
  }

  Partition p;
  p.k = k;
  p.members.resize(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (auto leaf : groups[g]) p.members[g].push_back(dendrogram.leaves[leaf]);
    std::sort(p.members[g].begin(), p.members[g].end());
  }
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return p.members[x].front() < p.members[y].front();
  });
  std::vector<std::vector<std::string>> sorted_members;
  p.assignment.assign(n, 0);
  for (std::size_t c = 0; c < order.size(); ++c) {
    for (auto leaf : groups[order[c]]) p.assignment[leaf] = c;
    sorted_members.push_back(std::move(p.members[order[c]]));
  }
  p.members = std::move(sorted_members);
  return p;
}

std::vector<TraceEntry> merge_trace(const Dendrogram& dendrogram, std::size_t t) {
  require(t <= dendrogram.merges.size(), "merge_trace: only " +
                                             std::to_string(dendrogram.merges.size()) +
                                             " merges exist");
  auto labels_of = [&](std::size_t id) {
    std::vector<std::string> out;
    for (auto leaf : dendrogram.members(id)) out.push_back(dendrogram.leaves[leaf]);
    std::sort(out.begin(), out.end());
    return out;
  };
  std::vector<TraceEntry> trace;
  for (std::size_t s = 0; s < t; ++s) {
    const auto& m = dendrogram.merges[s];
    trace.push_back({m, labels_of(m.left), labels_of(m.right)});
  }
  return trace;
}

std::string to_newick(const Dendrogram& dendrogram) {
  const std::size_t n = dendrogram.leaf_count();
  require(n >= 1, "to_newick: empty dendrogram");
  if (n == 1) return newick_label(dendrogram.leaves.front()) + ";";
  auto height = [&](std::size_t id) { return id < n ? 0.0 : dendrogram.merges[id - n].cost; };

  // Post-order over an explicit stack; chain-shaped trees can be deep.
  std::vector<std::string> built(2 * n - 1);
  struct Frame {
    std::size_t id;
    bool expanded;
  };
  const std::size_t root = n - 1 + dendrogram.merges.size();
  std::vector<Frame> stack{{root, false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    if (id < n) {
      built[id] = newick_label(dendrogram.leaves[id]);
      continue;
    }
    const auto& m = dendrogram.merges[id - n];
    if (!expanded) {
      stack.push_back({id, true});
      stack.push_back({m.right, false});
      stack.push_back({m.left, false});
      continue;
    }
    built[id] = "(" + built[m.left] + ":" + format_height(m.cost - height(m.left)) + "," +
                built[m.right] + ":" + format_height(m.cost - height(m.right)) + ")";
    built[m.left].clear();
    built[m.right].clear();
  }
  return built[root] + ";";
}

void write_merges_jsonl(std::ostream& out, const Dendrogram& dendrogram) {
  for (const auto& entry : merge_trace(dendrogram, dendrogram.merges.size())) {
    nlohmann::json record;
    record["step"] = entry.merge.step;
    record["left"] = entry.merge.left;
    record["right"] = entry.merge.right;
    record["cost"] = entry.merge.cost;
    record["size"] = entry.merge.size;
    record["left_members"] = entry.left_members;
    record["right_members"] = entry.right_members;
    out << record.dump() << '\n';
  }
}

}  // namespace ctxsim
