#pragma once

// Bruhat order, parabolic quotients W^J, f-vectors and layered comparability
// DAGs, computed from group elements directly.

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coxeter/element.hpp"
#include "coxeter/error.hpp"

namespace coxeter {

enum class FVectorKind { LowerQuotient, RelativeInterval };

/// Level counts f_0..f_r of an interval.
struct FVector {
  std::vector<std::int64_t> counts;
  FVectorKind kind = FVectorKind::LowerQuotient;

  std::int64_t operator[](std::size_t i) const { return counts[i]; }
  std::size_t size() const { return counts.size(); }
  friend bool operator==(const FVector& a, const FVector& b) { return a.counts == b.counts; }
};

/// Ranks first_rank .. first_rank + layers.size() - 1 of [e,w]^J. up_edges[t][a]
/// lists the vertices of layers[t + 1] lying above layers[t][a].
struct LayeredDag {
  int first_rank = 0;
  std::vector<std::vector<GroupElement>> layers;
  std::vector<std::vector<std::vector<int>>> up_edges;

  int last_rank() const { return first_rank + static_cast<int>(layers.size()) - 1; }
  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& layer : up_edges)
      for (const auto& adj : layer) n += adj.size();
    return n;
  }
};

/// u is the minimal representative of uW_J iff no s in J is a right descent.
inline bool is_minimal_rep(const GroupElement& u, GeneratorSet J) {
  for (Generator s : J.to_list())
    if (is_descent(u, s, Side::Right)) return false;
  return true;
}

struct PairHash {
  std::size_t operator()(const std::pair<IntMatrix, IntMatrix>& p) const noexcept {
    const MatrixHash h;
    return h(p.first) * 31 + h(p.second);
  }
};

/// Bruhat comparisons for one system, memoized on canonical key pairs. The
/// memo accepts concurrent idempotent insertion; the cached ball grows on demand.
class BruhatOrder {
 public:
  explicit BruhatOrder(SystemPtr sys, std::size_t ball_cap = 1'000'000)
      : system_(std::move(sys)), cap_(ball_cap) {}

  const SystemPtr& system() const { return system_; }

  /// u <= w via the left-descent recursion: with s the smallest left descent
  /// of w, u <= w iff su <= sw (when su < u) or u <= sw (otherwise).
  bool leq(const GroupElement& u, const GroupElement& w) {
    check(u);
    check(w);
    return leq_impl(u, w);
  }

  /// {u in W^J : u <= w} grouped by length 0..l(w).
  std::vector<std::vector<GroupElement>> lower_interval(const GroupElement& w, GeneratorSet J) {
    check(w);
    if (!is_minimal_rep(w, J)) throw Error(ErrorCode::NotMinimalRep, to_word_string(w) + " is not in W^J");
    const auto levels = ball_upto(w.length());
    std::vector<std::vector<GroupElement>> out(w.length() + 1);
    for (int len = 0; len <= w.length(); ++len)
      for (const auto& u : (*levels)[len])
        if (is_minimal_rep(u, J) && leq_impl(u, w)) out[len].push_back(u);
    return out;
  }

  FVector f_vector(const GroupElement& w, GeneratorSet J) {
    FVector f;
    for (const auto& level : lower_interval(w, J)) f.counts.push_back(static_cast<std::int64_t>(level.size()));
    return f;
  }

  /// Entry i counts {y : x <= y <= w, l(y) = l(x) + i}.
  FVector relative_f_vector(const GroupElement& x, const GroupElement& w) {
    check(x);
    check(w);
    if (!leq_impl(x, w)) throw Error(ErrorCode::NotComparable, to_word_string(x) + " is not below " + to_word_string(w));
    const auto levels = ball_upto(w.length());
    FVector f;
    f.kind = FVectorKind::RelativeInterval;
    for (int len = x.length(); len <= w.length(); ++len) {
      std::int64_t n = 0;
      for (const auto& y : (*levels)[len])
        if (leq_impl(x, y) && leq_impl(y, w)) ++n;
      f.counts.push_back(n);
    }
    return f;
  }

  std::vector<GroupElement> atoms(const GroupElement& w, GeneratorSet J) {
    auto interval = lower_interval(w, J);
    return interval.size() > 1 ? interval[1] : std::vector<GroupElement>{};
  }

  std::vector<GroupElement> coatoms(const GroupElement& w, GeneratorSet J) {
    auto interval = lower_interval(w, J);
    return interval.size() > 1 ? interval[interval.size() - 2] : std::vector<GroupElement>{};
  }

  LayeredDag layered_dag(const GroupElement& w, GeneratorSet J, int first, int last) {
    if (first < 0 || first > last || last > w.length())
      throw Error(ErrorCode::BadRange, "layers " + std::to_string(first) + ".." + std::to_string(last) +
                                           " outside 0.." + std::to_string(w.length()));
    auto interval = lower_interval(w, J);
    LayeredDag dag;
    dag.first_rank = first;
    for (int r = first; r <= last; ++r) dag.layers.push_back(interval[r]);
    for (std::size_t t = 0; t + 1 < dag.layers.size(); ++t) {
      std::vector<std::vector<int>> adj(dag.layers[t].size());
      for (std::size_t a = 0; a < dag.layers[t].size(); ++a)
        for (std::size_t b = 0; b < dag.layers[t + 1].size(); ++b)
          if (leq_impl(dag.layers[t][a], dag.layers[t + 1][b])) adj[a].push_back(static_cast<int>(b));
      dag.up_edges.push_back(std::move(adj));
    }
    return dag;
  }

  std::size_t memo_size() const {
    std::lock_guard lock(mutex_);
    return memo_.size();
  }

 private:
  void check(const GroupElement& u) const {
    if (!u.system() || !u.system()->same_as(*system_))
      throw Error(ErrorCode::SystemMismatch, "element does not belong to " + system_->name());
  }

  using Levels = std::vector<std::vector<GroupElement>>;

  // Snapshots are immutable; growing the ball swaps in a new one.
  std::shared_ptr<const Levels> ball_upto(int len) {
    std::lock_guard lock(ball_mutex_);
    if (!ball_ || (static_cast<int>(ball_->size()) <= len && !ball_saturated_)) {
      auto levels = ball(system_, len, cap_);
      ball_saturated_ = static_cast<int>(levels.size()) <= len;
      ball_ = std::make_shared<const Levels>(std::move(levels));
    }
    if (static_cast<int>(ball_->size()) <= len) {
      auto padded = *ball_;
      padded.resize(len + 1);
      ball_ = std::make_shared<const Levels>(std::move(padded));
    }
    return ball_;
  }

  bool leq_impl(const GroupElement& u, const GroupElement& w) {
    if (u.is_identity()) return true;
    if (u.length() > w.length()) return false;
    if (u.length() == w.length()) return u == w;
    auto key = std::make_pair(u.matrix(), w.matrix());
    {
      std::lock_guard lock(mutex_);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    const Generator s = descents(w, Side::Left).first();
    const auto sw = apply_generator(w, s, Side::Left);
    const bool result = is_descent(u, s, Side::Left) ? leq_impl(apply_generator(u, s, Side::Left), sw)
                                                     : leq_impl(u, sw);
    std::lock_guard lock(mutex_);
    memo_.emplace(std::move(key), result);
    return result;
  }

  SystemPtr system_;
  std::size_t cap_;
  mutable std::mutex mutex_;
  std::unordered_map<std::pair<IntMatrix, IntMatrix>, bool, PairHash> memo_;
  std::mutex ball_mutex_;
  std::shared_ptr<const Levels> ball_;
  bool ball_saturated_ = false;
};

}  // namespace coxeter
