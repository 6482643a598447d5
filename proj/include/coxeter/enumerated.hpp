#pragma once

// Indexed enumeration of a ball of W with generator tables and Bruhat
// down-sets as bitsets, for the exhaustive corpus checks.

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "coxeter/bruhat.hpp"
#include "coxeter/element.hpp"

namespace coxeter {

using Bitset = boost::dynamic_bitset<std::uint64_t>;

/// All elements of length <= radius, indexed by (length, ShortLex word).
/// Down-sets use [e,w] = [e,sw] u s[e,sw] for a left descent s of w. The
/// ball is downward closed, so down-sets are exact even when truncated.
class EnumeratedGroup {
 public:
  /// radius < 0 means the whole (finite) group.
  explicit EnumeratedGroup(SystemPtr sys, int radius = -1, std::size_t cap = 1'000'000) : system_(std::move(sys)) {
    if (radius < 0) {
      if (!system_->is_finite())
        throw Error(ErrorCode::InfiniteGroup, system_->name() + " needs an explicit max length");
      radius = *system_->longest_length();
    }
    const auto levels = ball(system_, radius, cap);
    radius_ = static_cast<int>(levels.size()) - 1;
    complete_ = system_->is_finite() && radius_ == *system_->longest_length();
    for (const auto& level : levels) {
      level_start_.push_back(static_cast<int>(elements_.size()));
      for (const auto& u : level) {
        index_.emplace(u.matrix(), static_cast<int>(elements_.size()));
        elements_.push_back(u);
      }
    }
    level_start_.push_back(static_cast<int>(elements_.size()));

    const int n = size(), r = system_->rank();
    right_.assign(static_cast<std::size_t>(n) * r, -1);
    left_.assign(static_cast<std::size_t>(n) * r, -1);
    for (int u = 0; u < n; ++u) {
      for (Generator s = 1; s <= r; ++s) {
        if (is_descent(elements_[u], s, Side::Right) || elements_[u].length() < radius_)
          right_[u * r + s - 1] = find(apply_generator(elements_[u], s, Side::Right)).value_or(-1);
        if (is_descent(elements_[u], s, Side::Left) || elements_[u].length() < radius_)
          left_[u * r + s - 1] = find(apply_generator(elements_[u], s, Side::Left)).value_or(-1);
      }
    }

    down_.assign(n, Bitset(n));
    down_[0].set(0);
    for (int w = 1; w < n; ++w) {
      const Generator s = left_descents(w).first();
      const int v = left(w, s);
      down_[w] = down_[v];
      for (auto u = down_[v].find_first(); u != Bitset::npos; u = down_[v].find_next(u))
        down_[w].set(left(static_cast<int>(u), s));
    }
  }

  const SystemPtr& system() const { return system_; }
  int size() const { return static_cast<int>(elements_.size()); }
  int radius() const { return radius_; }
  /// True when the ball is the whole finite group.
  bool complete() const { return complete_; }
  const GroupElement& element(int i) const { return elements_[i]; }
  int length(int i) const { return elements_[i].length(); }
  Word word(int i) const { return reduced_word(elements_[i]); }

  std::optional<int> find(const GroupElement& u) const {
    if (auto it = index_.find(u.matrix()); it != index_.end()) return it->second;
    return std::nullopt;
  }
  int index_of(const GroupElement& u) const {
    if (!u.system() || !u.system()->same_as(*system_))
      throw Error(ErrorCode::SystemMismatch, "element does not belong to " + system_->name());
    if (auto i = find(u)) return *i;
    throw Error(ErrorCode::BadRange, "element of length " + std::to_string(u.length()) + " lies outside the enumerated ball");
  }

  int level_begin(int len) const { return level_start_[len]; }
  int level_end(int len) const { return level_start_[len + 1]; }
  int level_size(int len) const { return level_end(len) - level_begin(len); }

  /// Index of us / su, or -1 when it lies outside the ball.
  int right(int u, Generator s) const { return right_[u * system_->rank() + s - 1]; }
  int left(int u, Generator s) const { return left_[u * system_->rank() + s - 1]; }

  bool is_right_descent(int u, Generator s) const {
    const int v = right(u, s);
    return v >= 0 && length(v) < length(u);
  }
  bool is_left_descent(int u, Generator s) const {
    const int v = left(u, s);
    return v >= 0 && length(v) < length(u);
  }
  GeneratorSet left_descents(int u) const {
    GeneratorSet d;
    for (Generator s = 1; s <= system_->rank(); ++s)
      if (is_left_descent(u, s)) d.insert(s);
    return d;
  }
  GeneratorSet right_descents(int u) const {
    GeneratorSet d;
    for (Generator s = 1; s <= system_->rank(); ++s)
      if (is_right_descent(u, s)) d.insert(s);
    return d;
  }

  const Bitset& down(int w) const { return down_[w]; }
  bool leq(int u, int w) const { return down_[w].test(u); }

  bool is_minimal_rep(int u, GeneratorSet J) const {
    for (Generator s : J.to_list())
      if (is_right_descent(u, s)) return false;
    return true;
  }

  /// Members of W^J as a bitset.
  Bitset minimal_reps(GeneratorSet J) const {
    Bitset out(size());
    for (int u = 0; u < size(); ++u)
      if (is_minimal_rep(u, J)) out.set(u);
    return out;
  }

  /// Level counts of down(w) & mask.
  std::vector<std::int64_t> level_counts(const Bitset& set, int top_length) const {
    std::vector<std::int64_t> f(top_length + 1, 0);
    for (auto u = set.find_first(); u != Bitset::npos; u = set.find_next(u)) ++f[length(static_cast<int>(u))];
    return f;
  }

  FVector f_vector(int w, GeneratorSet J) const {
    if (!is_minimal_rep(w, J)) throw Error(ErrorCode::NotMinimalRep, format_word(word(w)) + " is not in W^J");
    return {level_counts(down_[w] & minimal_reps(J), length(w)), FVectorKind::LowerQuotient};
  }

  FVector f_vector(int w, const Bitset& minimal_reps_mask) const {
    return {level_counts(down_[w] & minimal_reps_mask, length(w)), FVectorKind::LowerQuotient};
  }

  /// Entry i counts {y : x <= y <= w, l(y) = l(x) + i}.
  FVector relative_f_vector(int x, int w) const {
    if (!leq(x, w)) throw Error(ErrorCode::NotComparable, format_word(word(x)) + " is not below " + format_word(word(w)));
    FVector f;
    f.kind = FVectorKind::RelativeInterval;
    f.counts.assign(length(w) - length(x) + 1, 0);
    for (auto y = down_[w].find_first(); y != Bitset::npos; y = down_[w].find_next(y))
      if (down_[y].test(x)) ++f.counts[length(static_cast<int>(y)) - length(x)];
    return f;
  }

  /// Indices of elements covered by w, restricted to the mask.
  std::vector<int> lower_covers(int w, const Bitset* mask = nullptr) const {
    std::vector<int> out;
    if (length(w) == 0) return out;
    const int len = length(w) - 1;
    for (int u = level_begin(len); u < level_end(len); ++u)
      if (down_[w].test(u) && (!mask || mask->test(u))) out.push_back(u);
    return out;
  }

  /// Layers first..last of [e,w]^J with length-difference-1 comparabilities.
  LayeredDag layered_dag(int w, GeneratorSet J, int first, int last) const {
    if (!is_minimal_rep(w, J)) throw Error(ErrorCode::NotMinimalRep, format_word(word(w)) + " is not in W^J");
    if (first < 0 || first > last || last > length(w))
      throw Error(ErrorCode::BadRange, "layers " + std::to_string(first) + ".." + std::to_string(last) +
                                           " outside 0.." + std::to_string(length(w)));
    const Bitset members = down_[w] & minimal_reps(J);
    std::vector<std::vector<int>> ids;
    LayeredDag dag;
    dag.first_rank = first;
    for (int r = first; r <= last; ++r) {
      std::vector<int> layer;
      std::vector<GroupElement> elems;
      for (int u = level_begin(r); u < level_end(r); ++u) {
        if (members.test(u)) {
          layer.push_back(u);
          elems.push_back(elements_[u]);
        }
      }
      ids.push_back(std::move(layer));
      dag.layers.push_back(std::move(elems));
    }
    for (std::size_t t = 0; t + 1 < ids.size(); ++t) {
      std::vector<std::vector<int>> adj(ids[t].size());
      for (std::size_t a = 0; a < ids[t].size(); ++a)
        for (std::size_t b = 0; b < ids[t + 1].size(); ++b)
          if (down_[ids[t + 1][b]].test(ids[t][a])) adj[a].push_back(static_cast<int>(b));
      dag.up_edges.push_back(std::move(adj));
    }
    return dag;
  }

 private:
  SystemPtr system_;
  int radius_ = 0;
  bool complete_ = false;
  std::vector<GroupElement> elements_;
  std::unordered_map<IntMatrix, int, MatrixHash> index_;
  std::vector<int> level_start_;
  std::vector<int> right_, left_;
  std::vector<Bitset> down_;
};

}  // namespace coxeter
