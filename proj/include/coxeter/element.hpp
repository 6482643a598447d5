#pragma once

// Group elements as integer matrices acting on the root lattice.

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "coxeter/error.hpp"
#include "coxeter/system.hpp"

namespace coxeter {

enum class Side { Left, Right };

using Word = std::vector<Generator>;

/// An element of W stored as its matrix on simple-root coordinates (column j
/// is the image of alpha_j). The inverse matrix rides along so that left
/// descents cost the same as right descents.
class GroupElement {
 public:
  GroupElement() = default;

  const SystemPtr& system() const { return system_; }
  int length() const { return length_; }
  const IntMatrix& matrix() const { return matrix_; }
  const IntMatrix& inverse_matrix() const { return inverse_; }
  bool is_identity() const { return length_ == 0; }

  friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.matrix_ == b.matrix_; }

 private:
  friend GroupElement identity(const SystemPtr&);
  friend GroupElement apply_generator(const GroupElement&, Generator, Side);
  friend GroupElement inverse(const GroupElement&);

  SystemPtr system_;
  IntMatrix matrix_;
  IntMatrix inverse_;
  int length_ = 0;
};

struct MatrixHash {
  std::size_t operator()(const IntMatrix& m) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto v : m) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

struct ElementHash {
  std::size_t operator()(const GroupElement& u) const noexcept { return MatrixHash{}(u.matrix()); }
};

namespace detail {

inline void require_same_system(const GroupElement& a, const GroupElement& b) {
  if (!a.system() || !b.system() || !a.system()->same_as(*b.system()))
    throw Error(ErrorCode::SystemMismatch, "elements belong to different Coxeter systems");
}

inline void require_generator(const CoxeterSystem& sys, Generator s) {
  if (s < 1 || s > sys.rank())
    throw Error(ErrorCode::BadWord, "generator " + std::to_string(s) + " outside 1.." + std::to_string(sys.rank()));
}

// M <- M * s (column operation): col_j -= A_sj col_s for all j, in an order
// that reads the original col_s.
inline void multiply_right(IntMatrix& m, const CoxeterSystem& sys, Generator s) {
  const int n = sys.rank();
  const int c = s - 1;
  for (int j = 0; j < n; ++j) {
    if (j == c) continue;
    const auto a = sys.cartan_entry(s, j + 1);
    if (a == 0) continue;
    for (int r = 0; r < n; ++r) m[r * n + j] = checked_add(m[r * n + j], -checked_mul(a, m[r * n + c]));
  }
  for (int r = 0; r < n; ++r) m[r * n + c] = -m[r * n + c];
}

// M <- s * M (row operation): row_s = -row_s - sum_{j != s} A_sj row_j.
inline void multiply_left(IntMatrix& m, const CoxeterSystem& sys, Generator s) {
  const int n = sys.rank();
  const int r0 = s - 1;
  for (int col = 0; col < n; ++col) {
    std::int64_t v = -m[r0 * n + col];
    for (int j = 0; j < n; ++j) {
      if (j == r0) continue;
      const auto a = sys.cartan_entry(s, j + 1);
      if (a != 0) v = checked_add(v, -checked_mul(a, m[j * n + col]));
    }
    m[r0 * n + col] = v;
  }
}

// Column `s` of m is a negative root iff all its entries are <= 0.
inline bool column_negative(const IntMatrix& m, int n, Generator s) {
  for (int r = 0; r < n; ++r)
    if (m[r * n + (s - 1)] > 0) return false;
  return true;
}

}  // namespace detail

inline GroupElement identity(const SystemPtr& sys) {
  GroupElement e;
  e.system_ = sys;
  const int n = sys->rank();
  e.matrix_.assign(n * n, 0);
  for (int i = 0; i < n; ++i) e.matrix_[i * n + i] = 1;
  e.inverse_ = e.matrix_;
  return e;
}

/// s is a descent on `side` iff the corresponding image of alpha_s is negative.
inline bool is_descent(const GroupElement& u, Generator s, Side side) {
  detail::require_generator(*u.system(), s);
  const int n = u.system()->rank();
  return detail::column_negative(side == Side::Right ? u.matrix() : u.inverse_matrix(), n, s);
}

/// Returns us (Right) or su (Left); the new length comes from the descent test.
inline GroupElement apply_generator(const GroupElement& u, Generator s, Side side) {
  const auto& sys = *u.system();
  detail::require_generator(sys, s);
  GroupElement out = u;
  const bool shortens = is_descent(u, s, side);
  if (side == Side::Right) {
    detail::multiply_right(out.matrix_, sys, s);
    detail::multiply_left(out.inverse_, sys, s);
  } else {
    detail::multiply_left(out.matrix_, sys, s);
    detail::multiply_right(out.inverse_, sys, s);
  }
  out.length_ = u.length_ + (shortens ? -1 : 1);
  return out;
}

inline GroupElement generator_element(const SystemPtr& sys, Generator s) {
  return apply_generator(identity(sys), s, Side::Right);
}

inline GroupElement inverse(const GroupElement& u) {
  GroupElement out = u;
  std::swap(out.matrix_, out.inverse_);
  return out;
}

inline GeneratorSet descents(const GroupElement& u, Side side) {
  GeneratorSet out;
  for (Generator s = 1; s <= u.system()->rank(); ++s)
    if (is_descent(u, s, side)) out.insert(s);
  return out;
}

/// Product of the generators in `word`, left to right.
inline GroupElement from_word(const SystemPtr& sys, const Word& word) {
  GroupElement u = identity(sys);
  for (Generator s : word) u = apply_generator(u, s, Side::Right);
  return u;
}

inline GroupElement multiply(const GroupElement& a, const GroupElement& b);

/// ShortLex-minimal reduced word: strip the smallest left descent until e.
inline Word reduced_word(const GroupElement& u) {
  Word word;
  word.reserve(u.length());
  GroupElement cur = u;
  while (!cur.is_identity()) {
    const Generator s = descents(cur, Side::Left).first();
    word.push_back(s);
    cur = apply_generator(cur, s, Side::Left);
  }
  return word;
}

inline GroupElement multiply(const GroupElement& a, const GroupElement& b) {
  detail::require_same_system(a, b);
  GroupElement out = a;
  for (Generator s : reduced_word(b)) out = apply_generator(out, s, Side::Right);
  return out;
}

/// Comma-separated 1-based indices; the empty string is the identity word.
inline std::string format_word(const Word& word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(word[i]);
  }
  return out;
}

inline Word parse_word(const std::string& text, int rank) {
  Word word;
  std::string token;
  auto flush = [&](bool final_token) {
    std::string t;
    for (char c : token)
      if (c != ' ' && c != '\t') t += c;
    token.clear();
    if (t.empty()) {
      if (final_token && word.empty()) return;
      throw Error(ErrorCode::BadWord, "empty generator in word '" + text + "'");
    }
    for (char c : t)
      if (c < '0' || c > '9') throw Error(ErrorCode::BadWord, "non-numeric generator '" + t + "'");
    const int s = std::stoi(t);
    if (s < 1 || s > rank) throw Error(ErrorCode::BadWord, "generator " + t + " outside 1.." + std::to_string(rank));
    word.push_back(s);
  };
  for (char c : text) {
    if (c == ',') {
      flush(false);
    } else {
      token += c;
    }
  }
  flush(true);
  return word;
}

inline std::string to_word_string(const GroupElement& u) { return format_word(reduced_word(u)); }

/// Elements of length <= max_length grouped by length; each level is sorted
/// by ShortLex reduced word. Throws ResourceLimit past `cap` elements.
inline std::vector<std::vector<GroupElement>> ball(const SystemPtr& sys, int max_length,
                                                   std::size_t cap = 1'000'000) {
  if (max_length < 0) throw Error(ErrorCode::BadRange, "negative ball radius");
  std::vector<std::vector<GroupElement>> levels;
  levels.push_back({identity(sys)});
  std::size_t total = 1;
  for (int len = 1; len <= max_length; ++len) {
    std::unordered_map<IntMatrix, GroupElement, MatrixHash> seen;
    for (const auto& u : levels.back()) {
      for (Generator s = 1; s <= sys->rank(); ++s) {
        if (is_descent(u, s, Side::Right)) continue;
        auto v = apply_generator(u, s, Side::Right);
        seen.try_emplace(v.matrix(), std::move(v));
      }
    }
    if (seen.empty()) break;
    total += seen.size();
    if (total > cap)
      throw Error(ErrorCode::ResourceLimit, "ball exceeds " + std::to_string(cap) + " elements");
    std::vector<std::pair<Word, GroupElement>> keyed;
    keyed.reserve(seen.size());
    for (auto& [key, v] : seen) keyed.emplace_back(reduced_word(v), std::move(v));
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<GroupElement> level;
    level.reserve(keyed.size());
    for (auto& kv : keyed) level.push_back(std::move(kv.second));
    levels.push_back(std::move(level));
  }
  return levels;
}

/// w_0, built by right-multiplying ascents until none remain.
inline GroupElement longest_element(const SystemPtr& sys) {
  if (!sys->is_finite()) throw Error(ErrorCode::InfiniteGroup, sys->name() + " has no longest element");
  GroupElement u = identity(sys);
  for (;;) {
    const auto d = descents(u, Side::Right);
    if (d == GeneratorSet::all(sys->rank())) return u;
    for (Generator s = 1; s <= sys->rank(); ++s) {
      if (!d.contains(s)) {
        u = apply_generator(u, s, Side::Right);
        break;
      }
    }
  }
}

}  // namespace coxeter
