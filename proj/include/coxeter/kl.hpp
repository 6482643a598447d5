#pragma once

// Kazhdan-Lusztig polynomials P_{x,w}, mu-coefficients, beta-vectors, the
// generating polynomial F_w(q) = sum_{x<=w} q^{l(x)} P_{x,w}(q), and the
// equality-case and monotonicity checkers built on them.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coxeter/enumerated.hpp"

namespace coxeter {

/// Dense integer polynomial c_0 + c_1 q + ...; the zero polynomial is empty.
using Polynomial = std::vector<std::int64_t>;

namespace poly {

inline void trim(Polynomial& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int degree(const Polynomial& p) { return static_cast<int>(p.size()) - 1; }

inline std::int64_t coefficient(const Polynomial& p, int i) {
  return i >= 0 && i < static_cast<int>(p.size()) ? p[i] : 0;
}

/// acc += factor * q^shift * p
inline void add_scaled(Polynomial& acc, const Polynomial& p, std::int64_t factor, int shift) {
  if (p.empty() || factor == 0) return;
  if (acc.size() < p.size() + shift) acc.resize(p.size() + shift, 0);
  for (std::size_t i = 0; i < p.size(); ++i)
    acc[i + shift] = detail::checked_add(acc[i + shift], detail::checked_mul(factor, p[i]));
}

/// Coefficientwise a >= b.
inline bool dominates(const Polynomial& a, const Polynomial& b) {
  const auto n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (coefficient(a, static_cast<int>(i)) < coefficient(b, static_cast<int>(i))) return false;
  return true;
}

/// "1+q+3q^2" style; "0" for the zero polynomial.
inline std::string to_string(const Polynomial& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    const auto c = p[i];
    if (!out.empty()) out += c < 0 ? "-" : "+";
    else if (c < 0) out += "-";
    const auto mag = c < 0 ? -c : c;
    if (i == 0 || mag != 1) out += std::to_string(mag);
    if (i >= 1) out += "q";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

}  // namespace poly

/// Memo of P_{x,w} for one system, keyed by element pairs of an enumerated
/// ball (equivalently by canonical matrix pairs). Only pairs with x <= w are
/// stored. Not synchronized: use one table per worker and merge().
class KLTable {
 public:
  explicit KLTable(std::shared_ptr<const EnumeratedGroup> group) : group_(std::move(group)) {}
  /// Whole group for finite systems; otherwise the ball of the given radius.
  explicit KLTable(const SystemPtr& sys, int radius = -1)
      : group_(std::make_shared<const EnumeratedGroup>(sys, radius)) {}

  const EnumeratedGroup& group() const { return *group_; }
  std::shared_ptr<const EnumeratedGroup> group_ptr() const { return group_; }
  const SystemPtr& system() const { return group_->system(); }
  std::size_t size() const { return memo_.size(); }

  /// P_{x,w} by the left-descent recursion with s the smallest left descent
  /// of w and v = sw:
  ///   P_{x,w} = q^{1-c} P_{sx,v} + q^c P_{x,v}
  ///             - sum_{x<=z<v, sz<z} mu(z,v) q^{(l(w)-l(z))/2} P_{x,z}
  /// where c = 1 if sx < x and 0 otherwise.
  const Polynomial& polynomial(int x, int w) {
    static const Polynomial zero{};
    static const Polynomial one{1};
    const auto& g = *group_;
    if (!g.leq(x, w)) return zero;
    if (g.length(w) - g.length(x) <= 2) return one;
    const auto key = pack(x, w);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const Generator s = g.left_descents(w).first();
    const int v = g.left(w, s);
    const int sx = g.left(x, s);
    const int c = g.length(sx) < g.length(x) ? 1 : 0;

    Polynomial result;
    poly::add_scaled(result, polynomial(sx, v), 1, 1 - c);
    poly::add_scaled(result, polynomial(x, v), 1, c);
    const Bitset& below_v = g.down(v);
    for (auto zz = below_v.find_first(); zz != Bitset::npos; zz = below_v.find_next(zz)) {
      const int z = static_cast<int>(zz);
      const int gap = g.length(v) - g.length(z);
      if (gap <= 0 || gap % 2 == 0) continue;
      if (!g.is_left_descent(z, s) || !g.leq(x, z)) continue;
      const auto m = mu(z, v);
      if (m == 0) continue;
      poly::add_scaled(result, polynomial(x, z), -m, (g.length(w) - g.length(z)) / 2);
    }
    poly::trim(result);
    return memo_.emplace(key, std::move(result)).first->second;
  }

  /// Coefficient of q^{(l(w)-l(x)-1)/2} in P_{x,w}; 0 when that is not an integer.
  std::int64_t mu(int x, int w) {
    const int gap = group_->length(w) - group_->length(x);
    if (gap <= 0 || gap % 2 == 0) return 0;
    return poly::coefficient(polynomial(x, w), (gap - 1) / 2);
  }

  /// Seeds the memo; used by cache loading.
  void insert(int x, int w, Polynomial p) { memo_[pack(x, w)] = std::move(p); }

  bool contains(int x, int w) const { return memo_.count(pack(x, w)) > 0; }

  /// Takes entries from another table over the same system.
  void merge(const KLTable& other) {
    if (!other.system()->same_as(*system()))
      throw Error(ErrorCode::TableMismatch, "cannot merge tables of different systems");
    if (other.group_ == group_) {
      for (const auto& [key, p] : other.memo_) memo_.emplace(key, p);
      return;
    }
    for (const auto& [key, p] : other.memo_) {
      const auto [x, w] = unpack(key);
      const auto xi = group_->find(other.group().element(x));
      const auto wi = group_->find(other.group().element(w));
      if (xi && wi) memo_.emplace(pack(*xi, *wi), p);
    }
  }

  /// Stored entries as (x, w, P) index triples, ordered by (x, w).
  std::vector<std::tuple<int, int, Polynomial>> entries() const {
    std::vector<std::tuple<int, int, Polynomial>> out;
    out.reserve(memo_.size());
    for (const auto& [key, p] : memo_) {
      const auto [x, w] = unpack(key);
      out.emplace_back(x, w, p);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::uint64_t pack(int x, int w) const { return (static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint32_t>(w); }
  static std::pair<int, int> unpack(std::uint64_t key) {
    return {static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffU)};
  }

  std::shared_ptr<const EnumeratedGroup> group_;
  std::unordered_map<std::uint64_t, Polynomial> memo_;
};

namespace detail {

inline std::pair<int, int> kl_indices(const GroupElement& x, const GroupElement& w, const KLTable& table) {
  require_same_system(x, w);
  if (!table.system()->same_as(*x.system()))
    throw Error(ErrorCode::TableMismatch, "table is bound to " + table.system()->name());
  return {table.group().index_of(x), table.group().index_of(w)};
}

}  // namespace detail

inline Polynomial kl_polynomial(const GroupElement& x, const GroupElement& w, KLTable& table) {
  const auto [xi, wi] = detail::kl_indices(x, w, table);
  return table.polynomial(xi, wi);
}

inline std::int64_t mu(const GroupElement& x, const GroupElement& w, KLTable& table) {
  const auto [xi, wi] = detail::kl_indices(x, w, table);
  return table.mu(xi, wi);
}

/// m = floor((l(w)-1)/2), or -1 for the identity.
inline int kl_top_degree(int length) { return length >= 1 ? (length - 1) / 2 : -1; }

/// beta_1..beta_m: coefficients of q^i in P_{e,w}. Empty when l(w) <= 2.
inline std::vector<std::int64_t> beta_vector(int w, KLTable& table) {
  const int m = kl_top_degree(table.group().length(w));
  const auto& p = table.polynomial(0, w);
  std::vector<std::int64_t> beta;
  for (int i = 1; i <= m; ++i) beta.push_back(poly::coefficient(p, i));
  return beta;
}

inline std::vector<std::int64_t> beta_vector(const GroupElement& w, KLTable& table) {
  return beta_vector(detail::kl_indices(w, w, table).second, table);
}

/// F_w(q) coefficients a_0..a_{l(w)}.
struct FwPolynomial {
  std::vector<std::int64_t> coefficients;
};

inline FwPolynomial fw_polynomial(int w, KLTable& table) {
  const auto& g = table.group();
  FwPolynomial f;
  f.coefficients.assign(g.length(w) + 1, 0);
  const Bitset& below = g.down(w);
  for (auto xx = below.find_first(); xx != Bitset::npos; xx = below.find_next(xx)) {
    const int x = static_cast<int>(xx);
    const auto& p = table.polynomial(x, w);
    for (std::size_t i = 0; i < p.size(); ++i) f.coefficients[g.length(x) + i] += p[i];
  }
  const auto& a = f.coefficients;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != a[a.size() - 1 - i])
      throw Error(ErrorCode::SymmetryViolation, "a_" + std::to_string(i) + " != a_" + std::to_string(a.size() - 1 - i) +
                                                    " for w = " + format_word(g.word(w)));
  return f;
}

inline FwPolynomial fw_polynomial(const GroupElement& w, KLTable& table) {
  return fw_polynomial(detail::kl_indices(w, w, table).second, table);
}

/// Outcome of the equality-case check at one k.
struct TheoremCVerdict {
  int k = 0;
  int m = 0;
  bool a_holds = false;  // f_i = f_{l(w)-i} for i = 0..k
  bool b_holds = false;  // beta_i = 0 for i = 1..k
  std::optional<std::int64_t> c_value;     // beta_{k+1}, when k < m and b holds
  std::optional<std::int64_t> c_expected;  // f_{l(w)-k-1} - f_{k+1}
  std::optional<bool> c_matches;

  bool consistent() const { return a_holds == b_holds && c_matches.value_or(true); }
};

inline TheoremCVerdict check_theorem_c(int w, int k, KLTable& table) {
  const auto& g = table.group();
  const int len = g.length(w);
  const int m = kl_top_degree(len);
  if (k < 0 || k > m)
    throw Error(ErrorCode::BadK, "k = " + std::to_string(k) + " outside 0.." + std::to_string(m));
  const auto f = g.f_vector(w, GeneratorSet{}).counts;
  const auto beta = beta_vector(w, table);
  TheoremCVerdict v;
  v.k = k;
  v.m = m;
  v.a_holds = true;
  for (int i = 0; i <= k; ++i)
    if (f[i] != f[len - i]) v.a_holds = false;
  v.b_holds = true;
  for (int i = 1; i <= k; ++i)
    if (beta[i - 1] != 0) v.b_holds = false;
  if (k < m && v.b_holds) {
    v.c_value = beta[k];
    v.c_expected = f[len - k - 1] - f[k + 1];
    v.c_matches = *v.c_value == *v.c_expected;
  }
  return v;
}

inline TheoremCVerdict check_theorem_c(const GroupElement& w, int k, KLTable& table) {
  return check_theorem_c(detail::kl_indices(w, w, table).second, k, table);
}

struct MonotonicityVerdict {
  bool ok = true;
  std::size_t pairs_checked = 0;
  std::optional<std::pair<int, int>> violation;  // (x, y) with P_{x,z} not >= P_{y,z}
};

/// P_{x,z} >= P_{y,z} coefficientwise for all x <= y <= z.
inline MonotonicityVerdict check_monotonicity(int z, KLTable& table) {
  const auto& g = table.group();
  const Bitset& below = g.down(z);
  std::vector<int> members;
  for (auto u = below.find_first(); u != Bitset::npos; u = below.find_next(u)) members.push_back(static_cast<int>(u));
  MonotonicityVerdict v;
  for (int y : members) {
    const Polynomial py = table.polynomial(y, z);
    for (int x : members) {
      if (!g.leq(x, y)) continue;
      ++v.pairs_checked;
      if (!poly::dominates(table.polynomial(x, z), py)) {
        v.ok = false;
        v.violation = std::make_pair(x, y);
        return v;
      }
    }
  }
  return v;
}

inline MonotonicityVerdict check_monotonicity(const GroupElement& z, KLTable& table) {
  return check_monotonicity(detail::kl_indices(z, z, table).second, table);
}

}  // namespace coxeter
