#pragma once

// Macaulay expansions, the boundary operator d^k, and M-sequence tests.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coxeter/error.hpp"

namespace coxeter {

/// C(n, k) with overflow detection; 0 when k < 0 or k > n.
inline std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) is divisible by i after the multiplication.
    r = detail::checked_mul(r, n - k + i) / i;
  }
  return r;
}

/// n = C(a_k, k) + C(a_{k-1}, k-1) + ... + C(a_i, i), a_k > ... > a_i >= i >= 1.
struct MacaulayExpansion {
  int k = 1;
  std::int64_t n = 0;
  std::vector<std::int64_t> terms;  // a_k, a_{k-1}, ..., a_i

  std::int64_t value() const {
    std::int64_t total = 0;
    for (std::size_t j = 0; j < terms.size(); ++j)
      total = detail::checked_add(total, binomial(terms[j], k - static_cast<std::int64_t>(j)));
    return total;
  }
};

/// Greedy: the largest a with C(a, j) <= remainder, for j = k, k-1, ...
inline MacaulayExpansion macaulay_expansion(std::int64_t n, int k) {
  if (k < 1) throw Error(ErrorCode::BadRange, "Macaulay expansion needs k >= 1");
  if (n < 0) throw Error(ErrorCode::NegativeEntry, "Macaulay expansion of a negative number");
  MacaulayExpansion e{k, n, {}};
  std::int64_t rest = n;
  for (int j = k; j >= 1 && rest > 0; --j) {
    std::int64_t a = j;
    // Exponential probe, then binary search for the largest C(a, j) <= rest.
    std::int64_t hi = j + 1;
    auto fits = [&](std::int64_t x) {
      try {
        return binomial(x, j) <= rest;
      } catch (const Error&) {
        return false;
      }
    };
    while (fits(hi)) hi = j + 2 * (hi - j);
    while (a + 1 < hi) {
      const std::int64_t mid = a + (hi - a) / 2;
      if (fits(mid)) a = mid;
      else hi = mid;
    }
    e.terms.push_back(a);
    rest -= binomial(a, j);
  }
  return e;
}

/// d^k(n) = C(a_k - 1, k - 1) + ... + C(a_i - 1, i - 1); d^k(0) = 0.
inline std::int64_t partial_k(std::int64_t n, int k) {
  const auto e = macaulay_expansion(n, k);
  std::int64_t total = 0;
  for (std::size_t j = 0; j < e.terms.size(); ++j) {
    const std::int64_t degree = k - static_cast<std::int64_t>(j);
    total = detail::checked_add(total, binomial(e.terms[j] - 1, degree - 1));
  }
  return total;
}

struct MSequenceVerdict {
  bool ok = true;
  /// First k with d^k(m_k) > m_{k-1}; 0 when m_0 != 1.
  std::optional<int> first_failure_k;
  std::int64_t boundary = 0;  // d^k(m_k) at the failure
};

/// (1, m_1, m_2, ...) is an M-sequence iff d^k(m_k) <= m_{k-1} for all k >= 1.
inline MSequenceVerdict is_m_sequence(const std::vector<std::int64_t>& seq) {
  for (std::size_t i = 0; i < seq.size(); ++i)
    if (seq[i] < 0) throw Error(ErrorCode::NegativeEntry, "entry " + std::to_string(i) + " is negative");
  MSequenceVerdict v;
  if (seq.empty() || seq[0] != 1) {
    v.ok = false;
    v.first_failure_k = 0;
    return v;
  }
  for (std::size_t k = 1; k < seq.size(); ++k) {
    const auto boundary = partial_k(seq[k], static_cast<int>(k));
    if (boundary > seq[k - 1]) {
      v.ok = false;
      v.first_failure_k = static_cast<int>(k);
      v.boundary = boundary;
      return v;
    }
  }
  return v;
}

/// The two vectors of the finite Weyl group statement: the f-vector itself and
/// (f_0, f_1 - f_0, ..., f_{floor(l/2)} - f_{floor(l/2)-1}).
inline std::vector<std::int64_t> difference_vector(const std::vector<std::int64_t>& f) {
  const int len = static_cast<int>(f.size()) - 1;
  std::vector<std::int64_t> out{f[0]};
  for (int i = 1; i <= len / 2; ++i) out.push_back(f[i] - f[i - 1]);
  return out;
}

struct TheoremDVerdict {
  MSequenceVerdict f_vector;
  MSequenceVerdict differences;
  bool ok() const { return f_vector.ok && differences.ok; }
};

/// Callers pass an f-vector of w in a finite Weyl group; group finiteness is
/// checked where the f-vector is produced.
inline TheoremDVerdict verify_theorem_d(const std::vector<std::int64_t>& f) {
  return {is_m_sequence(f), is_m_sequence(difference_vector(f))};
}

}  // namespace coxeter
