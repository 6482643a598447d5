#pragma once

// Bound functions for the upper end of Bruhat intervals: Q(s), the corpus
// atom maximum M(r), N_k, the coatom lemma and tail-decrease checks, the two
// M-sequence counterexample searches, and the alpha ratio report.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coxeter/corpus.hpp"
#include "coxeter/enumerated.hpp"
#include "coxeter/msequence.hpp"

namespace coxeter {

// ---------------------------------------------------------------------------
// Q(s)

struct IrreducibleType {
  std::string name;
  int rank;
  int longest_length;  // number of positive roots
};

/// Irreducible finite crystallographic types of rank s with their positive
/// root counts. B and C share a Coxeter group and are listed once.
inline std::vector<IrreducibleType> irreducible_types(int s) {
  std::vector<IrreducibleType> out;
  if (s >= 1) out.push_back({"A" + std::to_string(s), s, s * (s + 1) / 2});
  if (s >= 2) out.push_back({"B" + std::to_string(s), s, s * s});
  if (s >= 4) out.push_back({"D" + std::to_string(s), s, s * s - s});
  if (s == 2) out.push_back({"G2", 2, 6});
  if (s == 4) out.push_back({"F4", 4, 24});
  if (s == 6) out.push_back({"E6", 6, 36});
  if (s == 7) out.push_back({"E7", 7, 63});
  if (s == 8) out.push_back({"E8", 8, 120});
  return out;
}

/// Largest l(w_0) over irreducible crystallographic types of rank s.
inline int q_irreducible(int s) {
  int best = 0;
  for (const auto& t : irreducible_types(s)) best = std::max(best, t.longest_length);
  return best;
}

/// Q(s): largest l(w_0) over finite crystallographic systems of rank s,
/// maximized over all decompositions into irreducible components.
inline int q_of_rank(int s) {
  if (s < 0) throw Error(ErrorCode::BadRange, "negative rank");
  std::vector<int> best(s + 1, 0);
  for (int total = 1; total <= s; ++total)
    for (int r = 1; r <= total; ++r) best[total] = std::max(best[total], q_irreducible(r) + best[total - r]);
  return best[s];
}

/// Q(s) and M~(k) with provenance tags.
struct BoundTable {
  std::map<int, int> q_values;
  std::map<int, std::int64_t> mtilde;
  std::map<int, std::string> mtilde_source;

  /// Q(0..max_rank) computed; M~(1) = 1 since a length-1 interval is one edge;
  /// M~(2..4) = 2, 4, 8 are the published values of M(2..4).
  static BoundTable standard(int max_rank = 12) {
    BoundTable t;
    for (int s = 0; s <= max_rank; ++s) t.q_values[s] = q_of_rank(s);
    t.mtilde = {{1, 1}, {2, 2}, {3, 4}, {4, 8}};
    t.mtilde_source = {{1, "computed"}, {2, "paper-seeded"}, {3, "paper-seeded"}, {4, "paper-seeded"}};
    return t;
  }

  int q(int s) const {
    if (auto it = q_values.find(s); it != q_values.end()) return it->second;
    return q_of_rank(s);
  }
};

/// N_k = Q(M~(k) - 1) + k.
inline std::int64_t n_k(int k, const BoundTable& table) {
  const auto it = table.mtilde.find(k);
  if (it == table.mtilde.end()) throw Error(ErrorCode::MissingMTilde, "no M~(" + std::to_string(k) + ") available");
  return table.q(static_cast<int>(it->second) - 1) + k;
}

// ---------------------------------------------------------------------------
// Atoms of intervals

struct AtomSearchResult {
  std::int64_t max_found = 0;
  std::string group;
  Word bottom, top;  // witness interval [u, v]
  std::size_t intervals = 0;
};

/// For each element u, the elements covering it (as a bitset).
inline std::vector<Bitset> upper_covers(const EnumeratedGroup& g) {
  std::vector<Bitset> up(g.size(), Bitset(g.size()));
  for (int v = 0; v < g.size(); ++v)
    for (int u : g.lower_covers(v)) up[u].set(v);
  return up;
}

/// Largest atom count f^{u,v}_{l(u)+1} over intervals [u,v] of length r in one group.
inline AtomSearchResult search_max_atoms(const CorpusGroup& cg, int r) {
  if (r < 1) throw Error(ErrorCode::BadRange, "interval length must be >= 1");
  const auto& g = *cg.group;
  const auto up = upper_covers(g);
  AtomSearchResult res;
  res.group = cg.name();
  for (int u = 0; u < g.size(); ++u) {
    const int top_len = g.length(u) + r;
    if (top_len > g.radius()) continue;
    for (int v = g.level_begin(top_len); v < g.level_end(top_len); ++v) {
      if (!g.leq(u, v)) continue;
      ++res.intervals;
      const auto atoms = static_cast<std::int64_t>((g.down(v) & up[u]).count());
      if (atoms > res.max_found) {
        res.max_found = atoms;
        res.bottom = g.word(u);
        res.top = g.word(v);
      }
    }
  }
  return res;
}

struct CorpusAtomSearch {
  AtomSearchResult finite;    // M(r) is a maximum over finite groups
  AtomSearchResult infinite;  // truncated infinite entries, reported separately
};

inline CorpusAtomSearch search_max_atoms(const std::vector<CorpusGroup>& corpus, int r) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "no groups to search");
  CorpusAtomSearch out;
  for (const auto& cg : corpus) {
    auto res = search_max_atoms(cg, r);
    auto& best = cg.system->is_finite() ? out.finite : out.infinite;
    const auto intervals = best.intervals + res.intervals;
    if (res.max_found > best.max_found) best = std::move(res);
    best.intervals = intervals;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Per-element f-vectors of a finite group

inline std::vector<std::vector<std::int64_t>> all_f_vectors(const EnumeratedGroup& g) {
  std::vector<std::vector<std::int64_t>> out(g.size());
  for (int w = 0; w < g.size(); ++w) out[w] = g.level_counts(g.down(w), g.length(w));
  return out;
}

inline void require_finite(const EnumeratedGroup& g) {
  if (!g.system()->is_finite()) throw Error(ErrorCode::InfiniteGroup, g.system()->name() + " is infinite");
  if (!g.complete()) throw Error(ErrorCode::BadRange, g.system()->name() + " is enumerated only up to length " + std::to_string(g.radius()));
}

/// Both M-sequence conditions for w in a finite Weyl group.
inline TheoremDVerdict verify_theorem_d(const EnumeratedGroup& g, int w) {
  require_finite(g);
  return verify_theorem_d(g.level_counts(g.down(w), g.length(w)));
}

inline TheoremDVerdict verify_theorem_d(BruhatOrder& order, const GroupElement& w) {
  if (!w.system()->is_finite()) throw Error(ErrorCode::InfiniteGroup, w.system()->name() + " is infinite");
  return verify_theorem_d(order.f_vector(w, GeneratorSet{}).counts);
}

struct LemmaVerdict {
  bool ok = true;
  bool vacuous = true;
  int j = 0;
  int q_j = 0;
  std::size_t checked = 0;
  std::optional<int> violation;  // element index
};

/// Every w with l(w) > Q(j) has more than j coatoms.
inline LemmaVerdict verify_lemma_coatoms(const EnumeratedGroup& g, int j) {
  require_finite(g);
  LemmaVerdict v;
  v.j = j;
  v.q_j = q_of_rank(j);
  for (int w = 0; w < g.size(); ++w) {
    if (g.length(w) <= v.q_j) continue;
    v.vacuous = false;
    ++v.checked;
    const auto coatoms = static_cast<int>(g.lower_covers(w).size());
    if (coatoms <= j) {
      v.ok = false;
      v.violation = w;
      return v;
    }
  }
  return v;
}

/// Least t with f_t >= f_{t+1} >= ... >= f_l.
inline int tail_start(const std::vector<std::int64_t>& f) {
  int t = static_cast<int>(f.size()) - 1;
  while (t > 0 && f[t - 1] >= f[t]) --t;
  return t;
}

inline bool tail_decreasing(const std::vector<std::int64_t>& f, int k) {
  const int len = static_cast<int>(f.size()) - 1;
  return tail_start(f) <= std::max(0, len - k);
}

struct TailVerdict {
  bool ok = true;
  bool vacuous = true;
  int k = 0;
  std::int64_t threshold = 0;
  std::size_t checked = 0;
  std::optional<int> violation;
  /// Least T such that every w with l(w) >= T satisfies the tail condition.
  int empirical_threshold = 0;
};

/// f_{l-k} >= ... >= f_l for every w with l(w) >= threshold.
inline TailVerdict verify_tail(const EnumeratedGroup& g, int k, std::int64_t threshold) {
  require_finite(g);
  TailVerdict v;
  v.k = k;
  v.threshold = threshold;
  int last_bad_length = -1;
  for (int w = 0; w < g.size(); ++w) {
    const auto f = g.level_counts(g.down(w), g.length(w));
    const bool holds = tail_decreasing(f, k);
    if (!holds) last_bad_length = std::max(last_bad_length, g.length(w));
    if (g.length(w) < threshold) continue;
    v.vacuous = false;
    ++v.checked;
    if (!holds && v.ok) {
      v.ok = false;
      v.violation = w;
    }
  }
  v.empirical_threshold = last_bad_length + 1;
  return v;
}

struct DegreeBoundVerdict {
  bool ok = true;
  std::size_t checked = 0;
  std::optional<std::pair<int, int>> violation;  // (w, x)
  std::int64_t max_degree = 0;
};

/// In [e,w], each x of length l(w) - r has at most M~(r) elements of length
/// l(x) + 1 between x and w.
inline DegreeBoundVerdict check_degree_bound(const EnumeratedGroup& g, int r, const BoundTable& table) {
  const auto bound = table.mtilde.at(r);
  const auto up = upper_covers(g);
  DegreeBoundVerdict v;
  for (int w = 0; w < g.size(); ++w) {
    const int len = g.length(w) - r;
    if (len < 0) continue;
    for (int x = g.level_begin(len); x < g.level_end(len); ++x) {
      if (!g.leq(x, w)) continue;
      ++v.checked;
      const auto degree = static_cast<std::int64_t>((g.down(w) & up[x]).count());
      v.max_degree = std::max(v.max_degree, degree);
      if (degree > bound && v.ok) {
        v.ok = false;
        v.violation = std::make_pair(w, x);
      }
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Counterexample searches

struct AffineCounterexample {
  bool found = false;
  Word u;
  int length = 0;
  std::vector<std::int64_t> f_vector;
  MSequenceVerdict m_sequence;
};

/// Minimal-length u (ShortLex-first among those) lying above every element
/// of length `level` in the enumerated ball.
inline AffineCounterexample find_element_above_level(const EnumeratedGroup& g, int level) {
  AffineCounterexample out;
  if (level > g.radius()) return out;
  Bitset target(g.size());
  for (int x = g.level_begin(level); x < g.level_end(level); ++x) target.set(x);
  for (int u = g.level_begin(level); u < g.size(); ++u) {
    if (!target.is_subset_of(g.down(u))) continue;
    out.found = true;
    out.u = g.word(u);
    out.length = g.length(u);
    out.f_vector = g.level_counts(g.down(u), g.length(u));
    out.m_sequence = is_m_sequence(out.f_vector);
    return out;
  }
  return out;
}

struct RelativeCounterexample {
  std::size_t candidates = 0;
  std::vector<Word> witnesses;
  std::vector<std::vector<std::int64_t>> witness_series;
  MSequenceVerdict m_sequence;  // of the first witness series
};

/// All x with l(w_0) - l(x) >= head.size() - 1 whose series of [x, w_0] starts with `head`.
inline RelativeCounterexample find_relative_series(const EnumeratedGroup& g, const std::vector<std::int64_t>& head) {
  require_finite(g);
  RelativeCounterexample out;
  const int top = g.size() - 1;
  const int depth = static_cast<int>(head.size()) - 1;
  for (int x = 0; x < g.size(); ++x) {
    if (g.length(top) - g.length(x) < depth) continue;
    ++out.candidates;
    const auto series = g.relative_f_vector(x, top).counts;
    if (!std::equal(head.begin(), head.end(), series.begin())) continue;
    if (out.witnesses.empty()) out.m_sequence = is_m_sequence(series);
    out.witnesses.push_back(g.word(x));
    out.witness_series.push_back(series);
  }
  return out;
}

struct CounterexampleReport {
  std::string affine_group;
  AffineCounterexample affine;
  bool affine_ok = false;
  std::string finite_group;
  RelativeCounterexample relative;
  bool relative_ok = false;
  bool ok() const { return affine_ok && relative_ok; }
};

/// (i) in C2~ an element above all length-3 elements with f-vector head
/// (1,3,5,8) failing the M-sequence test at k = 3; (ii) in B4 (= C4 as a
/// Coxeter group) an x whose interval [x, w_0] has series 1 + 4q + 11q^2 + ...
inline CounterexampleReport find_counterexamples(const std::vector<CorpusGroup>& corpus) {
  const CorpusGroup* affine = nullptr;
  const CorpusGroup* finite = nullptr;
  for (const auto& cg : corpus) {
    if (!affine && cg.name() == "C2~") affine = &cg;
    if (!finite && (cg.name() == "B4" || cg.name() == "C4") && cg.group->complete()) finite = &cg;
  }
  if (!affine) throw Error(ErrorCode::CorpusMissingEntry, "corpus needs C2~");
  if (!finite) throw Error(ErrorCode::CorpusMissingEntry, "corpus needs B4 (or C4)");

  CounterexampleReport rep;
  rep.affine_group = affine->name();
  rep.affine = find_element_above_level(*affine->group, 3);
  if (!rep.affine.found)
    throw Error(ErrorCode::SearchExhausted, "no element above all length-3 elements within length " +
                                                std::to_string(affine->group->radius()));
  const std::vector<std::int64_t> affine_head{1, 3, 5, 8};
  rep.affine_ok = rep.affine.f_vector.size() >= 4 &&
                  std::equal(affine_head.begin(), affine_head.end(), rep.affine.f_vector.begin()) &&
                  !rep.affine.m_sequence.ok && rep.affine.m_sequence.first_failure_k == 3 &&
                  rep.affine.m_sequence.boundary == 6;

  rep.finite_group = finite->name();
  rep.relative = find_relative_series(*finite->group, {1, 4, 11});
  if (rep.relative.witnesses.empty())
    throw Error(ErrorCode::SearchExhausted, "no x in " + finite->name() + " with series 1+4q+11q^2+...");
  rep.relative_ok = true;
  return rep;
}

// ---------------------------------------------------------------------------
// Alpha report

struct AlphaRow {
  std::string group;
  int t = 0;
  int length = 0;
  Word witness;
  double ratio() const { return length == 0 ? 0.0 : static_cast<double>(t) / length; }
};

struct AlphaReport {
  std::vector<AlphaRow> per_group;
  std::vector<std::string> skipped;  // infinite entries
  std::optional<AlphaRow> overall;
};

/// t(w) = least index with f_t >= ... >= f_{l(w)}; reports max t(w)/l(w).
inline AlphaReport alpha_report(const std::vector<CorpusGroup>& corpus) {
  AlphaReport rep;
  for (const auto& cg : corpus) {
    const auto& g = *cg.group;
    if (!g.complete()) {
      rep.skipped.push_back(cg.name());
      continue;
    }
    AlphaRow best{cg.name(), 0, 0, {}};
    for (int w = 0; w < g.size(); ++w) {
      const int len = g.length(w);
      if (len == 0) continue;
      const int t = tail_start(g.level_counts(g.down(w), len));
      // Compare t/len > best.t/best.length exactly.
      if (best.length == 0 ? t > 0 : static_cast<std::int64_t>(t) * best.length > static_cast<std::int64_t>(best.t) * len) {
        best = {cg.name(), t, len, g.word(w)};
      }
    }
    rep.per_group.push_back(best);
    if (!rep.overall || (rep.overall->length == 0 ? best.t > 0
                                                  : static_cast<std::int64_t>(best.t) * rep.overall->length >
                                                        static_cast<std::int64_t>(rep.overall->t) * best.length))
      rep.overall = best;
  }
  return rep;
}

}  // namespace coxeter
