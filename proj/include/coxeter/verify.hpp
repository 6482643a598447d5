#pragma once

// Verification suites over a corpus, with deterministic parallel execution
// and JSON/TSV report emission.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "coxeter/bounds.hpp"
#include "coxeter/chains.hpp"
#include "coxeter/corpus.hpp"
#include "coxeter/kl.hpp"
#include "coxeter/kl_cache.hpp"
#include "coxeter/msequence.hpp"

namespace coxeter {

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"thmA", "thmB",     "thmC",  "thmD",  "monotonicity", "coatoms",
                                              "tail", "counterexamples", "bounds", "alpha"};
  return names;
}

struct VerifyOptions {
  int jobs = 1;
  std::string cache_dir;  // one <type>.klcache per group; empty disables caching
  bool timings = true;
};

struct ReportItem {
  std::string group;
  std::optional<GeneratorSet> J;
  bool ok = true;
  bool vacuous = false;
  std::int64_t checked = 0;
  nlohmann::json details = nlohmann::json::object();
  nlohmann::json witness;  // null when ok
};

struct VerificationReport {
  std::string suite;
  std::string corpus_digest;
  std::vector<ReportItem> items;
  std::map<std::string, double> timings_ms;

  bool ok() const {
    return std::all_of(items.begin(), items.end(), [](const ReportItem& i) { return i.ok; });
  }
  int exit_code() const { return ok() ? 0 : 1; }
};

inline std::string corpus_digest(const CorpusSpec& spec) { return sha256_hex(spec.source.dump()); }

/// Runs fn(task, worker) for task in [0, n) on `jobs` threads. Tasks are
/// claimed dynamically; callers write results into per-task slots.
inline void parallel_for(int n, int jobs, const std::function<void(int, int)>& fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int t = 0; t < n; ++t) fn(t, 0);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> workers;
  for (int id = 0; id < jobs; ++id) {
    workers.emplace_back([&, id] {
      try {
        for (int t = next++; t < n; t = next++) fn(t, id);
      } catch (...) {
        errors[id] = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& th : workers) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace detail {

inline nlohmann::json word_json(const EnumeratedGroup& g, int u) { return format_word(g.word(u)); }

/// Outcome of one top element w inside a (group, J) item.
struct ElementOutcome {
  bool applicable = false;
  bool ok = true;
  std::int64_t checks = 0;
  nlohmann::json witness;
};

/// Aggregates per-element outcomes in index order; the first failing element is the witness.
inline void fold(ReportItem& item, const std::vector<ElementOutcome>& outcomes) {
  for (const auto& o : outcomes) {
    if (!o.applicable) continue;
    item.checked += o.checks;
    if (!o.ok && item.ok) {
      item.ok = false;
      item.witness = o.witness;
    }
  }
  item.vacuous = item.checked == 0;
}

inline std::vector<ReportItem> per_element_suite(
    const std::vector<CorpusGroup>& corpus, const VerifyOptions& opt, bool finite_only, bool with_subsets,
    const std::function<ElementOutcome(const CorpusGroup&, int w, GeneratorSet J, const Bitset& reps)>& check) {
  std::vector<ReportItem> items;
  for (const auto& cg : corpus) {
    const auto& g = *cg.group;
    if (finite_only && !g.complete()) {
      ReportItem skip{cg.name(), std::nullopt, true, true, 0, {{"skipped", "infinite group"}}, nullptr};
      items.push_back(std::move(skip));
      continue;
    }
    const auto subsets = with_subsets ? parabolic_subsets(cg.entry, cg.system->rank()) : std::vector<GeneratorSet>{GeneratorSet{}};
    for (const auto& J : subsets) {
      const Bitset reps = g.minimal_reps(J);
      std::vector<ElementOutcome> outcomes(g.size());
      parallel_for(g.size(), opt.jobs, [&](int w, int) {
        if (reps.test(w)) outcomes[w] = check(cg, w, J, reps);
      });
      ReportItem item;
      item.group = cg.name();
      item.J = J;
      item.details["elements"] = static_cast<std::int64_t>(reps.count());
      fold(item, outcomes);
      items.push_back(std::move(item));
    }
  }
  return items;
}

inline std::vector<ReportItem> suite_theorem_a(const std::vector<CorpusGroup>& corpus, const VerifyOptions& opt) {
  return per_element_suite(corpus, opt, false, true, [](const CorpusGroup& cg, int w, GeneratorSet J, const Bitset& reps) {
    const auto& g = *cg.group;
    ElementOutcome o;
    o.applicable = true;
    const auto f = g.f_vector(w, reps).counts;
    const int len = g.length(w);
    for (int i = 0; 2 * i <= len; ++i) {
      for (int j = i + 1; j <= len - i; ++j) {
        ++o.checks;
        if (f[i] > f[j] && o.ok) {
          o.ok = false;
          o.witness = {{"w", word_json(g, w)}, {"J", J.to_list()}, {"i", i}, {"j", j}, {"f", f}};
        }
      }
    }
    return o;
  });
}

inline std::vector<ReportItem> suite_theorem_b(const std::vector<CorpusGroup>& corpus, const VerifyOptions& opt) {
  return per_element_suite(corpus, opt, false, true, [](const CorpusGroup& cg, int w, GeneratorSet J, const Bitset& reps) {
    const auto& g = *cg.group;
    ElementOutcome o;
    o.applicable = true;
    const auto f = g.f_vector(w, reps).counts;
    const int len = g.length(w);
    for (int i = 0; 2 * i < len; ++i) {
      ++o.checks;
      const auto cert = max_disjoint_chains(g, w, J, i);
      std::optional<std::string> defect;
      if (cert.flow_value != f[i]) defect = "flow " + std::to_string(cert.flow_value) + " != f_i " + std::to_string(f[i]);
      if (!defect) defect = validate_certificate(cert, g, w, J, len - i);
      if (defect && o.ok) {
        o.ok = false;
        o.witness = {{"w", word_json(g, w)}, {"J", J.to_list()}, {"i", i}, {"defect", *defect}};
      }
    }
    return o;
  });
}

inline std::vector<ReportItem> suite_theorem_d(const std::vector<CorpusGroup>& corpus, const VerifyOptions& opt) {
  return per_element_suite(corpus, opt, true, false, [](const CorpusGroup& cg, int w, GeneratorSet, const Bitset& reps) {
    const auto& g = *cg.group;
    ElementOutcome o;
    o.applicable = true;
    o.checks = 2;
    const auto f = g.f_vector(w, reps).counts;
    const auto v = verify_theorem_d(f);
    if (!v.ok()) {
      o.ok = false;
      o.witness = {{"w", word_json(g, w)},
                   {"f", f},
                   {"vector", v.f_vector.ok ? "differences" : "f"},
                   {"k", (v.f_vector.ok ? v.differences : v.f_vector).first_failure_k.value_or(-1)}};
    }
    return o;
  });
}

/// Loads the group's cache file when present, runs `check` per element on
/// worker-local tables, merges them, and writes the cache back.
inline ReportItem kl_group_item(const CorpusGroup& cg, const VerifyOptions& opt,
                                const std::function<ElementOutcome(KLTable&, int w)>& check) {
  KLTable base(cg.group);
  std::string cache_path;
  if (!opt.cache_dir.empty()) {
    std::filesystem::create_directories(opt.cache_dir);
    cache_path = (std::filesystem::path(opt.cache_dir) / (cg.name() + ".klcache")).string();
    if (std::filesystem::exists(cache_path)) load_cache(cache_path, base);
  }
  const auto& g = *cg.group;
  const int jobs = std::max(1, std::min(opt.jobs, g.size()));
  std::vector<std::unique_ptr<KLTable>> tables;
  for (int id = 0; id < jobs; ++id) tables.push_back(std::make_unique<KLTable>(base));
  std::vector<ElementOutcome> outcomes(g.size());
  // Longest elements first so the expensive tops are spread across workers.
  parallel_for(g.size(), jobs, [&](int t, int id) {
    const int w = g.size() - 1 - t;
    outcomes[w] = check(*tables[id], w);
  });
  for (const auto& t : tables) base.merge(*t);
  if (!cache_path.empty()) save_cache(base, cache_path);
  ReportItem item;
  item.group = cg.name();
  item.details["elements"] = g.size();
  item.details["kl_entries"] = static_cast<std::int64_t>(base.size());
  fold(item, outcomes);
  return item;
}

inline std::vector<ReportItem> suite_theorem_c(const std::vector<CorpusGroup>& corpus, const VerifyOptions& opt) {
  std::vector<ReportItem> items;
  for (const auto& cg : corpus) {
    items.push_back(kl_group_item(cg, opt, [](KLTable& table, int w) {
      const auto& g = table.group();
      ElementOutcome o;
      o.applicable = true;
      const int m = kl_top_degree(g.length(w));
      for (int k = 0; k <= m; ++k) {
        ++o.checks;
        const auto v = check_theorem_c(w, k, table);
        if (!v.consistent() && o.ok) {
          o.ok = false;
          o.witness = {{"w", word_json(g, w)}, {"k", k}, {"a_holds", v.a_holds}, {"b_holds", v.b_holds}};
          if (v.c_value) o.witness["beta"] = *v.c_value;
          if (v.c_expected) o.witness["f_difference"] = *v.c_expected;
        }
      }
      // Rational smoothness: full f-symmetry iff P_{e,w} = 1.
      const auto f = g.f_vector(w, GeneratorSet{}).counts;
      const bool symmetric = std::equal(f.begin(), f.end(), f.rbegin());
      const bool trivial = table.polynomial(0, w) == Polynomial{1};
      ++o.checks;
      if (symmetric != trivial && o.ok) {
        o.ok = false;
        o.witness = {{"w", word_json(g, w)}, {"symmetric", symmetric}, {"P_ew", poly::to_string(table.polynomial(0, w))}};
      }
      return o;
    }));
  }
  return items;
}

inline std::vector<ReportItem> suite_monotonicity(const std::vector<CorpusGroup>& corpus, const VerifyOptions& opt) {
  std::vector<ReportItem> items;
  for (const auto& cg : corpus) {
    items.push_back(kl_group_item(cg, opt, [](KLTable& table, int z) {
      const auto& g = table.group();
      ElementOutcome o;
      o.applicable = true;
      const auto v = check_monotonicity(z, table);
      o.checks = static_cast<std::int64_t>(v.pairs_checked);
      if (!v.ok) {
        o.ok = false;
        o.witness = {{"z", word_json(g, z)}, {"x", word_json(g, v.violation->first)}, {"y", word_json(g, v.violation->second)}};
      }
      return o;
    }));
  }
  return items;
}

inline std::vector<ReportItem> suite_coatoms(const std::vector<CorpusGroup>& corpus, const VerifyOptions&) {
  std::vector<ReportItem> items;
  for (const auto& cg : corpus) {
    const auto& g = *cg.group;
    if (!g.complete()) {
      items.push_back({cg.name(), std::nullopt, true, true, 0, {{"skipped", "infinite group"}}, nullptr});
      continue;
    }
    const int top = *cg.system->longest_length();
    for (int j = 1; q_of_rank(j) < top; ++j) {
      const auto v = verify_lemma_coatoms(g, j);
      ReportItem item{cg.name(), std::nullopt, v.ok, v.vacuous, static_cast<std::int64_t>(v.checked),
                      {{"j", j}, {"Q_j", v.q_j}}, nullptr};
      if (v.violation)
        item.witness = {{"w", word_json(g, *v.violation)}, {"coatoms", g.lower_covers(*v.violation).size()}};
      items.push_back(std::move(item));
    }
  }
  return items;
}

inline std::vector<ReportItem> suite_tail(const std::vector<CorpusGroup>& corpus, const VerifyOptions&) {
  const auto table = BoundTable::standard();
  std::vector<ReportItem> items;
  for (const auto& cg : corpus) {
    const auto& g = *cg.group;
    if (!g.complete()) {
      items.push_back({cg.name(), std::nullopt, true, true, 0, {{"skipped", "infinite group"}}, nullptr});
      continue;
    }
    for (int k = 1; k <= 3; ++k) {
      const auto threshold = n_k(k, table);
      const auto v = verify_tail(g, k, threshold);
      ReportItem item{cg.name(), std::nullopt, v.ok, v.vacuous, static_cast<std::int64_t>(v.checked),
                      {{"k", k}, {"N_k", threshold}, {"empirical_threshold", v.empirical_threshold}}, nullptr};
      if (v.violation) {
        item.witness = {{"w", word_json(g, *v.violation)},
                        {"f", g.level_counts(g.down(*v.violation), g.length(*v.violation))}};
      }
      items.push_back(std::move(item));
    }
  }
  return items;
}

inline std::vector<ReportItem> suite_counterexamples(const std::vector<CorpusGroup>& corpus, const VerifyOptions&) {
  std::vector<ReportItem> items;
  CounterexampleReport rep;
  try {
    rep = find_counterexamples(corpus);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SearchExhausted) throw;
    items.push_back({"search", std::nullopt, false, false, 0, {{"error", e.what()}}, nullptr});
    return items;
  }
  ReportItem affine{rep.affine_group, std::nullopt, rep.affine_ok, false, 1, nlohmann::json::object(), nullptr};
  affine.details = {{"u", format_word(rep.affine.u)},
                    {"length", rep.affine.length},
                    {"f_vector", rep.affine.f_vector},
                    {"m_sequence", rep.affine.m_sequence.ok},
                    {"failure_k", rep.affine.m_sequence.first_failure_k.value_or(-1)},
                    {"boundary", rep.affine.m_sequence.boundary}};
  if (!rep.affine_ok) affine.witness = affine.details;
  items.push_back(std::move(affine));

  ReportItem relative{rep.finite_group, std::nullopt, rep.relative_ok, false,
                      static_cast<std::int64_t>(rep.relative.candidates), nlohmann::json::object(), nullptr};
  nlohmann::json xs = nlohmann::json::array();
  for (const auto& x : rep.relative.witnesses) xs.push_back(format_word(x));
  relative.details = {{"head", {1, 4, 11}}, {"witnesses", xs}, {"series", rep.relative.witness_series.front()}};
  items.push_back(std::move(relative));
  return items;
}

inline std::vector<ReportItem> suite_bounds(const std::vector<CorpusGroup>& corpus, const VerifyOptions&) {
  std::vector<ReportItem> items;
  const auto table = BoundTable::standard();

  ReportItem q{"Q", std::nullopt, true, false, 0, nlohmann::json::object(), nullptr};
  nlohmann::json qv = nlohmann::json::object(), qi = nlohmann::json::object(), enumerated = nlohmann::json::array();
  for (int s = 0; s <= 12; ++s) {
    qv[std::to_string(s)] = table.q(s);
    qi[std::to_string(s)] = q_irreducible(s);
  }
  for (int s = 1; s <= 4; ++s) {
    for (const auto& t : irreducible_types(s)) {
      const auto sys = build_system(t.name);
      const EnumeratedGroup g(sys);
      ++q.checked;
      const bool match = g.length(g.size() - 1) == t.longest_length;
      enumerated.push_back({{"type", t.name}, {"formula", t.longest_length}, {"enumerated", g.length(g.size() - 1)}});
      if (!match && q.ok) {
        q.ok = false;
        q.witness = enumerated.back();
      }
    }
  }
  q.details = {{"Q", qv}, {"Q_irreducible", qi}, {"enumeration", enumerated}};
  items.push_back(std::move(q));

  ReportItem n{"N_k", std::nullopt, true, false, 0, nlohmann::json::object(), nullptr};
  for (const auto& [k, m] : table.mtilde) {
    n.details["N_" + std::to_string(k)] = n_k(k, table);
    n.details["Mtilde_" + std::to_string(k)] = {{"value", m}, {"source", table.mtilde_source.at(k)}};
  }
  items.push_back(std::move(n));

  const std::map<int, std::int64_t> ceiling{{1, 1}, {2, 2}, {3, 4}, {4, 8}};
  for (const auto& [r, cap] : ceiling) {
    const auto search = search_max_atoms(corpus, r);
    const auto& res = search.finite;
    ReportItem item{"atoms", std::nullopt, res.max_found <= cap, res.intervals == 0,
                    static_cast<std::int64_t>(res.intervals), nlohmann::json::object(), nullptr};
    if (r <= 2 && res.max_found != cap) item.ok = false;
    item.details = {{"r", r},
                    {"max_found", res.max_found},
                    {"ceiling", cap},
                    {"attained", res.max_found == cap},
                    {"witness", {{"group", res.group}, {"u", format_word(res.bottom)}, {"v", format_word(res.top)}}}};
    if (search.infinite.intervals > 0) {
      const auto& inf = search.infinite;
      item.details["infinite_entries"] = {
          {"max_found", inf.max_found},
          {"intervals", inf.intervals},
          {"witness", {{"group", inf.group}, {"u", format_word(inf.bottom)}, {"v", format_word(inf.top)}}}};
    }
    if (!item.ok) item.witness = item.details["witness"];
    items.push_back(std::move(item));
  }

  for (const auto& cg : corpus) {
    if (!cg.group->complete()) continue;
    for (int r = 1; r <= 4; ++r) {
      const auto v = check_degree_bound(*cg.group, r, table);
      ReportItem item{cg.name(), std::nullopt, v.ok, v.checked == 0, static_cast<std::int64_t>(v.checked),
                      {{"degree_bound_r", r}, {"Mtilde", table.mtilde.at(r)}, {"max_degree", v.max_degree}}, nullptr};
      if (v.violation)
        item.witness = {{"w", word_json(*cg.group, v.violation->first)}, {"x", word_json(*cg.group, v.violation->second)}};
      items.push_back(std::move(item));
    }
  }
  return items;
}

inline std::vector<ReportItem> suite_alpha(const std::vector<CorpusGroup>& corpus, const VerifyOptions&) {
  const auto rep = alpha_report(corpus);
  std::vector<ReportItem> items;
  for (const auto& row : rep.per_group) {
    items.push_back({row.group, std::nullopt, true, false, 1,
                     {{"t", row.t}, {"length", row.length}, {"ratio", row.ratio()}, {"w", format_word(row.witness)}},
                     nullptr});
  }
  for (const auto& name : rep.skipped)
    items.push_back({name, std::nullopt, true, true, 0, {{"skipped", "infinite group"}}, nullptr});
  if (rep.overall)
    items.push_back({"overall", std::nullopt, true, false, 1,
                     {{"group", rep.overall->group}, {"t", rep.overall->t}, {"length", rep.overall->length},
                      {"ratio", rep.overall->ratio()}, {"w", format_word(rep.overall->witness)}},
                     nullptr});
  return items;
}

}  // namespace detail

inline VerificationReport run_suite(const std::string& suite, const CorpusSpec& spec, const VerifyOptions& opt = {}) {
  using Runner = std::vector<ReportItem> (*)(const std::vector<CorpusGroup>&, const VerifyOptions&);
  static const std::map<std::string, Runner> runners{
      {"thmA", detail::suite_theorem_a},         {"thmB", detail::suite_theorem_b},
      {"thmC", detail::suite_theorem_c},         {"thmD", detail::suite_theorem_d},
      {"monotonicity", detail::suite_monotonicity}, {"coatoms", detail::suite_coatoms},
      {"tail", detail::suite_tail},              {"counterexamples", detail::suite_counterexamples},
      {"bounds", detail::suite_bounds},          {"alpha", detail::suite_alpha}};
  const auto it = runners.find(suite);
  if (it == runners.end()) throw Error(ErrorCode::Usage, "unknown suite '" + suite + "'");

  using Clock = std::chrono::steady_clock;
  VerificationReport rep;
  rep.suite = suite;
  rep.corpus_digest = corpus_digest(spec);
  const auto t0 = Clock::now();
  const auto corpus = materialize(spec);
  const auto t1 = Clock::now();
  rep.items = it->second(corpus, opt);
  const auto t2 = Clock::now();
  rep.timings_ms["enumerate"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
  rep.timings_ms["check"] = std::chrono::duration<double, std::milli>(t2 - t1).count();
  return rep;
}

inline nlohmann::json report_json(const VerificationReport& rep, bool timings = true) {
  nlohmann::json items = nlohmann::json::array();
  std::int64_t failed = 0;
  for (const auto& item : rep.items) {
    nlohmann::json j = {{"group", item.group},
                        {"status", item.ok ? (item.vacuous ? "vacuous" : "pass") : "fail"},
                        {"checked", item.checked},
                        {"details", item.details}};
    if (item.J) j["J"] = item.J->to_list();
    if (!item.witness.is_null()) j["witness"] = item.witness;
    if (!item.ok) ++failed;
    items.push_back(std::move(j));
  }
  nlohmann::json out = {{"schema", "v1"},
                        {"suite", rep.suite},
                        {"corpus_digest", rep.corpus_digest},
                        {"status", rep.ok() ? "pass" : "fail"},
                        {"exit_code", rep.exit_code()},
                        {"failed_items", failed},
                        {"items", std::move(items)}};
  if (timings) out["timings_ms"] = rep.timings_ms;
  return out;
}

inline std::string report_tsv(const VerificationReport& rep) {
  std::ostringstream os;
  os << "suite\tgroup\tJ\tstatus\tchecked\tdetails\twitness\n";
  for (const auto& item : rep.items) {
    std::string J;
    if (item.J) {
      const auto list = item.J->to_list();
      for (std::size_t i = 0; i < list.size(); ++i) J += (i ? "," : "") + std::to_string(list[i]);
    }
    os << rep.suite << '\t' << item.group << '\t' << J << '\t' << (item.ok ? (item.vacuous ? "vacuous" : "pass") : "fail")
       << '\t' << item.checked << '\t' << item.details.dump() << '\t' << (item.witness.is_null() ? "" : item.witness.dump())
       << '\n';
  }
  return os.str();
}

}  // namespace coxeter
