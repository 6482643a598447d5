// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "coxeter/verify.hpp"
#include "oracles.hpp"

using namespace coxeter;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;
};

int failures = 0;

void criterion(int n, const std::string& label, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("error: ") + e.what()};
  }
  const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (!out.ok) ++failures;
  std::cout << (out.ok ? "PASS" : "FAIL") << " [" << n << "] " << label << " (" << static_cast<long>(ms) << " ms)";
  if (!out.note.empty()) std::cout << " -- " << out.note;
  std::cout << std::endl;
}

CorpusSpec spec_of(const std::string& text) { return parse_corpus(nlohmann::json::parse(text)); }

std::string failed_groups(const VerificationReport& rep) {
  std::string out;
  for (const auto& item : rep.items)
    if (!item.ok) out += (out.empty() ? "" : ", ") + item.group;
  return out;
}

Outcome suite_outcome(const VerificationReport& rep) {
  std::int64_t checked = 0;
  for (const auto& item : rep.items) checked += item.checked;
  if (!rep.ok()) return {false, "violations in " + failed_groups(rep)};
  return {true, std::to_string(rep.items.size()) + " items, " + std::to_string(checked) + " checks"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string seq(const std::vector<std::int64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

}  // namespace

int main() {
  const auto default_spec = load_corpus(COXETER_CORPUS);
  const auto corpus = materialize(default_spec);
  const auto& c2 = [&]() -> const CorpusGroup& {
    for (const auto& cg : corpus)
      if (cg.name() == "C2~") return cg;
    throw Error(ErrorCode::CorpusMissingEntry, "C2~");
  }();

  criterion(1, "lower-interval inequalities over the default corpus (thmA)",
            [&] { return suite_outcome(run_suite("thmA", default_spec)); });

  criterion(2, "C2~ Poincare head is 1,3,5,8", [&] {
    const auto& g = *c2.group;
    std::vector<std::int64_t> head;
    for (int l = 0; l < 4; ++l) head.push_back(g.level_end(l) - g.level_begin(l));
    return Outcome{head == std::vector<std::int64_t>{1, 3, 5, 8}, seq(head)};
  });

  criterion(3, "C2~ element above every length-3 element fails the M-sequence test", [&] {
    const auto res = find_element_above_level(*c2.group, 3);
    if (!res.found) return Outcome{false, "no such element within the ball"};
    const std::vector<std::int64_t> head(res.f_vector.begin(), res.f_vector.begin() + std::min<std::size_t>(4, res.f_vector.size()));
    const bool ok = head == std::vector<std::int64_t>{1, 3, 5, 8} && !res.m_sequence.ok &&
                    res.m_sequence.first_failure_k == 3 && res.m_sequence.boundary == 6;
    return Outcome{ok, "u=" + format_word(res.u) + " f=" + seq(res.f_vector) + " boundary at k=3: " +
                           std::to_string(res.m_sequence.boundary)};
  });

  criterion(4, "B4 has x with [x,w0] series starting 1,4,11", [&] {
    for (const auto& cg : corpus) {
      if (cg.name() != "B4") continue;
      const auto rel = find_relative_series(*cg.group, {1, 4, 11});
      if (rel.witnesses.empty()) return Outcome{false, "no witness among " + std::to_string(rel.candidates)};
      return Outcome{true, std::to_string(rel.witnesses.size()) + " witnesses, first x=" + format_word(rel.witnesses[0]) +
                               " series " + seq(rel.witness_series[0])};
    }
    return Outcome{false, "B4 missing from corpus"};
  });

  criterion(5, "disjoint chain certificates match f_i (thmB)", [&] {
    const auto spec = spec_of(R"({"entries": [
      {"type": "A2", "J": "all"}, {"type": "A3", "J": "all"}, {"type": "B2", "J": "all"},
      {"type": "B3", "J": "empty"}, {"type": "B4", "J": "empty"}]})");
    return suite_outcome(run_suite("thmB", spec));
  });

  criterion(6, "KL recursion agrees with the R-polynomial oracle", [&] {
    std::int64_t pairs = 0;
    auto compare = [&](const std::string& name, const std::vector<int>& ws) -> std::optional<std::string> {
      const auto g = std::make_shared<const EnumeratedGroup>(build_system(name));
      KLTable table(g);
      oracle::KLOracle ref(*g);
      for (int w : ws) {
        const auto column = ref.column(w);
        for (int x = 0; x < g->size(); ++x) {
          if (!g->leq(x, w)) continue;
          ++pairs;
          if (table.polynomial(x, w) != column[x])
            return name + " x=" + format_word(g->word(x)) + " w=" + format_word(g->word(w));
        }
      }
      return std::nullopt;
    };
    for (const std::string name : {"A2", "B2", "A3"}) {
      std::vector<int> all(build_system(name)->order().value());
      std::iota(all.begin(), all.end(), 0);
      if (auto bad = compare(name, all)) return Outcome{false, *bad};
    }
    std::mt19937 rng(20240531);
    std::uniform_int_distribution<int> pick(0, 47);
    std::vector<int> sample(200);
    for (auto& w : sample) w = pick(rng);
    if (auto bad = compare("B3", sample)) return Outcome{false, *bad};
    const auto a3 = build_system("A3");
    KLTable t(a3);
    const auto p = kl_polynomial(identity(a3), from_word(a3, {2, 1, 3, 2}), t);
    if (p != Polynomial{1, 1}) return Outcome{false, "P_{e,2132} = " + poly::to_string(p)};
    return Outcome{true, std::to_string(pairs) + " pairs; P_{e,2132} = " + poly::to_string(p)};
  });

  criterion(7, "KL invariants over A3 and B3", [&] {
    std::int64_t pairs = 0;
    for (const std::string name : {"A3", "B3"}) {
      const auto g = std::make_shared<const EnumeratedGroup>(build_system(name));
      KLTable table(g);
      for (int w = 0; w < g->size(); ++w) {
        const auto where = name + " w=" + format_word(g->word(w));
        for (int x = 0; x < g->size(); ++x) {
          if (!g->leq(x, w)) continue;
          ++pairs;
          const auto& p = table.polynomial(x, w);
          if (p.empty() || p[0] != 1) return Outcome{false, "constant term at " + where};
          if (x != w && poly::degree(p) > (g->length(w) - g->length(x) - 1) / 2) return Outcome{false, "degree at " + where};
          for (auto c : p)
            if (c < 0) return Outcome{false, "negative coefficient at " + where};
        }
        // P_{e,w} = 1 + beta_0 + beta_1 q + ..., so beta_0 is the constant term minus one.
        if (table.polynomial(0, w)[0] - 1 != 0) return Outcome{false, "beta_0 at " + where};
        if (static_cast<int>(beta_vector(w, table).size()) != std::max(0, kl_top_degree(g->length(w))))
          return Outcome{false, "beta length at " + where};
        const auto f = fw_polynomial(w, table).coefficients;
        if (!std::equal(f.begin(), f.end(), f.rbegin())) return Outcome{false, "F_w symmetry at " + where};
        if (!check_monotonicity(w, table).ok) return Outcome{false, "monotonicity at " + where};
      }
    }
    return Outcome{true, std::to_string(pairs) + " pairs"};
  });

  criterion(8, "KL coefficients versus f-vector symmetry (thmC)", [&] {
    return suite_outcome(run_suite("thmC", spec_of(R"({"entries": [{"type": "A3"}, {"type": "B3"}]})")));
  });

  criterion(9, "f-vectors and difference vectors are M-sequences (thmD)", [&] {
    return suite_outcome(run_suite("thmD", spec_of(R"({"entries": [
      {"type": "A2"}, {"type": "A3"}, {"type": "A4"}, {"type": "B2"}, {"type": "B3"},
      {"type": "B4"}, {"type": "D4"}, {"type": "G2"}]})")));
  });

  criterion(10, "bound values Q, N_k and atom maxima", [&] {
    std::vector<std::string> bad;
    std::ostringstream note;
    for (int s = 1; s <= 4; ++s)
      for (const auto& t : irreducible_types(s)) {
        const EnumeratedGroup g(build_system(t.name));
        if (g.length(g.size() - 1) != t.longest_length) bad.push_back("l(w0) of " + t.name);
      }
    if (q_of_rank(2) != 6) bad.push_back("Q(2)");
    if (q_of_rank(9) != 81) bad.push_back("Q(9)=" + std::to_string(q_of_rank(9)) + " (E8xA1), expected 81");
    const auto table = BoundTable::standard();
    if (n_k(1, table) != 1 || n_k(2, table) != 3 || n_k(3, table) != 12) bad.push_back("N_k");
    const std::int64_t ceiling[] = {0, 1, 2, 4, 8};
    for (int r = 2; r <= 4; ++r) {
      const auto res = search_max_atoms(corpus, r);
      note << "M(" << r << ") finite=" << res.finite.max_found << " in " << res.finite.group;
      if (res.infinite.max_found) note << ", truncated affine=" << res.infinite.max_found << " in " << res.infinite.group;
      note << "; ";
      if (res.finite.max_found > ceiling[r]) bad.push_back("M(" + std::to_string(r) + ") exceeds ceiling");
      if (r == 2 && res.finite.max_found != 2) bad.push_back("M(2) != 2");
    }
    std::string msg;
    for (const auto& b : bad) msg += b + "; ";
    return Outcome{bad.empty(), msg + note.str()};
  });

  criterion(11, "elements above Q(j) have more than j coatoms", [&] { return suite_outcome(run_suite("coatoms", default_spec)); });

  criterion(12, "tail decrease above N_k", [&] {
    const auto rep = run_suite("tail", default_spec);
    auto out = suite_outcome(rep);
    int vacuous = 0;
    std::ostringstream thresholds;
    for (const auto& item : rep.items) {
      vacuous += item.vacuous;
      if (item.details.contains("empirical_threshold"))
        thresholds << ' ' << item.group << ":k=" << item.details.value("k", 0) << "->" << item.details["empirical_threshold"];
    }
    out.note += ", " + std::to_string(vacuous) + " vacuous; empirical thresholds" + thresholds.str();
    return out;
  });

  criterion(13, "KL cache round trip and job-count independent reports", [&] {
    const auto dir = fs::temp_directory_path() / ("coxeter_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    KLTable table(build_system("A3"));
    for (int w = 0; w < table.group().size(); ++w)
      for (int x = 0; x < table.group().size(); ++x) table.polynomial(x, w);
    save_cache(table, (dir / "A3.klcache").string());
    auto loaded = load_cache((dir / "A3.klcache").string(), build_system("A3"));
    if (loaded.entries() != table.entries()) return Outcome{false, "cache entries differ"};
    if (serialize_cache(loaded) != slurp(dir / "A3.klcache")) return Outcome{false, "cache bytes differ"};
    for (int jobs : {1, 8}) {
      const std::string cmd = std::string(COXETER_CLI) + " verify thmA --corpus " + COXETER_CORPUS + " --no-timings --jobs " +
                              std::to_string(jobs) + " --out " + (dir / ("jobs" + std::to_string(jobs) + ".json")).string();
      const int status = std::system(cmd.c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return Outcome{false, "cli exit status for --jobs " + std::to_string(jobs)};
    }
    const auto one = slurp(dir / "jobs1.json"), eight = slurp(dir / "jobs8.json");
    fs::remove_all(dir);
    if (one.empty() || one != eight) return Outcome{false, "reports differ"};
    return Outcome{true, std::to_string(table.entries().size()) + " cached entries; reports " + std::to_string(one.size()) + " bytes"};
  });

  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failures ? 1 : 0;
}
