// coxeter: command-line front end.
//
// Exit codes: 0 success, 1 a verified property failed, 2 bad input or usage.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "coxeter/bounds.hpp"
#include "coxeter/chains.hpp"
#include "coxeter/kl.hpp"
#include "coxeter/kl_cache.hpp"
#include "coxeter/msequence.hpp"
#include "coxeter/verify.hpp"

using namespace coxeter;
using nlohmann::json;

namespace {

SystemPtr load_system(const std::string& type) {
  if (type.size() > 5 && type.substr(type.size() - 5) == ".json") {
    std::ifstream in(type);
    if (!in) throw Error(ErrorCode::Usage, "cannot open matrix file '" + type + "'");
    json doc;
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::FormatError, e.what());
    }
    if (!doc.contains("name")) doc["name"] = std::filesystem::path(type).stem().string();
    return build_system_from_json(doc);
  }
  return build_system(type);
}

GeneratorSet parse_subset(const std::string& text, int rank) {
  const auto word = parse_word(text, rank);
  return GeneratorSet::from_list(word);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Usage, "cannot write '" + out_path + "'");
  out << text;
}

std::string join(const std::vector<std::int64_t>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + std::to_string(v[i]);
  return s;
}

json matrix_json(const std::vector<std::int64_t>& m, int n) {
  json rows = json::array();
  for (int i = 0; i < n; ++i) rows.push_back(std::vector<std::int64_t>(m.begin() + i * n, m.begin() + (i + 1) * n));
  return rows;
}

int cmd_group(const std::string& type, int max_length, const std::string& format) {
  const auto sys = load_system(type);
  if (!sys->is_finite() && max_length < 0)
    throw Error(ErrorCode::Usage, sys->name() + " is infinite; pass --max-length");
  const int radius = max_length < 0 ? *sys->longest_length() : max_length;
  std::vector<std::int64_t> poincare;
  for (const auto& level : ball(sys, radius)) poincare.push_back(static_cast<std::int64_t>(level.size()));
  if (format == "tsv") {
    std::cout << "type\trank\tfinite\torder\tlongest_length\tpoincare\n"
              << sys->name() << '\t' << sys->rank() << '\t' << (sys->is_finite() ? "true" : "false") << '\t'
              << (sys->is_finite() ? std::to_string(*sys->order()) : "") << '\t'
              << (sys->is_finite() ? std::to_string(*sys->longest_length()) : "") << '\t' << join(poincare, ',') << '\n';
    return 0;
  }
  std::vector<std::int64_t> coxeter(sys->coxeter_matrix().begin(), sys->coxeter_matrix().end());
  json out = {{"schema", "v1"},
              {"type", sys->name()},
              {"rank", sys->rank()},
              {"finite", sys->is_finite()},
              {"coxeter_matrix", matrix_json(coxeter, sys->rank())},
              {"cartan_matrix", matrix_json(sys->cartan_matrix(), sys->rank())},
              {"poincare", poincare}};
  if (sys->is_finite()) {
    out["order"] = *sys->order();
    out["longest_length"] = *sys->longest_length();
  } else {
    out["max_length"] = radius;
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_fvector(const std::string& type, const std::string& w_text, const std::string& j_text, const std::string& x_text,
                const std::string& format) {
  const auto sys = load_system(type);
  const auto w = from_word(sys, parse_word(w_text, sys->rank()));
  const auto J = parse_subset(j_text, sys->rank());
  BruhatOrder order(sys);
  FVector f;
  json out = {{"schema", "v1"}, {"type", sys->name()}, {"w", to_word_string(w)}};
  if (!x_text.empty()) {
    const auto x = from_word(sys, parse_word(x_text == "e" ? "" : x_text, sys->rank()));
    f = order.relative_f_vector(x, w);
    out["x"] = to_word_string(x);
    out["kind"] = "relative-interval";
  } else {
    f = order.f_vector(w, J);
    out["J"] = J.to_list();
    out["kind"] = "lower-quotient";
  }
  if (format == "tsv") {
    std::cout << join(f.counts, '\t') << '\n';
    return 0;
  }
  out["fvector"] = f.counts;
  std::cout << out.dump() << '\n';
  return 0;
}

int cmd_kl(const std::string& type, const std::string& x_text, const std::string& w_text, const std::string& cache,
           int max_length) {
  const auto sys = load_system(type);
  const auto w = from_word(sys, parse_word(w_text, sys->rank()));
  const auto x = from_word(sys, parse_word(x_text == "e" ? "" : x_text, sys->rank()));
  int radius = max_length;
  if (!sys->is_finite() && radius < 0) radius = w.length();
  KLTable table(sys, radius);
  if (!cache.empty() && std::filesystem::exists(cache)) load_cache(cache, table);
  const auto p = kl_polynomial(x, w, table);
  const auto f = fw_polynomial(w, table);
  json out = {{"schema", "v1"},
              {"type", sys->name()},
              {"x", to_word_string(x)},
              {"w", to_word_string(w)},
              {"P", p},
              {"P_text", poly::to_string(p)},
              {"mu", mu(x, w, table)},
              {"beta", beta_vector(w, table)},
              {"F_w", f.coefficients}};
  if (!cache.empty()) save_cache(table, cache);
  std::cout << out.dump() << '\n';
  return 0;
}

int cmd_chains(const std::string& type, const std::string& w_text, const std::string& j_text, int i) {
  const auto sys = load_system(type);
  const auto w = from_word(sys, parse_word(w_text, sys->rank()));
  const auto J = parse_subset(j_text, sys->rank());
  BruhatOrder order(sys);
  const auto cert = max_disjoint_chains(order, w, J, i);
  const auto f = order.f_vector(w, J).counts;
  auto out = certificate_json(cert, w, J);
  out["flow_value"] = cert.flow_value;
  out["f_i"] = f[i];
  const auto defect = validate_certificate(cert, order, w, J, w.length() - i);
  out["valid"] = !defect;
  if (defect) out["defect"] = *defect;
  std::cout << out.dump() << '\n';
  return cert.flow_value == f[i] && !defect ? 0 : 1;
}

int cmd_msequence(const std::string& seq_text) {
  std::vector<std::int64_t> seq;
  std::istringstream in(seq_text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t used = 0;
      seq.push_back(std::stoll(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Usage, "bad sequence entry '" + tok + "'");
    }
  }
  const auto v = is_m_sequence(seq);
  json out = {{"schema", "v1"}, {"sequence", seq}, {"m_sequence", v.ok}};
  if (!v.ok) {
    out["failure_k"] = *v.first_failure_k;
    out["boundary"] = v.boundary;
  }
  std::cout << out.dump() << '\n';
  return 0;
}

int cmd_bounds(int max_rank) {
  const auto table = BoundTable::standard(max_rank);
  json q = json::object(), qi = json::object(), n = json::object();
  for (int s = 0; s <= max_rank; ++s) {
    q[std::to_string(s)] = table.q(s);
    qi[std::to_string(s)] = q_irreducible(s);
  }
  for (const auto& [k, m] : table.mtilde) n[std::to_string(k)] = n_k(k, table);
  std::cout << json{{"schema", "v1"}, {"Q", q}, {"Q_irreducible", qi}, {"N", n}}.dump() << '\n';
  return 0;
}

int cmd_verify(const std::string& suite, const std::string& corpus_path, int jobs, const std::string& cache,
               const std::string& format, const std::string& out_path, bool no_timings) {
  const auto spec = corpus_path.empty() ? parse_corpus(default_corpus_json()) : load_corpus(corpus_path);
  VerifyOptions opt;
  opt.jobs = jobs;
  opt.cache_dir = cache;
  opt.timings = !no_timings;
  const auto rep = run_suite(suite, spec, opt);
  emit(format == "tsv" ? report_tsv(rep) : report_json(rep, opt.timings).dump(2) + "\n", out_path);
  return rep.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bruhat interval combinatorics for crystallographic Coxeter groups"};
  app.require_subcommand(1);

  std::string type, w_text, j_text, x_text, format = "json", cache, corpus, out_path, suite, seq;
  int max_length = -1, jobs = 1, rank_i = 0, max_rank = 12;
  bool no_timings = false;

  auto* group = app.add_subcommand("group", "Summarize a Coxeter system");
  group->add_option("type", type, "Preset (A3, C2~, A1xB2) or a JSON matrix file")->required();
  group->add_option("--max-length", max_length, "Truncation length for the Poincare series");
  group->add_option("--format", format)->check(CLI::IsMember({"json", "tsv"}));

  auto* fvec = app.add_subcommand("fvector", "f-vector of [e,w]^J, or of [x,w] with --x");
  fvec->add_option("type", type)->required();
  fvec->add_option("--w", w_text, "Word, e.g. 1,2,1")->required();
  fvec->add_option("--J", j_text, "Generator subset, e.g. 2 or 1,3");
  fvec->add_option("--x", x_text, "Bottom element for a relative interval");
  fvec->add_option("--format", format)->check(CLI::IsMember({"json", "tsv"}));

  auto* kl = app.add_subcommand("kl", "Kazhdan-Lusztig polynomial P_{x,w}");
  kl->add_option("type", type)->required();
  kl->add_option("--w", w_text)->required();
  kl->add_option("--x", x_text, "Defaults to the identity");
  kl->add_option("--cache", cache, "KL cache file, read if present and rewritten");
  kl->add_option("--max-length", max_length, "Ball radius for infinite systems");

  auto* chains = app.add_subcommand("chains", "Disjoint chains from rank i to l(w)-i");
  chains->add_option("type", type)->required();
  chains->add_option("--w", w_text)->required();
  chains->add_option("--J", j_text);
  chains->add_option("--i", rank_i)->required();

  auto* mseq = app.add_subcommand("msequence", "Macaulay M-sequence test");
  mseq->add_option("sequence", seq, "Comma-separated, e.g. 1,3,5,8")->required();

  auto* bounds = app.add_subcommand("bounds", "Q(s), irreducible maxima and N_k");
  bounds->add_option("--max-rank", max_rank)->check(CLI::Range(0, 64));

  auto* verify = app.add_subcommand("verify", "Run a verification suite over a corpus");
  verify->add_option("suite", suite)->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--corpus", corpus, "Corpus JSON file (default: built-in corpus)");
  verify->add_option("--jobs", jobs)->check(CLI::Range(1, 256));
  verify->add_option("--cache", cache, "Directory of per-group KL cache files");
  verify->add_option("--format", format)->check(CLI::IsMember({"json", "tsv"}));
  verify->add_option("--out", out_path, "Write the report here instead of stdout");
  verify->add_flag("--no-timings", no_timings, "Omit wall-clock timings from the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*group) return cmd_group(type, max_length, format);
    if (*fvec) return cmd_fvector(type, w_text, j_text, x_text, format);
    if (*kl) return cmd_kl(type, x_text, w_text, cache, max_length);
    if (*chains) return cmd_chains(type, w_text, j_text, rank_i);
    if (*mseq) return cmd_msequence(seq);
    if (*bounds) return cmd_bounds(max_rank);
    if (*verify) return cmd_verify(suite, corpus, jobs, cache, format, out_path, no_timings);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
