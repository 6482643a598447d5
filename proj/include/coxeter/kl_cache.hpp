#pragma once

// Text persistence for KL tables.
//
//   #klcache v1 system=<sha256 of the canonical Cartan matrix>
//   x=<word> w=<word> p=<c0,c1,...>
//
// Words are ShortLex reduced words; entry lines are sorted lexicographically.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/sha.h>

#include "coxeter/kl.hpp"

namespace coxeter {

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest);
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned char c : digest) os << std::setw(2) << static_cast<int>(c);
  return os.str();
}

inline std::string system_digest(const CoxeterSystem& sys) { return sha256_hex(sys.canonical_cartan()); }

inline std::string format_polynomial_coefficients(const Polynomial& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(p[i]);
  }
  return out;
}

inline std::string serialize_cache(const KLTable& table) {
  const auto& g = table.group();
  std::vector<std::string> lines;
  for (const auto& [x, w, p] : table.entries())
    lines.push_back("x=" + format_word(g.word(x)) + " w=" + format_word(g.word(w)) + " p=" + format_polynomial_coefficients(p));
  std::sort(lines.begin(), lines.end());
  std::string out = "#klcache v1 system=" + system_digest(*table.system()) + "\n";
  for (const auto& line : lines) out += line + "\n";
  return out;
}

inline void save_cache(const KLTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Usage, "cannot write cache file '" + path + "'");
  out << serialize_cache(table);
  if (!out) throw Error(ErrorCode::Usage, "failed writing cache file '" + path + "'");
}

namespace detail {

inline Error cache_format_error(int line, const std::string& what) {
  return Error(ErrorCode::FormatError, "cache line " + std::to_string(line) + ": " + what);
}

inline std::string take_field(const std::string& token, const std::string& key, int line) {
  if (token.rfind(key + "=", 0) != 0) throw cache_format_error(line, "expected " + key + "=...");
  return token.substr(key.size() + 1);
}

inline int cache_element(const KLTable& table, const std::string& text, int line) {
  const auto& g = table.group();
  Word word;
  try {
    word = parse_word(text, g.system()->rank());
  } catch (const Error& e) {
    throw cache_format_error(line, e.what());
  }
  const auto u = from_word(g.system(), word);
  if (u.length() != static_cast<int>(word.size()) || reduced_word(u) != word)
    throw cache_format_error(line, "word '" + text + "' is not in ShortLex normal form");
  const auto idx = g.find(u);
  if (!idx) throw cache_format_error(line, "element '" + text + "' lies outside the table's ball");
  return *idx;
}

}  // namespace detail

/// Parses cache text into `table`, which must be bound to the matching system.
inline void load_cache_text(const std::string& text, KLTable& table) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  if (!std::getline(in, line)) throw detail::cache_format_error(1, "missing header");
  ++number;
  const std::string prefix = "#klcache v1 system=";
  if (line.rfind(prefix, 0) != 0) throw detail::cache_format_error(1, "bad header");
  const auto digest = line.substr(prefix.size());
  const auto expected = system_digest(*table.system());
  if (digest != expected)
    throw Error(ErrorCode::DigestMismatch, "cache digest " + digest + " does not match system " + table.system()->name() + " (" + expected + ")");
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string xs, ws, ps, extra;
    if (!(fields >> xs >> ws >> ps) || (fields >> extra)) throw detail::cache_format_error(number, "expected three fields");
    const int x = detail::cache_element(table, detail::take_field(xs, "x", number), number);
    const int w = detail::cache_element(table, detail::take_field(ws, "w", number), number);
    Polynomial p;
    std::istringstream coeffs(detail::take_field(ps, "p", number));
    std::string c;
    while (std::getline(coeffs, c, ',')) {
      try {
        std::size_t used = 0;
        p.push_back(std::stoll(c, &used));
        if (used != c.size()) throw std::invalid_argument(c);
      } catch (const std::exception&) {
        throw detail::cache_format_error(number, "bad coefficient '" + c + "'");
      }
    }
    if (!table.group().leq(x, w)) throw detail::cache_format_error(number, "x is not below w");
    table.insert(x, w, std::move(p));
  }
}

inline void load_cache(const std::string& path, KLTable& table) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Usage, "cannot open cache file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  load_cache_text(buf.str(), table);
}

inline KLTable load_cache(const std::string& path, const SystemPtr& sys, int radius = -1) {
  KLTable table(sys, radius);
  load_cache(path, table);
  return table;
}

}  // namespace coxeter
