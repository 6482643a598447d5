#pragma once

// Crystallographic Coxeter systems realized by generalized Cartan matrices.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coxeter/error.hpp"

namespace coxeter {

/// Coxeter matrix entry used for m_ij = infinity.
inline constexpr int kInfinity = 0;

/// Generator indices are 1-based throughout the public API.
using Generator = int;

/// Subset of generators, stored as a bitmask (bit s-1 for generator s).
class GeneratorSet {
 public:
  constexpr GeneratorSet() = default;
  constexpr explicit GeneratorSet(std::uint64_t mask) : mask_(mask) {}
  GeneratorSet(std::initializer_list<Generator> gens) {
    for (Generator s : gens) insert(s);
  }
  static GeneratorSet from_list(const std::vector<Generator>& gens) {
    GeneratorSet out;
    for (Generator s : gens) out.insert(s);
    return out;
  }
  static constexpr GeneratorSet all(int rank) {
    return GeneratorSet(rank >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << rank) - 1));
  }

  void insert(Generator s) { mask_ |= std::uint64_t{1} << (s - 1); }
  constexpr bool contains(Generator s) const { return (mask_ >> (s - 1)) & 1U; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr std::uint64_t mask() const { return mask_; }

  std::vector<Generator> to_list() const {
    std::vector<Generator> out;
    for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m) + 1);
    return out;
  }
  /// Smallest member, or 0 when empty.
  Generator first() const { return mask_ == 0 ? 0 : std::countr_zero(mask_) + 1; }

  friend constexpr bool operator==(GeneratorSet, GeneratorSet) = default;

 private:
  std::uint64_t mask_ = 0;
};

/// Square integer matrix, row-major.
using IntMatrix = std::vector<std::int64_t>;

/// Finite irreducible component of a Coxeter graph, identified by type.
struct FiniteComponent {
  std::string type;  // e.g. "B3", "E6"
  int rank = 0;
  std::int64_t order = 0;
  int positive_roots = 0;
};

class CoxeterSystem {
 public:
  int rank() const { return rank_; }
  const std::string& name() const { return name_; }
  /// m_ij with kInfinity (0) standing for infinity.
  int coxeter_entry(Generator s, Generator t) const { return coxeter_[index(s, t)]; }
  /// A_st = <alpha_s^vee, alpha_t>, so s(alpha_t) = alpha_t - A_st alpha_s.
  std::int64_t cartan_entry(Generator s, Generator t) const { return cartan_[index(s, t)]; }
  const std::vector<int>& coxeter_matrix() const { return coxeter_; }
  const IntMatrix& cartan_matrix() const { return cartan_; }
  std::vector<Generator> generator_labels() const {
    std::vector<Generator> out(rank_);
    for (int i = 0; i < rank_; ++i) out[i] = i + 1;
    return out;
  }
  bool is_finite() const { return finite_; }
  std::optional<std::int64_t> order() const { return order_; }
  std::optional<int> longest_length() const { return longest_length_; }
  /// Irreducible finite components; empty for infinite systems.
  const std::vector<FiniteComponent>& components() const { return components_; }

  /// Canonical serialization of the Cartan matrix: rows joined by ';',
  /// entries by ','. Two systems are interchangeable iff these agree.
  std::string canonical_cartan() const {
    std::ostringstream os;
    for (int i = 0; i < rank_; ++i) {
      if (i) os << ';';
      for (int j = 0; j < rank_; ++j) {
        if (j) os << ',';
        os << cartan_[i * rank_ + j];
      }
    }
    return os.str();
  }

  bool same_as(const CoxeterSystem& other) const {
    return this == &other || (rank_ == other.rank_ && cartan_ == other.cartan_);
  }

 private:
  friend std::shared_ptr<const CoxeterSystem> make_system(std::string, int, IntMatrix);

  int index(Generator s, Generator t) const { return (s - 1) * rank_ + (t - 1); }

  int rank_ = 0;
  std::string name_;
  std::vector<int> coxeter_;
  IntMatrix cartan_;
  bool finite_ = false;
  std::optional<std::int64_t> order_;
  std::optional<int> longest_length_;
  std::vector<FiniteComponent> components_;
};

using SystemPtr = std::shared_ptr<const CoxeterSystem>;

namespace detail {

inline int coxeter_from_product(std::int64_t product) {
  switch (product) {
    case 0: return 2;
    case 1: return 3;
    case 2: return 4;
    case 3: return 6;
    default: return kInfinity;
  }
}

inline double cosine_entry(int m) {
  if (m == 1) return 1.0;
  return -std::cos(M_PI / m);
}

// Positive definiteness of the cosine form restricted to `nodes`, by Cholesky.
inline bool cosine_form_positive_definite(const std::vector<int>& coxeter, int rank,
                                          const std::vector<int>& nodes) {
  const auto n = nodes.size();
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      int m = coxeter[nodes[i] * rank + nodes[j]];
      if (m == kInfinity) return false;
      a[i * n + j] = cosine_entry(m);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (d <= 1e-9) return false;
    const double root = std::sqrt(d);
    a[j * n + j] = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = v / root;
    }
  }
  return true;
}

inline std::int64_t factorial(int n) {
  std::int64_t r = 1;
  for (int i = 2; i <= n; ++i) r = checked_mul(r, i);
  return r;
}

// Identifies a connected finite crystallographic Coxeter graph by its shape.
// Only called after positive definiteness has been established, so the
// classification guarantees one of the branches below applies.
inline FiniteComponent identify_component(const std::vector<int>& coxeter, int rank,
                                          const std::vector<int>& nodes) {
  const int n = static_cast<int>(nodes.size());
  auto m = [&](int i, int j) { return coxeter[nodes[i] * rank + nodes[j]]; };
  if (n == 1) return {"A1", 1, 2, 1};
  int bond4 = 0, bond6 = 0, branch = -1;
  std::vector<int> degree(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || m(i, j) == 2) continue;
      ++degree[i];
      if (i < j && m(i, j) == 4) ++bond4;
      if (i < j && m(i, j) == 6) ++bond6;
    }
    if (degree[i] >= 3) branch = i;
  }
  if (bond6 > 0) return {"G2", 2, 12, 6};
  if (bond4 > 0) {
    if (n == 4) {
      // F4 has its double bond between the two degree-2 nodes.
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (m(i, j) == 4 && degree[i] == 2 && degree[j] == 2) return {"F4", 4, 1152, 24};
    }
    return {"B" + std::to_string(n), n, checked_mul(std::int64_t{1} << n, factorial(n)), n * n};
  }
  if (branch < 0) {
    return {"A" + std::to_string(n), n, factorial(n + 1), n * (n + 1) / 2};
  }
  // Arm lengths from the branch node.
  std::vector<int> arms;
  for (int start = 0; start < n; ++start) {
    if (start == branch || m(branch, start) == 2) continue;
    int len = 1, prev = branch, cur = start;
    for (;;) {
      int next = -1;
      for (int k = 0; k < n; ++k)
        if (k != cur && k != prev && m(cur, k) != 2) next = k;
      if (next < 0) break;
      prev = cur;
      cur = next;
      ++len;
    }
    arms.push_back(len);
  }
  std::sort(arms.begin(), arms.end());
  if (arms[0] == 1 && arms[1] == 1) {
    return {"D" + std::to_string(n), n, checked_mul(std::int64_t{1} << (n - 1), factorial(n)), n * n - n};
  }
  if (n == 6) return {"E6", 6, 51840, 36};
  if (n == 7) return {"E7", 7, 2903040, 63};
  return {"E8", 8, 696729600, 120};
}

inline std::vector<std::vector<int>> connected_components(const std::vector<int>& coxeter, int rank) {
  std::vector<int> seen(rank, 0);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < rank; ++s) {
    if (seen[s]) continue;
    std::vector<int> comp{s}, stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < rank; ++v) {
        if (!seen[v] && v != u && coxeter[u * rank + v] != 2) {
          seen[v] = 1;
          comp.push_back(v);
          stack.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace detail

/// Validates a generalized Cartan matrix and wraps it into a system.
inline SystemPtr make_system(std::string name, int rank, IntMatrix cartan) {
  if (rank <= 0 || static_cast<int>(cartan.size()) != rank * rank)
    throw Error(ErrorCode::InvalidCartanMatrix, "matrix must be square and non-empty");
  if (rank > 64) throw Error(ErrorCode::InvalidCartanMatrix, "rank above 64 is not supported");
  auto sys = std::make_shared<CoxeterSystem>();
  sys->rank_ = rank;
  sys->name_ = std::move(name);
  sys->coxeter_.assign(rank * rank, 1);
  for (int i = 0; i < rank; ++i) {
    if (cartan[i * rank + i] != 2)
      throw Error(ErrorCode::InvalidCartanMatrix, "diagonal entry A_" + std::to_string(i + 1) + std::to_string(i + 1) + " != 2");
    for (int j = 0; j < rank; ++j) {
      if (i == j) continue;
      const auto a = cartan[i * rank + j], b = cartan[j * rank + i];
      if (a > 0)
        throw Error(ErrorCode::InvalidCartanMatrix, "off-diagonal entry A_" + std::to_string(i + 1) + "," + std::to_string(j + 1) + " > 0");
      if ((a == 0) != (b == 0))
        throw Error(ErrorCode::InvalidCartanMatrix, "A_ij = 0 but A_ji != 0 at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      sys->coxeter_[i * rank + j] = detail::coxeter_from_product(detail::checked_mul(a, b));
    }
  }
  sys->cartan_ = std::move(cartan);

  std::vector<FiniteComponent> comps;
  bool finite = true;
  for (const auto& nodes : detail::connected_components(sys->coxeter_, rank)) {
    if (!detail::cosine_form_positive_definite(sys->coxeter_, rank, nodes)) {
      finite = false;
      break;
    }
    comps.push_back(detail::identify_component(sys->coxeter_, rank, nodes));
  }
  sys->finite_ = finite;
  if (finite) {
    std::int64_t order = 1;
    int roots = 0;
    for (const auto& c : comps) {
      order = detail::checked_mul(order, c.order);
      roots += c.positive_roots;
    }
    sys->order_ = order;
    sys->longest_length_ = roots;
    sys->components_ = std::move(comps);
  }
  return sys;
}

/// Cartan matrix realizing a crystallographic Coxeter matrix. For m = 4, 6 the
/// long entry goes below the diagonal; m = infinity maps to A_ij = A_ji = -2.
inline IntMatrix cartan_from_coxeter(const std::vector<int>& coxeter, int rank) {
  if (static_cast<int>(coxeter.size()) != rank * rank)
    throw Error(ErrorCode::InvalidCartanMatrix, "Coxeter matrix must be square");
  IntMatrix a(rank * rank, 0);
  for (int i = 0; i < rank; ++i) {
    if (coxeter[i * rank + i] != 1) throw Error(ErrorCode::InvalidCartanMatrix, "m_ii must be 1");
    a[i * rank + i] = 2;
    for (int j = 0; j < rank; ++j) {
      if (i == j) continue;
      const int m = coxeter[i * rank + j];
      if (m != coxeter[j * rank + i]) throw Error(ErrorCode::InvalidCartanMatrix, "Coxeter matrix must be symmetric");
      const bool upper = i < j;
      switch (m) {
        case 2: a[i * rank + j] = 0; break;
        case 3: a[i * rank + j] = -1; break;
        case 4: a[i * rank + j] = upper ? -1 : -2; break;
        case 6: a[i * rank + j] = upper ? -1 : -3; break;
        case kInfinity: a[i * rank + j] = -2; break;
        default:
          throw Error(ErrorCode::NonCrystallographic, "m_" + std::to_string(i + 1) + std::to_string(j + 1) + " = " + std::to_string(m));
      }
    }
  }
  return a;
}

namespace detail {

// Builds a Cartan matrix from bonds (i, j, A_ij, A_ji), 0-based nodes.
struct Bond {
  int i, j;
  std::int64_t a_ij, a_ji;
};

inline IntMatrix cartan_from_bonds(int rank, const std::vector<Bond>& bonds) {
  IntMatrix a(rank * rank, 0);
  for (int i = 0; i < rank; ++i) a[i * rank + i] = 2;
  for (const auto& b : bonds) {
    a[b.i * rank + b.j] = b.a_ij;
    a[b.j * rank + b.i] = b.a_ji;
  }
  return a;
}

// Finite types in Bourbaki numbering, 0-based. Short roots sit at the
// "pointy" end: in B_n alpha_n is short, in C_n alpha_n is long, in F4
// alpha_3, alpha_4 are short, in G2 alpha_1 is short.
inline std::vector<Bond> finite_bonds(char type, int n) {
  std::vector<Bond> bonds;
  auto chain = [&](int upto) {
    for (int i = 0; i + 1 < upto; ++i) bonds.push_back({i, i + 1, -1, -1});
  };
  switch (type) {
    case 'A': chain(n); break;
    case 'B':
      chain(n - 1);
      bonds.push_back({n - 2, n - 1, -1, -2});
      break;
    case 'C':
      chain(n - 1);
      bonds.push_back({n - 2, n - 1, -2, -1});
      break;
    case 'D':
      chain(n - 1);
      bonds.push_back({n - 3, n - 1, -1, -1});
      break;
    case 'E':
      bonds.push_back({0, 2, -1, -1});
      bonds.push_back({1, 3, -1, -1});
      for (int i = 2; i + 1 < n; ++i) bonds.push_back({i, i + 1, -1, -1});
      break;
    case 'F':
      bonds.push_back({0, 1, -1, -1});
      bonds.push_back({1, 2, -1, -2});
      bonds.push_back({2, 3, -1, -1});
      break;
    case 'G': bonds.push_back({0, 1, -3, -1}); break;
    default: break;
  }
  return bonds;
}

inline bool finite_type_supported(char type, int n) {
  switch (type) {
    case 'A': return n >= 1 && n <= 8;
    case 'B':
    case 'C': return n >= 2 && n <= 8;
    case 'D': return n >= 4 && n <= 8;
    case 'E': return n >= 6 && n <= 8;
    case 'F': return n == 4;
    case 'G': return n == 2;
    default: return false;
  }
}

// Affine node is 0; finite node k (Bourbaki) becomes k.
inline std::vector<Bond> affine_bonds(char type, int n) {
  std::vector<Bond> bonds;
  for (auto b : finite_bonds(type, n)) bonds.push_back({b.i + 1, b.j + 1, b.a_ij, b.a_ji});
  switch (type) {
    case 'A':
      if (n == 1) {
        bonds.push_back({0, 1, -2, -2});
      } else {
        bonds.push_back({0, 1, -1, -1});
        bonds.push_back({0, n, -1, -1});
      }
      break;
    case 'B':
    case 'D': bonds.push_back({0, 2, -1, -1}); break;
    case 'C': bonds.push_back({0, 1, -1, -2}); break;
    case 'F': bonds.push_back({0, 1, -1, -1}); break;
    case 'G': bonds.push_back({0, 2, -1, -1}); break;
    default: break;
  }
  return bonds;
}

inline bool affine_type_supported(char type, int n) {
  switch (type) {
    case 'A': return n >= 1 && n <= 8;
    case 'B': return n >= 3 && n <= 8;
    case 'C': return n >= 2 && n <= 8;
    case 'D': return n >= 4 && n <= 8;
    case 'F': return n == 4;
    case 'G': return n == 2;
    default: return false;
  }
}

inline IntMatrix block_diagonal(const std::vector<std::pair<int, IntMatrix>>& blocks, int& rank_out) {
  int rank = 0;
  for (const auto& [r, m] : blocks) rank += r;
  IntMatrix a(rank * rank, 0);
  int offset = 0;
  for (const auto& [r, m] : blocks) {
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) a[(offset + i) * rank + offset + j] = m[i * r + j];
    offset += r;
  }
  rank_out = rank;
  return a;
}

}  // namespace detail

/// Builds a system from a preset name. Accepted forms: finite types "A1".."A8",
/// "B2".."B8", "C2".."C8", "D4".."D8", "E6".."E8", "F4", "G2"; dihedral
/// "I2(m)" for m in {2,3,4,6}; affine types with a trailing '~' ("A2~",
/// "C2~", ...); and products joined by 'x' ("A1xB2").
inline SystemPtr build_system(const std::string& descriptor) {
  static const std::regex noncryst(R"(^(H3|H4|I2\((\d+)\))$)");
  std::vector<std::string> parts;
  {
    std::string cur;
    for (char c : descriptor) {
      if (c == 'x') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(cur);
  }
  static const std::regex preset(R"(^([A-G])(\d+)(~?)$)");
  std::vector<std::pair<int, IntMatrix>> blocks;
  for (const auto& part : parts) {
    std::smatch match;
    if (std::regex_match(part, match, noncryst)) {
      if (match[2].matched) {
        const int m = std::stoi(match[2]);
        if (m == 2) {
          blocks.emplace_back(2, IntMatrix{2, 0, 0, 2});
          continue;
        }
        if (m == 3 || m == 4 || m == 6) {
          const std::int64_t b = m == 3 ? -1 : m == 4 ? -2 : -3;
          blocks.emplace_back(2, IntMatrix{2, b, -1, 2});
          continue;
        }
      }
      throw Error(ErrorCode::NonCrystallographic, "'" + part + "' is not a crystallographic Coxeter group");
    }
    if (!std::regex_match(part, match, preset)) throw Error(ErrorCode::UnsupportedPreset, "'" + part + "'");
    const char type = match[1].str()[0];
    const int n = std::stoi(match[2]);
    const bool affine = match[3].length() > 0;
    if (affine) {
      if (!detail::affine_type_supported(type, n)) throw Error(ErrorCode::UnsupportedPreset, "'" + part + "'");
      blocks.emplace_back(n + 1, detail::cartan_from_bonds(n + 1, detail::affine_bonds(type, n)));
    } else {
      if (!detail::finite_type_supported(type, n)) throw Error(ErrorCode::UnsupportedPreset, "'" + part + "'");
      blocks.emplace_back(n, detail::cartan_from_bonds(n, detail::finite_bonds(type, n)));
    }
  }
  int rank = 0;
  IntMatrix cartan = detail::block_diagonal(blocks, rank);
  return make_system(descriptor, rank, std::move(cartan));
}

/// Accepts {"cartan": [[...]]} or {"coxeter": [[...]]}; in the latter,
/// infinity is written as 0 or "inf".
inline SystemPtr build_system_from_json(const nlohmann::json& doc) {
  auto read_rows = [](const nlohmann::json& rows, auto convert) {
    if (!rows.is_array() || rows.empty()) throw Error(ErrorCode::InvalidCartanMatrix, "matrix must be a non-empty array of rows");
    const int rank = static_cast<int>(rows.size());
    std::vector<std::int64_t> out;
    for (const auto& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != rank)
        throw Error(ErrorCode::InvalidCartanMatrix, "matrix must be square");
      for (const auto& v : row) out.push_back(convert(v));
    }
    return std::make_pair(rank, out);
  };
  if (doc.contains("cartan")) {
    auto [rank, a] = read_rows(doc.at("cartan"), [](const nlohmann::json& v) -> std::int64_t {
      if (!v.is_number_integer()) throw Error(ErrorCode::InvalidCartanMatrix, "entries must be integers");
      return v.get<std::int64_t>();
    });
    return make_system(doc.value("name", std::string("cartan")), rank, std::move(a));
  }
  if (doc.contains("coxeter")) {
    auto [rank, m] = read_rows(doc.at("coxeter"), [](const nlohmann::json& v) -> std::int64_t {
      if (v.is_string() && v.get<std::string>() == "inf") return kInfinity;
      if (!v.is_number_integer()) throw Error(ErrorCode::InvalidCartanMatrix, "entries must be integers or \"inf\"");
      return v.get<std::int64_t>();
    });
    std::vector<int> coxeter(m.begin(), m.end());
    return make_system(doc.value("name", std::string("coxeter")), rank, cartan_from_coxeter(coxeter, rank));
  }
  throw Error(ErrorCode::InvalidCartanMatrix, "expected a \"cartan\" or \"coxeter\" key");
}

}  // namespace coxeter
