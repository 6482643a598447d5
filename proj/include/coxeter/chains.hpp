#pragma once

// Vertex-disjoint saturated chains through a window of ranks of [e,w]^J,
// certified by unit-capacity maximum flow.

#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "coxeter/bruhat.hpp"
#include "coxeter/enumerated.hpp"

namespace coxeter {

/// Residual-graph max flow with BFS augmenting paths (Edmonds-Karp).
/// Adjacency is scanned in insertion order, so results are deterministic.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes) : adj_(nodes) {}

  int add_edge(int from, int to, std::int64_t capacity) {
    adj_[from].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({to, capacity});
    adj_[to].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({from, 0});
    return static_cast<int>(edges_.size()) - 2;
  }

  std::int64_t run(int source, int sink) {
    std::int64_t total = 0;
    const int n = static_cast<int>(adj_.size());
    std::vector<int> via(n);
    for (;;) {
      std::fill(via.begin(), via.end(), -1);
      std::deque<int> queue{source};
      via[source] = -2;
      while (!queue.empty() && via[sink] == -1) {
        const int u = queue.front();
        queue.pop_front();
        for (int e : adj_[u]) {
          const int v = edges_[e].to;
          if (edges_[e].capacity > 0 && via[v] == -1) {
            via[v] = e;
            queue.push_back(v);
          }
        }
      }
      if (via[sink] == -1) return total;
      std::int64_t push = std::numeric_limits<std::int64_t>::max();
      for (int v = sink; v != source; v = edges_[via[v] ^ 1].to) push = std::min(push, edges_[via[v]].capacity);
      for (int v = sink; v != source; v = edges_[via[v] ^ 1].to) {
        edges_[via[v]].capacity -= push;
        edges_[via[v] ^ 1].capacity += push;
      }
      total += push;
    }
  }

  /// Flow carried by a forward edge returned from add_edge.
  std::int64_t flow(int edge) const { return edges_[edge ^ 1].capacity; }
  const std::vector<int>& out_edges(int node) const { return adj_[node]; }
  int head(int edge) const { return edges_[edge].to; }
  static bool is_forward(int edge) { return (edge & 1) == 0; }

 private:
  struct Edge {
    int to;
    std::int64_t capacity;
  };
  std::vector<std::vector<int>> adj_;
  std::vector<Edge> edges_;
};

struct ChainCertificate {
  int first_rank = 0;
  std::vector<std::vector<GroupElement>> chains;
  std::int64_t flow_value = 0;
};

/// Maximum family of vertex-disjoint chains running from the bottom layer of
/// `dag` to its top layer. Each vertex becomes an in/out pair joined by a
/// capacity-1 edge; the flow is then decomposed into paths.
inline ChainCertificate disjoint_chains(const LayeredDag& dag) {
  ChainCertificate cert;
  cert.first_rank = dag.first_rank;
  const int layers = static_cast<int>(dag.layers.size());
  if (layers == 0) return cert;
  std::vector<int> offset(layers + 1, 0);
  for (int t = 0; t < layers; ++t) offset[t + 1] = offset[t] + static_cast<int>(dag.layers[t].size());
  const int vertices = offset[layers];
  const int source = 2 * vertices, sink = source + 1;
  MaxFlow flow(2 * vertices + 2);
  for (int v = 0; v < vertices; ++v) flow.add_edge(2 * v, 2 * v + 1, 1);
  for (int a = 0; a < static_cast<int>(dag.layers[0].size()); ++a) flow.add_edge(source, 2 * (offset[0] + a), 1);
  for (int t = 0; t + 1 < layers; ++t)
    for (int a = 0; a < static_cast<int>(dag.layers[t].size()); ++a)
      for (int b : dag.up_edges[t][a]) flow.add_edge(2 * (offset[t] + a) + 1, 2 * (offset[t + 1] + b), 1);
  for (int b = 0; b < static_cast<int>(dag.layers[layers - 1].size()); ++b)
    flow.add_edge(2 * (offset[layers - 1] + b) + 1, sink, 1);
  cert.flow_value = flow.run(source, sink);

  auto locate = [&](int vertex) {
    int t = 0;
    while (offset[t + 1] <= vertex) ++t;
    return std::make_pair(t, vertex - offset[t]);
  };
  for (int a = 0; a < static_cast<int>(dag.layers[0].size()); ++a) {
    int node = 2 * (offset[0] + a) + 1;
    if (flow.flow(2 * (offset[0] + a)) == 0) continue;  // in->out edge of this vertex is unused
    std::vector<GroupElement> chain{dag.layers[0][a]};
    for (;;) {
      int next = -1;
      for (int e : flow.out_edges(node))
        if (MaxFlow::is_forward(e) && flow.flow(e) > 0 && flow.head(e) != sink) next = flow.head(e);
      if (next < 0) break;
      const auto [t, b] = locate(next / 2);
      chain.push_back(dag.layers[t][b]);
      node = next + 1;
    }
    cert.chains.push_back(std::move(chain));
  }
  return cert;
}

/// Chains from rank i to rank l(w) - i of [e,w]^J; requires 0 <= i < l(w)/2.
inline ChainCertificate max_disjoint_chains(const EnumeratedGroup& g, int w, GeneratorSet J, int i) {
  if (!g.is_minimal_rep(w, J)) throw Error(ErrorCode::NotMinimalRep, format_word(g.word(w)) + " is not in W^J");
  if (i < 0 || 2 * i >= g.length(w))
    throw Error(ErrorCode::BadRange, "need 0 <= i < l(w)/2, got i = " + std::to_string(i) + " with l(w) = " + std::to_string(g.length(w)));
  return disjoint_chains(g.layered_dag(w, J, i, g.length(w) - i));
}

inline ChainCertificate max_disjoint_chains(BruhatOrder& order, const GroupElement& w, GeneratorSet J, int i) {
  if (!is_minimal_rep(w, J)) throw Error(ErrorCode::NotMinimalRep, to_word_string(w) + " is not in W^J");
  if (i < 0 || 2 * i >= w.length())
    throw Error(ErrorCode::BadRange, "need 0 <= i < l(w)/2, got i = " + std::to_string(i) + " with l(w) = " + std::to_string(w.length()));
  return disjoint_chains(order.layered_dag(w, J, i, w.length() - i));
}

/// Re-checks a certificate against the order itself: every chain spans ranks
/// first..last one per rank, links are comparable, every vertex lies in
/// [e,w]^J, and no vertex is shared. Returns a description of the first
/// defect, or nothing.
inline std::optional<std::string> validate_certificate(const ChainCertificate& cert, BruhatOrder& order,
                                                       const GroupElement& w, GeneratorSet J, int last_rank) {
  std::unordered_set<GroupElement, ElementHash> seen;
  if (cert.flow_value != static_cast<std::int64_t>(cert.chains.size())) return "flow value differs from chain count";
  for (const auto& chain : cert.chains) {
    if (static_cast<int>(chain.size()) != last_rank - cert.first_rank + 1) return "chain has wrong number of ranks";
    for (std::size_t k = 0; k < chain.size(); ++k) {
      const auto& u = chain[k];
      if (u.length() != cert.first_rank + static_cast<int>(k)) return "rank mismatch at " + to_word_string(u);
      if (!is_minimal_rep(u, J) || !order.leq(u, w)) return to_word_string(u) + " lies outside [e,w]^J";
      if (k > 0 && !order.leq(chain[k - 1], u)) return "incomparable link at " + to_word_string(u);
      if (!seen.insert(u).second) return to_word_string(u) + " appears in two chains";
    }
  }
  return std::nullopt;
}

/// Same checks as above against an enumerated group.
inline std::optional<std::string> validate_certificate(const ChainCertificate& cert, const EnumeratedGroup& g, int w,
                                                       GeneratorSet J, int last_rank) {
  if (cert.flow_value != static_cast<std::int64_t>(cert.chains.size())) return "flow value differs from chain count";
  Bitset seen(g.size());
  for (const auto& chain : cert.chains) {
    if (static_cast<int>(chain.size()) != last_rank - cert.first_rank + 1) return "chain has wrong number of ranks";
    int prev = -1;
    for (std::size_t k = 0; k < chain.size(); ++k) {
      const auto idx = g.find(chain[k]);
      if (!idx) return to_word_string(chain[k]) + " is outside the enumerated group";
      const int u = *idx;
      if (g.length(u) != cert.first_rank + static_cast<int>(k)) return "rank mismatch at " + to_word_string(chain[k]);
      if (!g.is_minimal_rep(u, J) || !g.leq(u, w)) return to_word_string(chain[k]) + " lies outside [e,w]^J";
      if (prev >= 0 && !g.leq(prev, u)) return "incomparable link at " + to_word_string(chain[k]);
      if (seen.test(u)) return to_word_string(chain[k]) + " appears in two chains";
      seen.set(u);
      prev = u;
    }
  }
  return std::nullopt;
}

struct TheoremBVerdict {
  bool ok = true;
  std::optional<int> failing_i;
  std::vector<std::int64_t> flow_values;  // indexed by i
  std::vector<std::int64_t> targets;      // f^{w,J}_i
};

/// For every 0 <= i < l(w)/2 the flow must equal f^{w,J}_i.
inline TheoremBVerdict verify_theorem_b(const EnumeratedGroup& g, int w, GeneratorSet J) {
  const auto f = g.f_vector(w, J).counts;
  TheoremBVerdict v;
  for (int i = 0; 2 * i < g.length(w); ++i) {
    const auto cert = max_disjoint_chains(g, w, J, i);
    v.flow_values.push_back(cert.flow_value);
    v.targets.push_back(f[i]);
    if (cert.flow_value != f[i] && v.ok) {
      v.ok = false;
      v.failing_i = i;
    }
  }
  return v;
}

/// {"w": word, "J": [...], "i": i, "chains": [[word,...],...]}
inline nlohmann::json certificate_json(const ChainCertificate& cert, const GroupElement& w, GeneratorSet J) {
  nlohmann::json chains = nlohmann::json::array();
  for (const auto& chain : cert.chains) {
    nlohmann::json words = nlohmann::json::array();
    for (const auto& u : chain) words.push_back(to_word_string(u));
    chains.push_back(std::move(words));
  }
  return {{"w", to_word_string(w)}, {"J", J.to_list()}, {"i", cert.first_rank}, {"chains", std::move(chains)}};
}

}  // namespace coxeter
