#include <gtest/gtest.h>

#include <random>
#include <set>

#include "coxeter/chains.hpp"

using namespace coxeter;

namespace {

/// Maximum bipartite matching by trying every injection; fine for tiny graphs.
int brute_matching(const std::vector<std::vector<int>>& adj, std::size_t a, std::vector<bool>& used) {
  if (a == adj.size()) return 0;
  int best = brute_matching(adj, a + 1, used);
  for (int b : adj[a]) {
    if (used[b]) continue;
    used[b] = true;
    best = std::max(best, 1 + brute_matching(adj, a + 1, used));
    used[b] = false;
  }
  return best;
}

}  // namespace

TEST(MaxFlow, MatchesBruteForceMatching) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int left = 1 + static_cast<int>(rng() % 6), right = 1 + static_cast<int>(rng() % 6);
    std::vector<std::vector<int>> adj(left);
    MaxFlow flow(left + right + 2);
    const int source = left + right, sink = source + 1;
    for (int a = 0; a < left; ++a) flow.add_edge(source, a, 1);
    for (int b = 0; b < right; ++b) flow.add_edge(left + b, sink, 1);
    for (int a = 0; a < left; ++a)
      for (int b = 0; b < right; ++b)
        if (rng() % 3 == 0) {
          adj[a].push_back(b);
          flow.add_edge(a, left + b, 1);
        }
    std::vector<bool> used(right, false);
    EXPECT_EQ(flow.run(source, sink), brute_matching(adj, 0, used));
  }
}

TEST(DisjointChains, A2LongestElement) {
  const auto sys = build_system("A2");
  BruhatOrder order(sys);
  const auto w0 = longest_element(sys);

  const auto c0 = max_disjoint_chains(order, w0, {}, 0);
  ASSERT_EQ(c0.chains.size(), 1u);
  EXPECT_EQ(c0.chains[0].size(), 4u);
  EXPECT_TRUE(c0.chains[0].front().is_identity());
  EXPECT_EQ(c0.chains[0].back(), w0);

  const auto c1 = max_disjoint_chains(order, w0, {}, 1);
  EXPECT_EQ(c1.flow_value, 2);
  ASSERT_EQ(c1.chains.size(), 2u);
  std::set<std::string> bottoms, tops;
  for (const auto& chain : c1.chains) {
    ASSERT_EQ(chain.size(), 2u);
    bottoms.insert(to_word_string(chain[0]));
    tops.insert(to_word_string(chain[1]));
  }
  EXPECT_EQ(bottoms, (std::set<std::string>{"1", "2"}));
  EXPECT_EQ(tops, (std::set<std::string>{"1,2", "2,1"}));
  EXPECT_FALSE(validate_certificate(c1, order, w0, {}, 2).has_value());
}

TEST(DisjointChains, A3LongestElement) {
  const auto sys = build_system("A3");
  BruhatOrder order(sys);
  const auto w0 = longest_element(sys);
  const auto cert = max_disjoint_chains(order, w0, {}, 1);
  EXPECT_EQ(cert.flow_value, 3);
  for (const auto& chain : cert.chains) EXPECT_EQ(chain.size(), 5u);
  EXPECT_FALSE(validate_certificate(cert, order, w0, {}, 5).has_value());
}

TEST(DisjointChains, Errors) {
  const auto sys = build_system("A2");
  BruhatOrder order(sys);
  const auto w0 = longest_element(sys);
  auto code = [&](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Usage;
  };
  EXPECT_EQ(code([&] { max_disjoint_chains(order, w0, {}, 2); }), ErrorCode::BadRange);
  EXPECT_EQ(code([&] { max_disjoint_chains(order, w0, {}, -1); }), ErrorCode::BadRange);
  EXPECT_EQ(code([&] { max_disjoint_chains(order, from_word(sys, {2}), GeneratorSet::from_list({2}), 0); }),
            ErrorCode::NotMinimalRep);
  EXPECT_EQ(code([&] { max_disjoint_chains(order, identity(sys), {}, 0); }), ErrorCode::BadRange);
}

TEST(DisjointChains, ValidationCatchesTampering) {
  const auto sys = build_system("A3");
  BruhatOrder order(sys);
  const auto w0 = longest_element(sys);
  auto cert = max_disjoint_chains(order, w0, {}, 1);
  auto shared = cert;
  shared.chains[1][2] = shared.chains[0][2];
  EXPECT_TRUE(validate_certificate(shared, order, w0, {}, 5).has_value());
  auto short_chain = cert;
  short_chain.chains[0].pop_back();
  EXPECT_TRUE(validate_certificate(short_chain, order, w0, {}, 5).has_value());
  auto miscount = cert;
  miscount.flow_value += 1;
  EXPECT_TRUE(validate_certificate(miscount, order, w0, {}, 5).has_value());
  auto outside = cert;
  outside.chains[0][1] = from_word(sys, {1, 2});
  outside.chains[0][0] = from_word(sys, {3});
  EXPECT_TRUE(validate_certificate(outside, order, w0, {}, 5).has_value());
}

TEST(DisjointChains, Deterministic) {
  const auto sys = build_system("B3");
  BruhatOrder order(sys);
  const auto w0 = longest_element(sys);
  for (int i = 0; i < 4; ++i) {
    const auto a = certificate_json(max_disjoint_chains(order, w0, {}, i), w0, {});
    BruhatOrder fresh(sys);
    const auto b = certificate_json(max_disjoint_chains(fresh, w0, {}, i), w0, {});
    EXPECT_EQ(a.dump(), b.dump());
    EXPECT_EQ(a["i"], i);
    EXPECT_EQ(a["w"], to_word_string(w0));
  }
}

TEST(TheoremB, Examples) {
  const EnumeratedGroup a2(build_system("A2"));
  EXPECT_TRUE(verify_theorem_b(a2, 0, {}).ok);
  EXPECT_TRUE(verify_theorem_b(a2, 0, {}).flow_values.empty());
  const int s2s1 = a2.index_of(from_word(a2.system(), {2, 1}));
  const auto v = verify_theorem_b(a2, s2s1, GeneratorSet::from_list({2}));
  EXPECT_TRUE(v.ok);
  EXPECT_EQ(v.flow_values, (std::vector<std::int64_t>{1}));

  const EnumeratedGroup b3(build_system("B3"));
  const auto w0 = verify_theorem_b(b3, b3.size() - 1, {});
  EXPECT_TRUE(w0.ok);
  EXPECT_EQ(w0.flow_values.size(), 5u);
  EXPECT_EQ(w0.flow_values, w0.targets);
}

TEST(TheoremB, AllQuotientsOfA3AndB2) {
  for (const std::string name : {"A3", "B2", "G2"}) {
    const EnumeratedGroup g(build_system(name));
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << g.system()->rank()); ++m) {
      const GeneratorSet J(m);
      for (int w = 0; w < g.size(); ++w) {
        if (!g.is_minimal_rep(w, J)) continue;
        EXPECT_TRUE(verify_theorem_b(g, w, J).ok) << name;
        for (int i = 0; 2 * i < g.length(w); ++i) {
          const auto cert = max_disjoint_chains(g, w, J, i);
          EXPECT_FALSE(validate_certificate(cert, g, w, J, g.length(w) - i).has_value());
        }
      }
    }
  }
}
