#include <gtest/gtest.h>

#include <map>
#include <set>

#include "coxeter/element.hpp"
#include "coxeter/system.hpp"
#include "oracles.hpp"

using namespace coxeter;

namespace {

std::vector<std::int64_t> level_sizes(const SystemPtr& sys, int L) {
  std::vector<std::int64_t> out;
  for (const auto& level : ball(sys, L)) out.push_back(static_cast<std::int64_t>(level.size()));
  return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::Usage;
}

}  // namespace

TEST(BuildSystem, A2) {
  const auto sys = build_system("A2");
  EXPECT_EQ(sys->rank(), 2);
  EXPECT_EQ(sys->coxeter_entry(1, 2), 3);
  EXPECT_TRUE(sys->is_finite());
  EXPECT_EQ(*sys->order(), 6);
  EXPECT_EQ(*sys->longest_length(), 3);
}

TEST(BuildSystem, AffineC2) {
  const auto sys = build_system("C2~");
  EXPECT_EQ(sys->rank(), 3);
  EXPECT_FALSE(sys->is_finite());
  EXPECT_FALSE(sys->order().has_value());
  EXPECT_EQ(sys->coxeter_entry(1, 2), 4);
  EXPECT_EQ(sys->coxeter_entry(2, 3), 4);
  EXPECT_EQ(sys->coxeter_entry(1, 3), 2);
  const IntMatrix expected{2, -1, 0, -2, 2, -2, 0, -1, 2};
  EXPECT_EQ(sys->cartan_matrix(), expected);
}

TEST(BuildSystem, B2LongestLength) { EXPECT_EQ(*build_system("B2")->longest_length(), 4); }

TEST(BuildSystem, Errors) {
  EXPECT_EQ(code_of([] { build_system("H3"); }), ErrorCode::NonCrystallographic);
  EXPECT_EQ(code_of([] { build_system("H4"); }), ErrorCode::NonCrystallographic);
  EXPECT_EQ(code_of([] { build_system("I2(5)"); }), ErrorCode::NonCrystallographic);
  EXPECT_EQ(code_of([] { build_system("X3"); }), ErrorCode::UnsupportedPreset);
  EXPECT_EQ(code_of([] { build_system("A9"); }), ErrorCode::UnsupportedPreset);
  EXPECT_EQ(code_of([] { build_system("E5"); }), ErrorCode::UnsupportedPreset);
  EXPECT_EQ(code_of([] { build_system_from_json({{"cartan", {{2, -1}, {0, 2}}}}); }), ErrorCode::InvalidCartanMatrix);
  EXPECT_EQ(code_of([] { build_system_from_json({{"cartan", {{2, 1}, {1, 2}}}}); }), ErrorCode::InvalidCartanMatrix);
  EXPECT_EQ(code_of([] { build_system_from_json({{"cartan", {{3, -1}, {-1, 2}}}}); }), ErrorCode::InvalidCartanMatrix);
  EXPECT_EQ(code_of([] { build_system_from_json({{"coxeter", {{1, 5}, {5, 1}}}}); }), ErrorCode::NonCrystallographic);
}

TEST(BuildSystem, DihedralPresets) {
  EXPECT_EQ(*build_system("I2(6)")->order(), 12);
  EXPECT_EQ(*build_system("I2(4)")->order(), 8);
  EXPECT_EQ(*build_system("I2(3)")->order(), 6);
}

TEST(BuildSystem, ProductsAndJson) {
  const auto sys = build_system("A1xB2");
  EXPECT_EQ(sys->rank(), 3);
  EXPECT_EQ(*sys->order(), 16);
  EXPECT_EQ(sys->coxeter_entry(1, 2), 2);

  const auto inf = build_system_from_json({{"coxeter", {{1, "inf"}, {"inf", 1}}}});
  EXPECT_FALSE(inf->is_finite());
  EXPECT_EQ(inf->cartan_entry(1, 2), -2);
  EXPECT_EQ(level_sizes(inf, 4), (std::vector<std::int64_t>{1, 2, 2, 2, 2}));

  const auto g2 = build_system_from_json({{"cartan", {{2, -1}, {-3, 2}}}});
  EXPECT_EQ(*g2->order(), 12);
  EXPECT_EQ(g2->coxeter_entry(1, 2), 6);
}

TEST(BuildSystem, ClassificationOrdersMatchEnumeration) {
  for (const std::string name : {"A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "B5", "C3", "D4", "D5", "G2", "F4",
                                 "A1xA1", "A2xB2"}) {
    const auto sys = build_system(name);
    const auto sizes = level_sizes(sys, *sys->longest_length() + 2);
    std::int64_t total = 0;
    for (auto s : sizes) total += s;
    EXPECT_EQ(total, *sys->order()) << name;
    EXPECT_EQ(static_cast<int>(sizes.size()) - 1, *sys->longest_length()) << name;
    for (std::size_t i = 0; i < sizes.size(); ++i) EXPECT_EQ(sizes[i], sizes[sizes.size() - 1 - i]) << name;
    EXPECT_EQ(sizes.back(), 1) << name;
  }
}

TEST(BuildSystem, ExceptionalOrders) {
  EXPECT_EQ(*build_system("E6")->order(), 51840);
  EXPECT_EQ(*build_system("E7")->longest_length(), 63);
  EXPECT_EQ(*build_system("E8")->order(), 696729600);
  EXPECT_EQ(*build_system("E8")->longest_length(), 120);
}

TEST(BuildSystem, AffinePresetsAreInfinite) {
  for (const std::string name : {"A1~", "A2~", "A3~", "B3~", "C2~", "C3~", "D4~", "F4~", "G2~"}) {
    const auto sys = build_system(name);
    EXPECT_FALSE(sys->is_finite()) << name;
    EXPECT_EQ(code_of([&] { longest_element(sys); }), ErrorCode::InfiniteGroup) << name;
  }
  EXPECT_EQ(build_system("A2~")->rank(), 3);
  EXPECT_EQ(build_system("G2~")->coxeter_entry(2, 3), 6);
}

TEST(ApplyGenerator, Examples) {
  const auto sys = build_system("A2");
  const auto e = identity(sys);
  const auto s1 = apply_generator(e, 1, Side::Right);
  EXPECT_EQ(s1.length(), 1);
  EXPECT_TRUE(apply_generator(s1, 1, Side::Right).is_identity());
  const auto s1s2 = from_word(sys, {1, 2});
  const auto w0 = apply_generator(s1s2, 1, Side::Right);
  EXPECT_EQ(w0.length(), 3);
  EXPECT_EQ(w0, longest_element(sys));
}

TEST(ApplyGenerator, SystemMismatch) {
  const auto a = from_word(build_system("A2"), {1});
  const auto b = from_word(build_system("B2"), {1});
  EXPECT_EQ(code_of([&] { multiply(a, b); }), ErrorCode::SystemMismatch);
  EXPECT_EQ(code_of([&] { apply_generator(a, 3, Side::Left); }), ErrorCode::BadWord);
}

TEST(ApplyGenerator, LengthsAgreeWithPermutations) {
  const auto sys = build_system("A3");
  std::map<std::vector<int>, GroupElement> seen;
  for (const auto& level : ball(sys, 6)) {
    for (const auto& u : level) {
      const auto word = reduced_word(u);
      const auto perm = oracle::permutation(word, 4);
      EXPECT_EQ(u.length(), oracle::inversions(perm));
      EXPECT_TRUE(seen.emplace(perm, u).second) << "two elements share a permutation";
      for (Generator s = 1; s <= 3; ++s) {
        auto w2 = word;
        w2.push_back(s);
        EXPECT_EQ(apply_generator(u, s, Side::Right).length(), oracle::inversions(oracle::permutation(w2, 4)));
        w2 = word;
        w2.insert(w2.begin(), s);
        EXPECT_EQ(apply_generator(u, s, Side::Left).length(), oracle::inversions(oracle::permutation(w2, 4)));
      }
    }
  }
  EXPECT_EQ(seen.size(), 24u);
}

TEST(Descents, Examples) {
  const auto sys = build_system("A2");
  EXPECT_EQ(descents(identity(sys), Side::Right).size(), 0);
  const auto s1 = generator_element(sys, 1);
  EXPECT_EQ(descents(s1, Side::Right).to_list(), (std::vector<Generator>{1}));
  EXPECT_EQ(descents(s1, Side::Left).to_list(), (std::vector<Generator>{1}));
  EXPECT_EQ(descents(longest_element(sys), Side::Left).to_list(), (std::vector<Generator>{1, 2}));
  EXPECT_EQ(descents(longest_element(sys), Side::Right).to_list(), (std::vector<Generator>{1, 2}));
}

TEST(Descents, ExchangeConsistency) {
  for (const std::string name : {"B3", "G2", "C2~", "A2~"}) {
    const auto sys = build_system(name);
    for (const auto& level : ball(sys, 7)) {
      for (const auto& u : level) {
        for (Generator s = 1; s <= sys->rank(); ++s) {
          for (Side side : {Side::Left, Side::Right}) {
            const auto v = apply_generator(u, s, side);
            EXPECT_EQ(std::abs(v.length() - u.length()), 1);
            EXPECT_EQ(descents(u, side).contains(s), v.length() == u.length() - 1);
          }
        }
      }
    }
  }
}

TEST(ReducedWord, Examples) {
  const auto sys = build_system("A2");
  EXPECT_TRUE(reduced_word(identity(sys)).empty());
  EXPECT_EQ(reduced_word(generator_element(sys, 2)), (Word{2}));
  EXPECT_EQ(reduced_word(longest_element(sys)), (Word{1, 2, 1}));
  EXPECT_EQ(reduced_word(from_word(sys, {2, 1, 2})), (Word{1, 2, 1}));
}

TEST(ReducedWord, ShortLexAgainstBruteForce) {
  for (const std::string name : {"A3", "B3", "C2~"}) {
    const auto sys = build_system(name);
    const int n = sys->rank();
    const int max_len = 5;
    std::unordered_map<GroupElement, Word, ElementHash> first;
    // Words of each length in lexicographic order; the first hit per element is ShortLex-minimal.
    for (int len = 0; len <= max_len; ++len) {
      Word w(len, 1);
      for (;;) {
        const auto u = from_word(sys, w);
        if (u.length() == len) first.emplace(u, w);
        int i = len - 1;
        while (i >= 0 && w[i] == n) w[i--] = 1;
        if (i < 0) break;
        ++w[i];
      }
    }
    for (const auto& [u, word] : first) EXPECT_EQ(reduced_word(u), word) << name;
  }
}

TEST(ReducedWord, RoundTripOnBalls) {
  for (const std::string name : {"B3", "D4", "C2~", "G2~"}) {
    const auto sys = build_system(name);
    for (const auto& level : ball(sys, 8)) {
      for (const auto& u : level) {
        const auto w = reduced_word(u);
        EXPECT_EQ(static_cast<int>(w.size()), u.length());
        EXPECT_EQ(from_word(sys, w), u);
      }
    }
  }
}

TEST(Ball, Examples) {
  EXPECT_EQ(level_sizes(build_system("A2"), 3), (std::vector<std::int64_t>{1, 2, 2, 1}));
  EXPECT_EQ(level_sizes(build_system("C2~"), 3), (std::vector<std::int64_t>{1, 3, 5, 8}));
  EXPECT_EQ(level_sizes(build_system("A1"), 5), (std::vector<std::int64_t>{1, 1}));
}

TEST(Ball, AffinePoincareSeries) {
  EXPECT_EQ(level_sizes(build_system("C2~"), 6), (std::vector<std::int64_t>{1, 3, 5, 8, 11, 13, 16}));
  EXPECT_EQ(level_sizes(build_system("A2~"), 5), (std::vector<std::int64_t>{1, 3, 6, 9, 12, 15}));
  EXPECT_EQ(level_sizes(build_system("A1~"), 5), (std::vector<std::int64_t>{1, 2, 2, 2, 2, 2}));
}

TEST(Ball, DistinctMatrices) {
  const auto sys = build_system("F4");
  std::set<IntMatrix> keys;
  std::size_t count = 0;
  for (const auto& level : ball(sys, 24))
    for (const auto& u : level) {
      keys.insert(u.matrix());
      ++count;
    }
  EXPECT_EQ(count, 1152u);
  EXPECT_EQ(keys.size(), 1152u);
}

TEST(Ball, ResourceLimit) {
  EXPECT_EQ(code_of([] { ball(build_system("C2~"), 30, 100); }), ErrorCode::ResourceLimit);
}

TEST(Inverse, Examples) {
  const auto sys = build_system("A2");
  EXPECT_TRUE(inverse(identity(sys)).is_identity());
  EXPECT_EQ(inverse(generator_element(sys, 2)), generator_element(sys, 2));
  EXPECT_EQ(inverse(from_word(sys, {1, 2})), from_word(sys, {2, 1}));
  for (const auto& level : ball(build_system("B3"), 9))
    for (const auto& u : level) {
      EXPECT_TRUE(multiply(u, inverse(u)).is_identity());
      EXPECT_EQ(inverse(u).length(), u.length());
    }
}

TEST(LongestElement, Examples) {
  EXPECT_EQ(longest_element(build_system("A2")).length(), 3);
  EXPECT_EQ(longest_element(build_system("G2")).length(), 6);
  const auto b4 = longest_element(build_system("B4"));
  EXPECT_EQ(b4.length(), 16);
  EXPECT_EQ(descents(b4, Side::Left).size(), 4);
  EXPECT_EQ(descents(b4, Side::Right).size(), 4);
}

TEST(Words, Parsing) {
  EXPECT_TRUE(parse_word("", 3).empty());
  EXPECT_EQ(parse_word("1,2,3", 3), (Word{1, 2, 3}));
  EXPECT_EQ(format_word({2, 1, 3}), "2,1,3");
  EXPECT_EQ(code_of([] { parse_word("1,x", 3); }), ErrorCode::BadWord);
  EXPECT_EQ(code_of([] { parse_word("4", 3); }), ErrorCode::BadWord);
  EXPECT_EQ(code_of([] { parse_word("0", 3); }), ErrorCode::BadWord);
  EXPECT_EQ(code_of([] { parse_word("1,,2", 3); }), ErrorCode::BadWord);
}

TEST(Arithmetic, OverflowIsReported) {
  EXPECT_EQ(code_of([] { detail::checked_mul(std::int64_t{1} << 62, 4); }), ErrorCode::Overflow);
  EXPECT_EQ(code_of([] { detail::checked_add(INT64_MAX, 1); }), ErrorCode::Overflow);
}
