#include <clustercount/recursion.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace clustercount;

namespace {

Forest random_tree(std::size_t n, std::mt19937_64& rng) {
  std::vector<Edge> es;
  for (vertex_t v = 1; v < n; ++v) es.emplace_back(std::uniform_int_distribution<vertex_t>(0, v - 1)(rng), v);
  return Forest(n, es);
}

VarietyInstance inst(Forest f, CoeffMap c) { return VarietyInstance{std::move(f), std::move(c), std::nullopt, ""}; }

CoeffMap random_coeffs(const FieldSpec& F, std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<code_t> pick(1, F.q() - 1);
  std::vector<code_t> a(n);
  for (auto& x : a) x = pick(rng);
  return CoeffMap(F, a);
}

template <class Fn>
void parent_trees(std::size_t n, Fn&& fn) {
  std::vector<vertex_t> par(n, 0);
  while (true) {
    std::vector<Edge> es;
    for (vertex_t v = 1; v < n; ++v) es.emplace_back(par[v], v);
    fn(Forest(n, es));
    vertex_t i = 1;
    while (i < n && ++par[i] == i) par[i++] = 0;
    if (i >= n) return;
  }
}

}  // namespace

TEST(Recursion, Examples) {
  auto F3 = FieldSpec::make(3), F7 = FieldSpec::make(7), F5 = FieldSpec::make(5);
  EXPECT_EQ(recursive_count(dynkin_instance(DynkinType::A, 2, CoeffMap::ones(F3, 2))).count, 10);
  EXPECT_EQ(recursive_count(dynkin_instance(DynkinType::A, 1, CoeffMap(F7, {6}))).count, 13);
  // alpha, beta not 1 and distinct: generic
  EXPECT_EQ(recursive_count(dynkin_instance(DynkinType::D, 4, CoeffMap(F5, {2, 3, 1, 1}))).count, 576);
  EXPECT_EQ(recursive_count(dynkin_instance(DynkinType::A, 0, CoeffMap::ones(F5, 0))).count, 1);
}

TEST(Recursion, RejectsZero) {
  auto F = FieldSpec::make(5);
  EXPECT_THROW(recursive_count(dynkin_instance(DynkinType::A, 2, CoeffMap(F, {0, 1}))), Error);
}

TEST(RecursionProperty, OracleRandomized) {
  std::mt19937_64 rng(31);
  for (std::uint64_t q : {2, 3, 4, 5}) {
    auto F = FieldSpec::of_order(q);
    for (int i = 0; i < 200; ++i) {
      const std::size_t n = 1 + rng() % 8;
      auto v = inst(random_tree(n, rng), random_coeffs(F, n, rng));
      ASSERT_EQ(recursive_count(v).count, brute_count(v).count) << v.descriptor() << " q=" << q;
    }
  }
}

TEST(RecursionProperty, OracleExhaustiveSmall) {
  for (std::uint64_t q : {2, 3}) {
    auto F = FieldSpec::make(q);
    for (std::size_t n = 1; n <= 4; ++n)
      parent_trees(n, [&](const Forest& f) {
        std::vector<code_t> a(n, 1);
        while (true) {
          auto v = inst(f, CoeffMap(F, a));
          ASSERT_EQ(recursive_count(v).count, brute_count(v).count);
          std::size_t i = 0;
          while (i < n && ++a[i] == q) a[i++] = 1;
          if (i == n) break;
        }
      });
  }
}

TEST(RecursionProperty, Forests) {
  std::mt19937_64 rng(41);
  auto F = FieldSpec::make(3);
  for (int i = 0; i < 50; ++i) {
    auto f = disjoint_union(random_tree(1 + rng() % 4, rng), random_tree(1 + rng() % 4, rng));
    auto v = inst(f, random_coeffs(F, f.size(), rng));
    ASSERT_EQ(recursive_count(v).count, brute_count(v).count);
  }
}

TEST(RecursionProperty, MemoOnOff) {
  std::mt19937_64 rng(43);
  for (std::uint64_t q : {3, 5, 7}) {
    auto F = FieldSpec::make(q);
    for (int i = 0; i < 40; ++i) {
      const std::size_t n = 1 + rng() % 7;
      auto v = inst(random_tree(n, rng), random_coeffs(F, n, rng));
      ASSERT_EQ(recursive_count(v, true).count, recursive_count(v, false).count);
    }
  }
}

TEST(Recursion, MemoCollapsesWork) {
  auto F = FieldSpec::make(11);
  auto d = dynkin(DynkinType::D, 6);
  RecursiveCounter with(F, true), without(F, false);
  auto c = CoeffMap::ones(F, 6);
  EXPECT_EQ(with.count(d, c), without.count(d, c));
  EXPECT_LT(with.evaluations(), without.evaluations());
  EXPECT_GT(with.memo_size(), 0u);
}

// q N'' counts the x_f = 0 locus, the beta sum the x_f != 0 locus
TEST(RecursionProperty, SplitTermsMatchLoci) {
  std::mt19937_64 rng(47);
  for (std::uint64_t q : {2, 3, 4, 5}) {
    auto F = FieldSpec::of_order(q);
    RecursiveCounter rc(F);
    for (int i = 0; i < 60; ++i) {
      const std::size_t n = 2 + rng() % 5;
      auto f = random_tree(n, rng);
      auto c = random_coeffs(F, n, rng);
      auto v = inst(f, c);
      for (vertex_t leaf = 0; leaf < n; ++leaf) {
        if (!f.is_leaf(leaf)) continue;
        auto s = rc.split(f, c, leaf);
        ASSERT_EQ(s.zero_term, brute_count(v, {}, Locus{leaf, true}).count);
        ASSERT_EQ(s.nonzero_term, brute_count(v, {}, Locus{leaf, false}).count);
      }
    }
  }
}

TEST(Recursion, LargeTreeBeyondBrute) {
  // A_12 over F_31 is far outside any enumeration budget; the closed form
  // is 1 + q^2 + ... + q^12
  auto F = FieldSpec::make(31);
  Count expect = 0;
  for (int j = 0; j <= 12; j += 2) expect += ipow(31, j);
  EXPECT_EQ(recursive_count(dynkin_instance(DynkinType::A, 12, CoeffMap::ones(F, 12))).count, expect);
}
