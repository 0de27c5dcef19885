#include <clustercount/coeffreduce.hpp>
#include <clustercount/enumerate.hpp>

#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"

using namespace clustercount;

namespace {

Forest random_tree(std::size_t n, std::mt19937_64& rng) {
  std::vector<Edge> es;
  for (vertex_t v = 1; v < n; ++v) es.emplace_back(std::uniform_int_distribution<vertex_t>(0, v - 1)(rng), v);
  return Forest(n, es);
}

Count brute(const Forest& f, const CoeffMap& c) { return brute_count(VarietyInstance{f, c, std::nullopt, ""}).count; }

std::vector<std::pair<int, int>> int_edges(const Forest& f) {
  std::vector<std::pair<int, int>> out;
  for (auto [u, v] : f.edges()) out.emplace_back(static_cast<int>(u), static_cast<int>(v));
  return out;
}

// every tree shape on n vertices, as parent arrays
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

template <class Fn>
void all_invertible(const FieldSpec& F, std::size_t n, Fn&& fn) {
  std::vector<code_t> a(n, 1);
  while (true) {
    fn(CoeffMap(F, a));
    std::size_t i = 0;
    while (i < n && ++a[i] == F.q()) a[i++] = 1;
    if (i == n) return;
  }
}

}  // namespace

TEST(Flip, Examples) {
  auto F = FieldSpec::make(7);
  auto a2 = dynkin(DynkinType::A, 2);
  auto r = flip(a2, CoeffMap(F, {3, 5}), 0, 1);
  EXPECT_EQ(r.values(), (std::vector<code_t>{1, 5}));
  auto a3 = dynkin(DynkinType::A, 3);
  // (a, b, c) -> (1, b, c/a)
  r = flip(a3, CoeffMap(F, {3, 5, 6}), 0, 1);
  EXPECT_EQ(r.values(), (std::vector<code_t>{1, 5, F.div(6, 3)}));
}

TEST(Flip, Errors) {
  auto F = FieldSpec::make(5);
  auto a3 = dynkin(DynkinType::A, 3);
  try {
    flip(a3, CoeffMap(F, {0, 1, 1}), 0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroCoefficient);
  }
  try {
    flip(a3, CoeffMap(F, {1, 1, 1}), 0, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAdjacent);
  }
}

TEST(Flip, F2CountExample) {
  // cross-check of the A_2 example against a full scan over F_3
  auto F = FieldSpec::make(3);
  auto a2 = dynkin(DynkinType::A, 2);
  for (code_t a = 1; a < 3; ++a)
    for (code_t b = 1; b < 3; ++b) {
      CoeffMap c(F, {a, b});
      auto r = flip(a2, c, 0, 1);
      EXPECT_EQ(oracle::naive_count(2, {{0, 1}}, {a, b}, 3),
                oracle::naive_count(2, {{0, 1}}, {(long long)r[0], (long long)r[1]}, 3));
    }
}

// flips preserve the count; zeros allowed away from s, checked with the full scan
TEST(FlipProperty, PreservesCountWithZeros) {
  for (std::uint64_t p : {2, 3}) {
    auto F = FieldSpec::make(p);
    for (std::size_t n = 2; n <= 4; ++n)
      parent_trees(n, [&](const Forest& f) {
        std::vector<code_t> a(n, 0);
        while (true) {
          const CoeffMap c(F, a);
          std::vector<long long> ai(a.begin(), a.end());
          const auto base = oracle::naive_count(n, int_edges(f), ai, p);
          for (auto [u, v] : f.edges())
            for (auto [s, t] : {Edge{u, v}, Edge{v, u}}) {
              if (c[s] == 0) continue;
              auto r = flip(f, c, s, t);
              std::vector<long long> ri(r.values().begin(), r.values().end());
              ASSERT_EQ(oracle::naive_count(n, int_edges(f), ri, p), base);
            }
          std::size_t i = 0;
          while (i < n && ++a[i] == p) a[i++] = 0;
          if (i == n) break;
        }
      });
  }
}

TEST(FlipProperty, PreservesCountExhaustiveSmallQ) {
  for (std::uint64_t q : {2, 3}) {
    auto F = FieldSpec::make(q);
    for (std::size_t n = 2; n <= 7; ++n)
      parent_trees(n, [&](const Forest& f) {
        if (n >= 6 && q == 3 && (f.edges()[n - 2].first % 2)) return;  // thin out the largest shapes
        all_invertible(F, n, [&](const CoeffMap& c) {
          const auto base = brute(f, c);
          for (auto [u, v] : f.edges()) {
            ASSERT_EQ(brute(f, flip(f, c, u, v)), base);
            ASSERT_EQ(brute(f, flip(f, c, v, u)), base);
          }
        });
      });
  }
}

TEST(FlipProperty, PreservesCountRandomized) {
  std::mt19937_64 rng(5);
  for (std::uint64_t q : {4, 5}) {
    auto F = FieldSpec::of_order(q);
    std::uniform_int_distribution<code_t> pick(1, static_cast<code_t>(q - 1));
    for (int i = 0; i < 300; ++i) {
      const std::size_t n = 2 + rng() % 6;
      auto f = random_tree(n, rng);
      std::vector<code_t> a(n);
      for (auto& x : a) x = pick(rng);
      CoeffMap c(F, a);
      const auto base = brute(f, c);
      const auto& e = f.edges()[rng() % f.edges().size()];
      ASSERT_EQ(brute(f, flip(f, c, e.first, e.second)), base);
      ASSERT_EQ(brute(f, flip(f, c, e.second, e.first)), base);
    }
  }
}

TEST(Normalize, FullTilingGivesOnes) {
  auto F = FieldSpec::make(7);
  auto a4 = dynkin(DynkinType::A, 4);
  all_invertible(F, 4, [&](const CoeffMap& c) {
    auto nf = normalize(a4, c);
    ASSERT_EQ(nf.alpha, CoeffMap::ones(F, 4));
  });
}

TEST(Normalize, A3DependsOnOddVertices) {
  auto F = FieldSpec::make(7);
  auto a3 = dynkin(DynkinType::A, 3);
  DominoTiling t(a3, {{1, 2}});
  for (code_t a1 = 1; a1 < 7; ++a1)
    for (code_t a3v = 1; a3v < 7; ++a3v) {
      std::optional<code_t> seen;
      for (code_t a2 = 1; a2 < 7; ++a2) {
        auto nf = normalize(a3, t, CoeffMap(F, {a1, a2, a3v}));
        EXPECT_EQ(nf.alpha[1], 1u);
        EXPECT_EQ(nf.alpha[2], 1u);
        if (seen) EXPECT_EQ(nf.alpha[0], *seen);
        seen = nf.alpha[0];
      }
    }
}

TEST(Normalize, A1Unchanged) {
  auto F = FieldSpec::make(5);
  auto a1 = dynkin(DynkinType::A, 1);
  auto nf = normalize(a1, DominoTiling(1), CoeffMap(F, {3}));
  EXPECT_EQ(nf.alpha.values(), (std::vector<code_t>{3}));
  EXPECT_TRUE(nf.trace.empty());
}

TEST(Normalize, A5Example) {
  auto F = FieldSpec::make(7);
  auto a5 = dynkin(DynkinType::A, 5);
  CoeffMap c(F, {2, 3, 4, 5, 6});
  auto nf = normalize(a5, c);
  EXPECT_EQ(nf.tiling.uncovered(), (std::vector<vertex_t>{0}));
  for (vertex_t v = 1; v < 5; ++v) EXPECT_EQ(nf.alpha[v], 1u);
  EXPECT_EQ(nf.trace.size(), 4u);
  EXPECT_EQ(brute(a5, nf.alpha), brute(a5, c));
}

TEST(Normalize, RejectsZero) {
  auto F = FieldSpec::make(5);
  EXPECT_THROW(normalize(dynkin(DynkinType::A, 2), CoeffMap(F, {0, 1})), Error);
}

TEST(NormalizeProperty, OnesOnCoveredAndCountKept) {
  std::mt19937_64 rng(17);
  for (std::uint64_t q : {2, 3, 4, 5}) {
    auto F = FieldSpec::of_order(q);
    std::uniform_int_distribution<code_t> pick(1, static_cast<code_t>(q - 1));
    for (int i = 0; i < 150; ++i) {
      const std::size_t n = 1 + rng() % 7;
      auto f = random_tree(n, rng);
      std::vector<code_t> a(n);
      for (auto& x : a) x = pick(rng);
      CoeffMap c(F, a);
      auto nf = normalize(f, c);
      for (vertex_t v = 0; v < n; ++v)
        if (nf.tiling.covered(v)) ASSERT_EQ(nf.alpha[v], F.one());
      ASSERT_EQ(brute(f, nf.alpha), brute(f, c));
      // replaying the trace reproduces the result
      CoeffMap replay = c;
      for (auto [s, t] : nf.trace) replay = flip(f, replay, s, t);
      ASSERT_EQ(replay, nf.alpha);
    }
  }
}

TEST(LeafRemoval, A3Example) {
  auto F = FieldSpec::make(5);
  auto lr = leaf_removal_transforms(dynkin(DynkinType::A, 3), CoeffMap::ones(F, 3), 0);
  EXPECT_EQ(lr.neighbor, 1u);
  EXPECT_EQ(lr.prime.size(), 2u);
  EXPECT_EQ(lr.prime.edges().size(), 1u);
  EXPECT_EQ(lr.prime_at(3).values(), (std::vector<code_t>{3, 1}));
  EXPECT_EQ(lr.doubleprime.size(), 1u);
  EXPECT_EQ(lr.doubleprime_alpha.values(), (std::vector<code_t>{4}));
}

TEST(LeafRemoval, D4Example) {
  auto F = FieldSpec::make(3);
  auto d4 = dynkin(DynkinType::D, 4);
  for (code_t a = 1; a < 3; ++a)
    for (code_t b = 1; b < 3; ++b) {
      auto lr = leaf_removal_transforms(d4, CoeffMap(F, {a, b, 1, 1}), 0);
      EXPECT_EQ(lr.doubleprime.size(), 2u);
      EXPECT_TRUE(lr.doubleprime.edges().empty());
      EXPECT_EQ(lr.doubleprime_vertices, (std::vector<vertex_t>{1, 3}));
      EXPECT_EQ(lr.doubleprime_alpha[0], F.neg(F.div(b, a)));
      EXPECT_EQ(lr.doubleprime_alpha[1], F.neg(F.inv(a)));
      // T'' is A_1 x A_1: counts multiply
      auto one = [&](code_t x) { return oracle::naive_count(1, {}, {(long long)x}, 3); };
      EXPECT_EQ(brute(lr.doubleprime, lr.doubleprime_alpha),
                Count(one(lr.doubleprime_alpha[0]) * one(lr.doubleprime_alpha[1])));
    }
}

TEST(LeafRemoval, Errors) {
  auto F = FieldSpec::make(5);
  try {
    leaf_removal_transforms(dynkin(DynkinType::A, 3), CoeffMap::ones(F, 3), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotALeaf);
  }
  try {
    leaf_removal_transforms(dynkin(DynkinType::A, 3), CoeffMap(F, {0, 1, 1}), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroCoefficient);
  }
}

TEST(Parse, AlphaLists) {
  auto F = FieldSpec::make(7);
  EXPECT_EQ(parse_alpha_list("2,-1", F, 3).values(), (std::vector<code_t>{2, 6, 1}));
  EXPECT_THROW(parse_alpha_list("1,2,3", F, 2), Error);
  EXPECT_THROW(parse_alpha_list("x", F, 2), Error);
  auto F4 = FieldSpec::of_order(4);
  auto c = parse_alpha_list("0,1;1", F4, 2);
  EXPECT_EQ(c.values(), (std::vector<code_t>{2, 1}));
  std::istringstream in("2 3\n# skip\n");
  EXPECT_EQ(read_coeff_map(in, F, 3).values(), (std::vector<code_t>{1, 3, 1}));
  std::istringstream bad("4 1\n");
  EXPECT_THROW(read_coeff_map(bad, F, 3), Error);
}
