#include <clustercount/treegraph.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

using namespace clustercount;

namespace {

std::vector<Edge> one_based(std::initializer_list<std::pair<int, int>> es) {
  std::vector<Edge> out;
  for (auto [u, v] : es) out.emplace_back(std::min(u, v) - 1, std::max(u, v) - 1);
  std::sort(out.begin(), out.end());
  return out;
}

// Pruefer decoding; seq has n-2 entries in [0,n)
Forest pruefer_tree(std::size_t n, const std::vector<vertex_t>& seq) {
  if (n == 1) return Forest(1, {});
  std::vector<std::size_t> deg(n, 1);
  for (auto s : seq) ++deg[s];
  std::vector<Edge> es;
  std::set<vertex_t> leaves;
  for (vertex_t v = 0; v < n; ++v)
    if (deg[v] == 1) leaves.insert(v);
  for (auto s : seq) {
    const vertex_t l = *leaves.begin();
    leaves.erase(leaves.begin());
    es.emplace_back(l, s);
    if (--deg[s] == 1) leaves.insert(s);
  }
  es.emplace_back(*leaves.begin(), *std::next(leaves.begin()));
  return Forest(n, es);
}

template <class Fn>
void all_labeled_trees(std::size_t n, Fn&& fn) {
  if (n <= 2) {
    fn(n == 2 ? Forest(2, {{0, 1}}) : Forest(n, {}));
    return;
  }
  std::vector<vertex_t> seq(n - 2, 0);
  while (true) {
    fn(pruefer_tree(n, seq));
    std::size_t i = 0;
    while (i < seq.size() && ++seq[i] == n) seq[i++] = 0;
    if (i == seq.size()) return;
  }
}

Forest random_tree(std::size_t n, std::mt19937_64& rng) {
  std::vector<Edge> es;
  for (vertex_t v = 1; v < n; ++v) es.emplace_back(std::uniform_int_distribution<vertex_t>(0, v - 1)(rng), v);
  return Forest(n, es);
}

Forest permuted(const Forest& f, const std::vector<vertex_t>& perm) {
  std::vector<Edge> es;
  for (auto [u, v] : f.edges()) es.emplace_back(perm[u], perm[v]);
  return Forest(f.size(), es);
}

}  // namespace

TEST(Forest, RejectsCycleAndBadEdge) {
  EXPECT_THROW(Forest(3, {{0, 1}, {1, 2}, {2, 0}}), Error);
  EXPECT_THROW(Forest(2, {{0, 2}}), Error);
  EXPECT_THROW(Forest(2, {{1, 1}}), Error);
  EXPECT_THROW(Forest(2, {{0, 1}, {1, 0}}), Error);
}

TEST(Forest, ReadWrite) {
  std::istringstream in("# comment\n1 2\n2 3\n5\n");
  auto f = read_forest(in);
  EXPECT_EQ(f.size(), 5u);
  EXPECT_EQ(f.edges(), one_based({{1, 2}, {2, 3}}));
  EXPECT_EQ(f.components().size(), 3u);
  std::ostringstream out;
  write_forest(out, f);
  std::istringstream back(out.str());
  auto g = read_forest(back);
  EXPECT_EQ(g.size(), f.size());
  EXPECT_EQ(g.edges(), f.edges());
}

TEST(Dynkin, Edges) {
  EXPECT_EQ(dynkin(DynkinType::A, 3).edges(), one_based({{1, 2}, {2, 3}}));
  EXPECT_EQ(dynkin(DynkinType::D, 4).edges(), one_based({{1, 3}, {2, 3}, {3, 4}}));
  EXPECT_EQ(dynkin(DynkinType::A, 0).size(), 0u);
  EXPECT_EQ(dynkin(DynkinType::D, 6).edges(), one_based({{1, 3}, {2, 3}, {3, 4}, {4, 5}, {5, 6}}));
}

TEST(Dynkin, EShapes) {
  for (int r : {6, 7, 8}) {
    auto f = dynkin(DynkinType::E, r);
    ASSERT_EQ(f.size(), static_cast<std::size_t>(r));
    EXPECT_EQ(f.edges().size(), static_cast<std::size_t>(r - 1));
    EXPECT_EQ(f.components().size(), 1u);
    // one branch point of degree 3 with arms 1, 2, r-4
    EXPECT_EQ(f.degree(0), 3u);
    std::vector<std::size_t> arms;
    for (auto s : f.neighbors(0)) {
      std::size_t len = 1;
      vertex_t prev = 0, cur = s;
      while (f.degree(cur) == 2) {
        auto nx = f.neighbors(cur)[0] == prev ? f.neighbors(cur)[1] : f.neighbors(cur)[0];
        prev = cur;
        cur = nx;
        ++len;
      }
      arms.push_back(len);
    }
    std::sort(arms.begin(), arms.end());
    EXPECT_EQ(arms, (std::vector<std::size_t>{1, 2, static_cast<std::size_t>(r - 4)}));
    EXPECT_TRUE(f.is_leaf(long_branch_end(r)));
  }
  EXPECT_EQ(long_branch_end(7), 6u);
}

TEST(Dynkin, BadRank) {
  EXPECT_THROW(dynkin(DynkinType::D, 2), Error);
  EXPECT_THROW(dynkin(DynkinType::E, 9), Error);
  EXPECT_THROW(dynkin(DynkinType::E, 5), Error);
  EXPECT_THROW(dynkin(DynkinType::A, -1), Error);
}

TEST(Coloring, Examples) {
  using C = Color;
  EXPECT_EQ(bipartite_color(dynkin(DynkinType::A, 3), 0), (Coloring{C::White, C::Black, C::White}));
  EXPECT_EQ(bipartite_color(Forest(1, {})), (Coloring{C::White}));
  EXPECT_EQ(bipartite_color(dynkin(DynkinType::D, 4), 0), (Coloring{C::White, C::White, C::Black, C::White}));
}

TEST(Coloring, AllTreesUpTo9) {
  for (std::size_t n = 1; n <= 9; ++n)
    all_labeled_trees(n, [&](const Forest& f) {
      auto c = bipartite_color(f);
      for (auto [u, v] : f.edges()) ASSERT_NE(c[u], c[v]);
    });
}

TEST(Tiling, LeafyExamples) {
  auto a4 = leafy_tiling(dynkin(DynkinType::A, 4));
  EXPECT_TRUE(a4.full());
  EXPECT_EQ(a4.dominoes(), one_based({{1, 2}, {3, 4}}));
  auto a3 = leafy_tiling(dynkin(DynkinType::A, 3));
  EXPECT_EQ(a3.dominoes(), one_based({{2, 3}}));
  EXPECT_EQ(a3.uncovered(), (std::vector<vertex_t>{0}));
  auto d4 = leafy_tiling(dynkin(DynkinType::D, 4));
  EXPECT_EQ(d4.dominoes(), one_based({{3, 4}}));
  EXPECT_EQ(d4.uncovered(), (std::vector<vertex_t>{0, 1}));
}

TEST(Tiling, AddChecks) {
  auto f = dynkin(DynkinType::A, 3);
  DominoTiling t(3);
  EXPECT_THROW(t.add(f, 0, 2), Error);
  t.add(f, 0, 1);
  EXPECT_THROW(t.add(f, 1, 2), Error);
}

// greedy in index order fails on this path
TEST(Tiling, LeafyNeedsRepair) {
  auto f = forest_from_edges(5, {{5, 1}, {1, 3}, {3, 2}, {2, 4}});
  auto t = leafy_tiling(f);
  for (auto v : t.uncovered()) EXPECT_LE(f.degree(v), 1u);
}

TEST(TilingProperty, LeafyOnlyLeavesUncovered) {
  auto check = [](const Forest& f) {
    auto t = leafy_tiling(f);
    for (auto [u, v] : t.dominoes()) ASSERT_TRUE(f.adjacent(u, v));
    for (vertex_t v = 0; v < f.size(); ++v)
      if (t.covered(v)) ASSERT_EQ(*t.partner(*t.partner(v)), v);
    for (auto v : t.uncovered()) ASSERT_LE(f.degree(v), 1u);
  };
  for (std::size_t n = 1; n <= 8; ++n) all_labeled_trees(n, check);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 3000; ++i) {
    auto a = random_tree(1 + rng() % 20, rng);
    auto b = random_tree(1 + rng() % 6, rng);
    check(disjoint_union(a, b));
  }
}

TEST(Tiling, DynkinNormal) {
  EXPECT_EQ(dynkin_normal_tiling(DynkinType::A, 5).uncovered(), (std::vector<vertex_t>{0}));
  EXPECT_TRUE(dynkin_normal_tiling(DynkinType::A, 6).full());
  EXPECT_EQ(dynkin_normal_tiling(DynkinType::D, 5).uncovered(), (std::vector<vertex_t>{0}));
  EXPECT_EQ(dynkin_normal_tiling(DynkinType::D, 6).uncovered(), (std::vector<vertex_t>{0, 1}));
  EXPECT_TRUE(dynkin_normal_tiling(DynkinType::E, 6).full());
  EXPECT_TRUE(dynkin_normal_tiling(DynkinType::E, 8).full());
  EXPECT_EQ(dynkin_normal_tiling(DynkinType::E, 7).uncovered(), (std::vector<vertex_t>{long_branch_end(7)}));
}

TEST(WhiteLeaf, Examples) {
  auto a2 = dynkin(DynkinType::A, 2);
  EXPECT_EQ(white_leaf(a2, leafy_tiling(a2), bipartite_color(a2)), 0u);

  auto a4 = dynkin(DynkinType::A, 4);
  DominoTiling t4(a4, {{0, 1}, {2, 3}});
  using C = Color;
  // flipping 3 over 4 first would be undone by flipping 1 over 2
  EXPECT_EQ(white_leaf(a4, t4, {C::White, C::Black, C::White, C::Black}), 0u);
  EXPECT_EQ(flip_order(a4, t4, {C::White, C::Black, C::White, C::Black}), (std::vector<vertex_t>{0, 2}));

  auto one = Forest(2, {{0, 1}});
  EXPECT_EQ(white_leaf(one, DominoTiling(one, {{0, 1}}), {C::Black, C::White}), 1u);

  auto a1 = dynkin(DynkinType::A, 1);
  try {
    white_leaf(a1, DominoTiling(1), bipartite_color(a1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyCoveredSet);
  }
}

TEST(FlipOrder, CoversAllCoveredVertices) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    auto f = random_tree(1 + rng() % 14, rng);
    auto t = leafy_tiling(f);
    auto c = bipartite_color(f);
    std::size_t total = 0;
    for (auto col : {Color::White, Color::Black}) {
      auto order = flip_order(f, t, c, col);
      total += order.size();
      // s before every covered u adjacent to partner(s)
      std::vector<std::size_t> pos(f.size(), 0);
      for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
      for (auto s : order)
        for (auto u : f.neighbors(*t.partner(s)))
          if (u != s && t.covered(u)) ASSERT_LT(pos[s], pos[u]);
    }
    ASSERT_EQ(total, f.size() - t.uncovered().size());
  }
}

TEST(Canonical, Examples) {
  auto p = forest_from_edges(3, {{1, 2}, {2, 3}});
  auto r = forest_from_edges(3, {{3, 2}, {2, 1}});
  EXPECT_EQ(canonical_form(p, {"a", "b", "a"}), canonical_form(r, {"a", "b", "a"}));
  EXPECT_EQ(canonical_form(dynkin(DynkinType::A, 3)), canonical_form(dynkin(DynkinType::D, 3)));
  EXPECT_EQ(canonical_form(dynkin(DynkinType::A, 3), {"x", "y", "z"}),
            canonical_form(dynkin(DynkinType::D, 3), {"x", "z", "y"}));
  EXPECT_NE(canonical_form(dynkin(DynkinType::A, 3)), canonical_form(dynkin(DynkinType::A, 4)));
  EXPECT_NE(canonical_form(p, {"a", "b", "c"}), canonical_form(p, {"b", "a", "c"}));
  // labels that would collide under naive concatenation
  auto two = Forest(2, {});
  EXPECT_NE(canonical_form(two, {"ab", "c"}), canonical_form(two, {"a", "bc"}));
}

TEST(CanonicalProperty, RelabelingInvariance) {
  std::mt19937_64 rng(2026);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + rng() % 12;
    auto f = random_tree(n, rng);
    std::vector<std::string> data(n);
    for (auto& d : data) d = std::to_string(rng() % 3);
    std::vector<vertex_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto g = permuted(f, perm);
    std::vector<std::string> gd(n);
    for (vertex_t v = 0; v < n; ++v) gd[perm[v]] = data[v];
    ASSERT_EQ(canonical_form(f, data), canonical_form(g, gd));
  }
}

// same canonical form iff isomorphic, over all unlabeled trees up to 7
TEST(CanonicalProperty, SeparatesTrees) {
  // number of unlabeled trees on n vertices
  const std::size_t expected[] = {0, 1, 1, 1, 2, 3, 6, 11, 23};
  for (std::size_t n = 1; n <= 8; ++n) {
    std::set<std::string> forms;
    all_labeled_trees(n, [&](const Forest& f) { forms.insert(canonical_form(f)); });
    EXPECT_EQ(forms.size(), expected[n]) << n;
  }
}

TEST(Forest, InducedKeepsLabels) {
  auto f = dynkin(DynkinType::D, 5);
  auto g = f.induced({0, 2, 3});
  EXPECT_EQ(g.size(), 3u);
  EXPECT_EQ(g.label(2), "4");
  EXPECT_EQ(g.edges().size(), 2u);
}
