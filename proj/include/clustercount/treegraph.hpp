#pragma once

// Labeled forests, 2-colorings, partial domino tilings and the A/D/E Dynkin
// constructors.
//
// Vertices are 0-based indices internally. Dynkin labels and all text I/O
// are 1-based, so vertex i of A_n is index i-1.
//
// Frozen labeling conventions:
//   A_n : path 1-2-...-n.
//   D_n : leaves 1 and 2 both adjacent to 3, then the path 3-4-...-n.
//   E_n : vertex 1 is the branch point; arms of lengths 1, 2, n-4 are numbered
//         breadth-first from the branch point, short arm first. The far end of
//         the long arm is always vertex n (see long_branch_end).

#include <clustercount/error.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace clustercount {

using vertex_t = std::uint32_t;
using Edge = std::pair<vertex_t, vertex_t>;

class Forest {
 public:
  Forest() = default;

  Forest(std::size_t n, std::vector<Edge> edges, std::vector<std::string> labels = {})
      : adj_(n), edges_(std::move(edges)), labels_(std::move(labels)) {
    if (labels_.empty()) {
      labels_.resize(n);
      for (std::size_t v = 0; v < n; ++v) labels_[v] = std::to_string(v + 1);
    }
    if (labels_.size() != n) throw Error(ErrorKind::InvalidForest, "label count mismatch");
    // union-find rejects cycles and repeated edges
    std::vector<vertex_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](vertex_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (auto& [u, v] : edges_) {
      if (u >= n || v >= n || u == v)
        throw Error(ErrorKind::InvalidForest,
                    "bad edge " + std::to_string(u + 1) + "-" + std::to_string(v + 1));
      const auto ru = find(u), rv = find(v);
      if (ru == rv)
        throw Error(ErrorKind::InvalidForest,
                    "edge " + std::to_string(u + 1) + "-" + std::to_string(v + 1) + " closes a cycle");
      parent[ru] = rv;
      if (u > v) std::swap(u, v);
      adj_[u].push_back(v);
      adj_[v].push_back(u);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
    std::sort(edges_.begin(), edges_.end());
  }

  std::size_t size() const { return adj_.size(); }
  bool empty() const { return adj_.empty(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<vertex_t>& neighbors(vertex_t v) const { return adj_.at(v); }
  std::size_t degree(vertex_t v) const { return adj_.at(v).size(); }
  bool is_leaf(vertex_t v) const { return degree(v) == 1; }
  const std::string& label(vertex_t v) const { return labels_.at(v); }
  const std::vector<std::string>& labels() const { return labels_; }

  bool adjacent(vertex_t u, vertex_t v) const {
    const auto& a = adj_.at(u);
    return std::binary_search(a.begin(), a.end(), v);
  }

  /// Connected components, each sorted; components ordered by smallest vertex.
  std::vector<std::vector<vertex_t>> components() const {
    std::vector<std::vector<vertex_t>> out;
    std::vector<bool> seen(size(), false);
    for (vertex_t s = 0; s < size(); ++s) {
      if (seen[s]) continue;
      std::vector<vertex_t> comp{s};
      seen[s] = true;
      for (std::size_t i = 0; i < comp.size(); ++i)
        for (auto w : adj_[comp[i]])
          if (!seen[w]) {
            seen[w] = true;
            comp.push_back(w);
          }
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
    return out;
  }

  /// Induced subforest on `keep` (renumbered in the given order). Labels are kept.
  Forest induced(const std::vector<vertex_t>& keep) const {
    std::vector<std::int64_t> index(size(), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) index[keep[i]] = static_cast<std::int64_t>(i);
    std::vector<Edge> es;
    for (auto [u, v] : edges_)
      if (index[u] >= 0 && index[v] >= 0)
        es.emplace_back(static_cast<vertex_t>(index[u]), static_cast<vertex_t>(index[v]));
    std::vector<std::string> ls;
    for (auto v : keep) ls.push_back(labels_[v]);
    return Forest(keep.size(), std::move(es), std::move(ls));
  }

  /// Vertices remaining after removing `drop`, in increasing order.
  std::vector<vertex_t> complement(const std::vector<vertex_t>& drop) const {
    std::vector<bool> gone(size(), false);
    for (auto v : drop) gone.at(v) = true;
    std::vector<vertex_t> keep;
    for (vertex_t v = 0; v < size(); ++v)
      if (!gone[v]) keep.push_back(v);
    return keep;
  }

  /// Same shape with default 1-based labels.
  Forest relabeled_default() const { return Forest(size(), edges_); }

 private:
  std::vector<std::vector<vertex_t>> adj_;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
};

/// Disjoint union; vertices of b follow those of a.
inline Forest disjoint_union(const Forest& a, const Forest& b) {
  std::vector<Edge> es = a.edges();
  const auto off = static_cast<vertex_t>(a.size());
  for (auto [u, v] : b.edges()) es.emplace_back(u + off, v + off);
  return Forest(a.size() + b.size(), std::move(es));
}

/// Forest on n vertices from 1-based edge pairs.
inline Forest forest_from_edges(std::size_t n, std::initializer_list<std::pair<int, int>> one_based) {
  std::vector<Edge> es;
  for (auto [u, v] : one_based) es.emplace_back(static_cast<vertex_t>(u - 1), static_cast<vertex_t>(v - 1));
  return Forest(n, std::move(es));
}

// Text format: one edge "u v" per line, or a single "v" declaring a vertex.
// 1-based; '#' starts a comment.
inline Forest read_forest(std::istream& in) {
  std::vector<std::pair<long long, long long>> es;
  long long n = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::vector<long long> nums;
    long long x;
    while (ls >> x) nums.push_back(x);
    if (!ls.eof())
      throw Error(ErrorKind::Parse, "forest line " + std::to_string(lineno) + ": not an integer");
    if (nums.empty()) continue;
    if (nums.size() > 2)
      throw Error(ErrorKind::Parse, "forest line " + std::to_string(lineno) + ": expected 'u v' or 'v'");
    for (auto v : nums) {
      if (v < 1) throw Error(ErrorKind::Parse, "forest line " + std::to_string(lineno) + ": vertex < 1");
      n = std::max(n, v);
    }
    if (nums.size() == 2) es.emplace_back(nums[0], nums[1]);
  }
  std::vector<Edge> edges;
  for (auto [u, v] : es) edges.emplace_back(static_cast<vertex_t>(u - 1), static_cast<vertex_t>(v - 1));
  return Forest(static_cast<std::size_t>(n), std::move(edges));
}

inline Forest read_forest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open forest file " + path);
  return read_forest(in);
}

inline void write_forest(std::ostream& out, const Forest& f) {
  std::vector<bool> touched(f.size(), false);
  for (auto [u, v] : f.edges()) {
    out << u + 1 << ' ' << v + 1 << '\n';
    touched[u] = touched[v] = true;
  }
  for (vertex_t v = 0; v < f.size(); ++v)
    if (!touched[v]) out << v + 1 << '\n';
}

// ---------------------------------------------------------------------------
// Dynkin diagrams

enum class DynkinType { A, D, E };

inline char to_char(DynkinType t) { return t == DynkinType::A ? 'A' : t == DynkinType::D ? 'D' : 'E'; }

inline DynkinType parse_dynkin_type(const std::string& s) {
  if (s == "A" || s == "a") return DynkinType::A;
  if (s == "D" || s == "d") return DynkinType::D;
  if (s == "E" || s == "e") return DynkinType::E;
  throw Error(ErrorKind::UnsupportedType, "unknown Dynkin type '" + s + "'");
}

inline std::string dynkin_name(DynkinType t, int rank) { return std::string(1, to_char(t)) + std::to_string(rank); }

inline void check_rank(DynkinType t, int rank) {
  const bool ok = (t == DynkinType::A && rank >= 0) || (t == DynkinType::D && rank >= 3) ||
                  (t == DynkinType::E && rank >= 6 && rank <= 8);
  if (!ok) throw Error(ErrorKind::BadRank, dynkin_name(t, rank));
}

inline Forest dynkin(DynkinType t, int rank) {
  check_rank(t, rank);
  const auto n = static_cast<vertex_t>(rank);
  std::vector<Edge> es;
  switch (t) {
    case DynkinType::A:
      for (vertex_t i = 1; i < n; ++i) es.emplace_back(i - 1, i);
      break;
    case DynkinType::D:
      es.emplace_back(0, 2);
      es.emplace_back(1, 2);
      for (vertex_t i = 3; i < n; ++i) es.emplace_back(i - 1, i);
      break;
    case DynkinType::E: {
      // breadth-first numbering from the branch point (index 0)
      const std::vector<vertex_t> arm_len{1, 2, n - 4};
      std::vector<vertex_t> tip{0, 0, 0};
      vertex_t next = 1;
      for (vertex_t depth = 0; depth < n - 4; ++depth)
        for (std::size_t a = 0; a < 3; ++a)
          if (depth < arm_len[a]) {
            es.emplace_back(tip[a], next);
            tip[a] = next++;
          }
      break;
    }
  }
  return Forest(n, std::move(es));
}

/// The vertex at the end of the long arm of E_n (0-based index n-1).
inline vertex_t long_branch_end(int rank) {
  check_rank(DynkinType::E, rank);
  return static_cast<vertex_t>(rank - 1);
}

// ---------------------------------------------------------------------------
// Colorings and tilings

enum class Color : std::uint8_t { White, Black };

inline Color opposite(Color c) { return c == Color::White ? Color::Black : Color::White; }

using Coloring = std::vector<Color>;

/// Proper 2-coloring. `anchor` is white; every other component is anchored at
/// its smallest vertex.
inline Coloring bipartite_color(const Forest& f, std::optional<vertex_t> anchor = std::nullopt) {
  Coloring c(f.size(), Color::White);
  std::vector<bool> seen(f.size(), false);
  auto flood = [&](vertex_t s) {
    std::vector<vertex_t> stack{s};
    seen[s] = true;
    c[s] = Color::White;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto w : f.neighbors(v))
        if (!seen[w]) {
          seen[w] = true;
          c[w] = opposite(c[v]);
          stack.push_back(w);
        }
    }
  };
  if (anchor) flood(*anchor);
  for (vertex_t v = 0; v < f.size(); ++v)
    if (!seen[v]) flood(v);
  return c;
}

class DominoTiling {
 public:
  DominoTiling() = default;
  explicit DominoTiling(std::size_t n) : partner_(n) {}

  DominoTiling(const Forest& f, const std::vector<Edge>& dominoes) : partner_(f.size()) {
    for (auto [u, v] : dominoes) add(f, u, v);
  }

  void add(const Forest& f, vertex_t u, vertex_t v) {
    if (!f.adjacent(u, v))
      throw Error(ErrorKind::NotAdjacent,
                  "domino " + std::to_string(u + 1) + "-" + std::to_string(v + 1) + " is not an edge");
    if (partner_[u] || partner_[v])
      throw Error(ErrorKind::InvalidForest, "vertex covered twice by dominoes");
    partner_[u] = v;
    partner_[v] = u;
  }

  std::size_t size() const { return partner_.size(); }
  bool covered(vertex_t v) const { return partner_.at(v).has_value(); }
  std::optional<vertex_t> partner(vertex_t v) const { return partner_.at(v); }

  bool full() const {
    return std::all_of(partner_.begin(), partner_.end(), [](auto& p) { return p.has_value(); });
  }

  std::vector<Edge> dominoes() const {
    std::vector<Edge> out;
    for (vertex_t v = 0; v < partner_.size(); ++v)
      if (partner_[v] && v < *partner_[v]) out.emplace_back(v, *partner_[v]);
    return out;
  }

  std::vector<vertex_t> uncovered() const {
    std::vector<vertex_t> out;
    for (vertex_t v = 0; v < partner_.size(); ++v)
      if (!partner_[v]) out.push_back(v);
    return out;
  }

 private:
  std::vector<std::optional<vertex_t>> partner_;
};

/// A partial tiling in which only leaves (or isolated vertices) stay uncovered.
///
/// Each component is rooted at its smallest vertex and processed bottom-up.
/// A vertex takes one of its uncovered children, preferring internal children,
/// then larger indices. An internal vertex left uncovered is repaired by an
/// alternating path down to a leaf, which then becomes the uncovered vertex.
inline DominoTiling leafy_tiling(const Forest& f) {
  const std::size_t n = f.size();
  DominoTiling t(n);
  std::vector<std::optional<vertex_t>> mate(n);
  std::vector<std::int64_t> parent(n, -1);
  std::vector<std::vector<vertex_t>> children(n);

  auto repair = [&](vertex_t u) {
    // u is uncovered and has children, all of them covered by their own children
    while (f.degree(u) > 1 && !mate[u]) {
      const vertex_t c = children[u].back();
      const vertex_t g = *mate[c];
      mate[u] = c;
      mate[c] = u;
      mate[g].reset();
      u = g;
    }
  };

  for (const auto& comp : f.components()) {
    const vertex_t root = comp.front();
    std::vector<vertex_t> order{root};
    parent[root] = -1;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto v = order[i];
      for (auto w : f.neighbors(v))
        if (static_cast<std::int64_t>(w) != parent[v]) {
          parent[w] = v;
          children[v].push_back(w);
          order.push_back(w);
        }
    }
    for (std::size_t i = order.size(); i-- > 0;) {
      const auto v = order[i];
      std::vector<vertex_t> free;
      for (auto c : children[v])
        if (!mate[c]) free.push_back(c);
      if (free.empty()) continue;
      auto pick = *std::max_element(free.begin(), free.end(), [&](vertex_t a, vertex_t b) {
        const bool ia = f.degree(a) > 1, ib = f.degree(b) > 1;
        if (ia != ib) return !ia;
        return a < b;
      });
      mate[v] = pick;
      mate[pick] = v;
      for (auto c : free)
        if (c != pick) repair(c);
    }
    if (!mate[root]) repair(root);
  }
  for (vertex_t v = 0; v < n; ++v)
    if (mate[v] && v < *mate[v]) t.add(f, v, *mate[v]);
  return t;
}

/// The unique tiling covering exactly the vertices outside `excluded`, if any.
inline std::optional<DominoTiling> perfect_tiling_excluding(const Forest& f,
                                                            const std::vector<vertex_t>& excluded) {
  const std::size_t n = f.size();
  std::vector<bool> alive(n, true);
  for (auto v : excluded) alive.at(v) = false;
  std::vector<std::size_t> deg(n, 0);
  for (vertex_t v = 0; v < n; ++v)
    if (alive[v])
      for (auto w : f.neighbors(v)) deg[v] += alive[w] ? 1 : 0;
  DominoTiling t(n);
  std::set<std::pair<std::size_t, vertex_t>> queue;
  for (vertex_t v = 0; v < n; ++v)
    if (alive[v]) queue.emplace(deg[v], v);
  while (!queue.empty()) {
    auto [d, v] = *queue.begin();
    queue.erase(queue.begin());
    if (d == 0) return std::nullopt;
    if (d > 1) return std::nullopt;  // every vertex has degree >= 2: a forest cannot get here
    vertex_t w = 0;
    for (auto x : f.neighbors(v))
      if (alive[x]) w = x;
    queue.erase({deg[w], w});
    alive[v] = alive[w] = false;
    t.add(f, v, w);
    for (auto x : f.neighbors(w))
      if (alive[x]) {
        queue.erase({deg[x], x});
        queue.emplace(--deg[x], x);
      }
  }
  return t;
}

/// The tiling that brings a Dynkin diagram to its documented normal form:
/// A_n (n odd) and D_n (n odd) leave vertex 1 uncovered, D_n (n even) leaves
/// 1 and 2, E_7 leaves the end of its long arm, everything else is full.
inline DominoTiling dynkin_normal_tiling(DynkinType t, int rank) {
  const Forest f = dynkin(t, rank);
  std::vector<vertex_t> excluded;
  if ((t == DynkinType::A || t == DynkinType::D) && rank % 2 == 1) excluded = {0};
  if (t == DynkinType::D && rank % 2 == 0) excluded = {0, 1};
  if (t == DynkinType::E && rank == 7) excluded = {long_branch_end(7)};
  auto tiling = perfect_tiling_excluding(f, excluded);
  if (!tiling) throw Error(ErrorKind::BadRank, "no normal tiling for " + dynkin_name(t, rank));
  return *tiling;
}

/// Order in which covered vertices of `color` must be flipped over their
/// partners so that later flips never disturb earlier ones.
///
/// Edges inside dominoes run from `color` to the other color, all other
/// edges back. A covered vertex s must be flipped before every covered
/// vertex adjacent to partner(s). Ties are broken by smallest index.
inline std::vector<vertex_t> flip_order(const Forest& f, const DominoTiling& t, const Coloring& c,
                                        Color color = Color::White) {
  const std::size_t n = f.size();
  std::vector<std::size_t> indeg(n, 0);
  std::vector<vertex_t> nodes;
  for (vertex_t s = 0; s < n; ++s)
    if (c[s] == color && t.covered(s)) nodes.push_back(s);
  for (auto s : nodes)
    for (auto u : f.neighbors(*t.partner(s)))
      if (u != s && t.covered(u)) ++indeg[u];
  std::priority_queue<vertex_t, std::vector<vertex_t>, std::greater<>> ready;
  for (auto s : nodes)
    if (indeg[s] == 0) ready.push(s);
  std::vector<vertex_t> order;
  while (!ready.empty()) {
    auto s = ready.top();
    ready.pop();
    order.push_back(s);
    for (auto u : f.neighbors(*t.partner(s)))
      if (u != s && t.covered(u) && --indeg[u] == 0) ready.push(u);
  }
  return order;
}

/// A covered white vertex with no incoming edge in the oriented covered
/// subforest (smallest index among such vertices).
inline vertex_t white_leaf(const Forest& f, const DominoTiling& t, const Coloring& c) {
  const auto order = flip_order(f, t, c, Color::White);
  if (order.empty()) throw Error(ErrorKind::EmptyCoveredSet, "no vertex is covered by a domino");
  return order.front();
}

// ---------------------------------------------------------------------------
// Canonical form

namespace detail {

inline std::string encode_rooted(const Forest& f, const std::vector<std::string>& data, vertex_t v,
                                 std::int64_t parent) {
  std::vector<std::string> kids;
  for (auto w : f.neighbors(v))
    if (static_cast<std::int64_t>(w) != parent) kids.push_back(encode_rooted(f, data, w, v));
  std::sort(kids.begin(), kids.end());
  std::string s = "(";
  s += std::to_string(data[v].size());
  s += ':';
  s += data[v];
  for (auto& k : kids) s += k;
  s += ')';
  return s;
}

inline std::vector<vertex_t> tree_centers(const Forest& f, const std::vector<vertex_t>& comp) {
  if (comp.size() <= 2) return comp;
  std::vector<std::size_t> deg(f.size(), 0);
  std::vector<vertex_t> layer;
  for (auto v : comp) {
    deg[v] = f.degree(v);
    if (deg[v] <= 1) layer.push_back(v);
  }
  std::size_t remaining = comp.size();
  while (remaining > 2) {
    remaining -= layer.size();
    std::vector<vertex_t> next;
    for (auto v : layer)
      for (auto w : f.neighbors(v))
        if (--deg[w] == 1) next.push_back(w);
    layer = std::move(next);
  }
  std::sort(layer.begin(), layer.end());
  return layer;
}

}  // namespace detail

/// Isomorphism-invariant encoding of a forest with per-vertex data.
/// Equal strings iff there is a data-preserving isomorphism.
inline std::string canonical_form(const Forest& f, const std::vector<std::string>& data) {
  if (data.size() != f.size()) throw Error(ErrorKind::InvalidForest, "vertex data size mismatch");
  std::vector<std::string> trees;
  for (const auto& comp : f.components()) {
    std::string best;
    for (auto c : detail::tree_centers(f, comp)) {
      auto s = detail::encode_rooted(f, data, c, -1);
      if (best.empty() || s < best) best = std::move(s);
    }
    trees.push_back(std::move(best));
  }
  std::sort(trees.begin(), trees.end());
  std::string out;
  for (auto& t : trees) out += t;
  return out;
}

inline std::string canonical_form(const Forest& f) {
  return canonical_form(f, std::vector<std::string>(f.size()));
}

}  // namespace clustercount
