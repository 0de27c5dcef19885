#pragma once

// Coefficient maps and the moves that change them without changing the
// variety up to isomorphism: the jump move, tiling-driven normalization and
// the two coefficient transforms attached to removing a leaf.

#include <clustercount/gf.hpp>
#include <clustercount/treegraph.hpp>

#include <algorithm>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

namespace clustercount {

/// Per-vertex coefficients alpha_t.
class CoeffMap {
 public:
  CoeffMap(FieldSpec field, std::vector<code_t> alpha) : field_(std::move(field)), alpha_(std::move(alpha)) {
    for (auto a : alpha_)
      if (a >= field_.q()) throw Error(ErrorKind::Parse, "coefficient code out of range");
  }

  static CoeffMap ones(const FieldSpec& field, std::size_t n) {
    return CoeffMap(field, std::vector<code_t>(n, field.one()));
  }

  const FieldSpec& field() const { return field_; }
  std::size_t size() const { return alpha_.size(); }
  code_t operator[](vertex_t v) const { return alpha_.at(v); }
  void set(vertex_t v, code_t a) { alpha_.at(v) = a; }
  FieldElem at(vertex_t v) const { return field_.elem(alpha_.at(v)); }
  const std::vector<code_t>& values() const { return alpha_; }

  bool all_invertible() const {
    return std::none_of(alpha_.begin(), alpha_.end(), [](code_t a) { return a == 0; });
  }

  CoeffMap restricted(const std::vector<vertex_t>& keep) const {
    std::vector<code_t> out;
    out.reserve(keep.size());
    for (auto v : keep) out.push_back(alpha_.at(v));
    return CoeffMap(field_, std::move(out));
  }

  std::vector<std::string> formatted() const {
    std::vector<std::string> out;
    for (auto a : alpha_) out.push_back(field_.format(a));
    return out;
  }

  friend bool operator==(const CoeffMap& a, const CoeffMap& b) {
    return a.field_ == b.field_ && a.alpha_ == b.alpha_;
  }

 private:
  FieldSpec field_;
  std::vector<code_t> alpha_;
};

inline void require_invertible(const CoeffMap& c) {
  for (vertex_t v = 0; v < c.size(); ++v)
    if (c[v] == 0) throw Error(ErrorKind::ZeroCoefficient, "alpha at vertex " + std::to_string(v + 1) + " is zero");
}

/// Jump move over the edge s-t: alpha_s becomes 1 and its old value divides
/// every other neighbor of t.
inline CoeffMap flip(const Forest& f, const CoeffMap& c, vertex_t s, vertex_t t) {
  if (!f.adjacent(s, t))
    throw Error(ErrorKind::NotAdjacent, std::to_string(s + 1) + " and " + std::to_string(t + 1));
  const code_t as = c[s];
  if (as == 0) throw Error(ErrorKind::ZeroCoefficient, "alpha at vertex " + std::to_string(s + 1) + " is zero");
  const auto& F = c.field();
  const code_t inv = F.inv(as);
  CoeffMap out = c;
  out.set(s, F.one());
  for (auto u : f.neighbors(t))
    if (u != s) out.set(u, F.mul(c[u], inv));
  return out;
}

struct NormalForm {
  Forest forest;
  DominoTiling tiling;
  CoeffMap alpha;
  std::vector<Edge> trace;  // (s, t) pairs in application order
};

/// Flip every covered vertex over its domino partner, white vertices first,
/// each color in flip_order. The result is 1 on all covered vertices.
inline NormalForm normalize(const Forest& f, const DominoTiling& t, const CoeffMap& c) {
  require_invertible(c);
  if (t.size() != f.size() || c.size() != f.size())
    throw Error(ErrorKind::InvalidForest, "tiling/coefficients do not match the forest");
  const auto coloring = bipartite_color(f);
  NormalForm nf{f, t, c, {}};
  for (auto color : {Color::White, Color::Black})
    for (auto s : flip_order(f, t, coloring, color)) {
      const auto partner = *t.partner(s);
      nf.alpha = flip(f, nf.alpha, s, partner);
      nf.trace.emplace_back(s, partner);
    }
  return nf;
}

inline NormalForm normalize(const Forest& f, const CoeffMap& c) { return normalize(f, leafy_tiling(f), c); }

/// The two smaller instances produced by removing the leaf f (neighbor g).
///
/// T' drops f; its coefficients are a one-parameter family alpha'(beta) that
/// multiplies alpha_g by beta. T'' drops f and g; neighbors s of g get
/// -alpha_s / alpha_f.
struct LeafRemoval {
  vertex_t leaf = 0;
  vertex_t neighbor = 0;

  Forest prime;
  std::vector<vertex_t> prime_vertices;  // new index -> old index
  CoeffMap prime_base;
  vertex_t prime_slot = 0;  // index of g inside T'

  Forest doubleprime;
  std::vector<vertex_t> doubleprime_vertices;
  CoeffMap doubleprime_alpha;

  CoeffMap prime_at(code_t beta) const {
    CoeffMap out = prime_base;
    out.set(prime_slot, out.field().mul(out[prime_slot], beta));
    return out;
  }
};

inline LeafRemoval leaf_removal_transforms(const Forest& f, const CoeffMap& c, vertex_t leaf) {
  if (leaf >= f.size() || !f.is_leaf(leaf))
    throw Error(ErrorKind::NotALeaf, "vertex " + std::to_string(leaf + 1) + " is not a leaf");
  const code_t af = c[leaf];
  if (af == 0) throw Error(ErrorKind::ZeroCoefficient, "leaf coefficient is zero");
  const auto& F = c.field();
  const vertex_t g = f.neighbors(leaf).front();

  auto keep1 = f.complement({leaf});
  auto keep2 = f.complement({leaf, g});
  std::vector<code_t> a2;
  const code_t minus_inv = F.neg(F.inv(af));
  for (auto s : keep2) a2.push_back(f.adjacent(s, g) ? F.mul(c[s], minus_inv) : c[s]);

  const auto slot = static_cast<vertex_t>(std::find(keep1.begin(), keep1.end(), g) - keep1.begin());
  return LeafRemoval{leaf,
                     g,
                     f.induced(keep1),
                     keep1,
                     c.restricted(keep1),
                     slot,
                     f.induced(keep2),
                     keep2,
                     CoeffMap(F, std::move(a2))};
}

// ---------------------------------------------------------------------------
// Parsing

/// One value: integer (reduced mod p) or comma-separated coefficient vector.
inline code_t parse_field_value(const FieldSpec& F, const std::string& text) {
  std::vector<long long> parts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      parts.push_back(std::stoll(tok, &pos));
      if (tok.find_first_not_of(" \t", pos) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "bad field value '" + text + "'");
    }
  }
  if (parts.empty()) throw Error(ErrorKind::Parse, "empty field value");
  if (parts.size() > 1 && F.is_prime_field())
    throw Error(ErrorKind::Parse, "vector value '" + text + "' in a prime field");
  return F.from_coords(parts);
}

/// Lines "v value"; vertices not listed default to 1.
inline CoeffMap read_coeff_map(std::istream& in, const FieldSpec& F, std::size_t n) {
  CoeffMap c = CoeffMap::ones(F, n);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    long long v;
    std::string value;
    if (!(ls >> v)) continue;
    if (!(ls >> value) || v < 1 || static_cast<std::size_t>(v) > n)
      throw Error(ErrorKind::Parse, "coefficient line " + std::to_string(lineno));
    c.set(static_cast<vertex_t>(v - 1), parse_field_value(F, value));
  }
  return c;
}

/// Coefficient list for vertices 1, 2, ...; missing trailing entries are 1.
/// Entries are separated by ',' in prime fields and by ';' in extension
/// fields, where each entry is itself a comma-separated vector.
inline CoeffMap parse_alpha_list(const std::string& text, const FieldSpec& F, std::size_t n) {
  CoeffMap c = CoeffMap::ones(F, n);
  if (text.empty()) return c;
  const char sep = F.is_prime_field() ? ',' : ';';
  std::stringstream ss(text);
  std::string tok;
  vertex_t v = 0;
  while (std::getline(ss, tok, sep)) {
    if (v >= n) throw Error(ErrorKind::Parse, "more coefficients than vertices");
    c.set(v++, parse_field_value(F, tok));
  }
  return c;
}

}  // namespace clustercount
