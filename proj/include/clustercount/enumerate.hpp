#pragma once

// Exhaustive point counting over F_q.
//
// Only the x-coordinates are enumerated. Given x, the equation at vertex t,
//   x_t x'_t = 1 + alpha_t prod_{s-t} x_s,
// fixes x'_t when x_t != 0, leaves x'_t free when x_t = 0 and the right-hand
// side vanishes, and has no solution otherwise. An assignment therefore
// contributes q^(number of free vertices) points, or nothing.

#include <clustercount/coeffreduce.hpp>
#include <clustercount/count.hpp>
#include <clustercount/gf.hpp>
#include <clustercount/treegraph.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace clustercount {

struct VarietyInstance {
  Forest forest;
  CoeffMap alpha;
  // Z-variant: this vertex may carry alpha = 0.
  std::optional<vertex_t> zero_allowed{};
  std::string name{};

  const FieldSpec& field() const { return alpha.field(); }

  void validate() const {
    if (alpha.size() != forest.size())
      throw Error(ErrorKind::InvalidForest, "coefficient count does not match vertex count");
    for (vertex_t v = 0; v < alpha.size(); ++v)
      if (alpha[v] == 0 && zero_allowed != v)
        throw Error(ErrorKind::ZeroCoefficient, "alpha at vertex " + std::to_string(v + 1) + " is zero");
  }

  std::string descriptor() const {
    std::ostringstream os;
    os << (name.empty() ? "forest" + std::to_string(forest.size()) : name) << "(";
    const auto vals = alpha.formatted();
    for (std::size_t i = 0; i < vals.size(); ++i) os << (i ? ";" : "") << vals[i];
    os << ")";
    return os.str();
  }
};

inline VarietyInstance dynkin_instance(DynkinType t, int rank, CoeffMap alpha) {
  return VarietyInstance{dynkin(t, rank), std::move(alpha), std::nullopt, dynkin_name(t, rank)};
}

struct CountReport {
  std::string variety;
  std::uint32_t q = 0;
  std::string method;
  Count count;
  std::string branch;
  double elapsed_ms = 0;
};

inline std::uint64_t default_budget() {
  if (const char* env = std::getenv("CLUSTERCOUNT_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
    }
  }
  return 1'000'000'000ULL;
}

struct EnumOptions {
  std::uint64_t budget = default_budget();
  unsigned jobs = 0;  // 0: hardware concurrency
  std::uint64_t max_points = 20'000'000ULL;
};

/// Restrict enumeration to x_v = 0 (zero = true) or x_v != 0.
struct Locus {
  vertex_t vertex;
  bool zero;
};

struct PointRecord {
  std::vector<code_t> x;
  std::vector<code_t> xp;

  friend bool operator==(const PointRecord&, const PointRecord&) = default;
  friend auto operator<=>(const PointRecord&, const PointRecord&) = default;
};

namespace detail {

struct Elapsed {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
};

/// n * q^n, saturating.
inline std::uint64_t enumeration_cost(std::size_t n, std::uint32_t q) {
  unsigned __int128 c = std::max<std::size_t>(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    c *= q;
    if (c > ~std::uint64_t{0}) return ~std::uint64_t{0};
  }
  return static_cast<std::uint64_t>(c);
}

inline void check_budget(std::size_t n, std::uint32_t q, std::uint64_t budget) {
  const auto cost = enumeration_cost(n, q);
  if (cost > budget)
    throw Error(ErrorKind::BudgetExceeded, "estimated cost n*q^n = " + std::to_string(cost) +
                                               " exceeds budget " + std::to_string(budget));
}

inline unsigned resolve_jobs(unsigned jobs) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  return jobs;
}

// Flat adjacency for the inner loop.
struct Kernel {
  const FieldSpec& F;
  std::size_t n;
  std::vector<code_t> alpha;
  std::vector<std::size_t> offs;
  std::vector<vertex_t> nbrs;
  std::optional<Locus> locus;

  Kernel(const VarietyInstance& v, std::optional<Locus> l) : F(v.field()), n(v.forest.size()), locus(l) {
    alpha = v.alpha.values();
    offs.push_back(0);
    for (vertex_t t = 0; t < n; ++t) {
      for (auto s : v.forest.neighbors(t)) nbrs.push_back(s);
      offs.push_back(nbrs.size());
    }
  }

  code_t rhs(const std::vector<code_t>& x, vertex_t t) const {
    code_t prod = alpha[t];
    for (std::size_t i = offs[t]; i < offs[t + 1] && prod != 0; ++i) prod = F.mul(prod, x[nbrs[i]]);
    return F.add(F.one(), prod);
  }

  // Number of free x' coordinates, or -1 if the assignment has no points.
  int free_count(const std::vector<code_t>& x) const {
    if (locus && ((x[locus->vertex] == 0) != locus->zero)) return -1;
    int free = 0;
    for (vertex_t t = 0; t < n; ++t) {
      if (x[t] != 0) continue;
      if (rhs(x, t) != 0) return -1;
      ++free;
    }
    return free;
  }
};

inline void decode(std::uint64_t index, std::uint32_t q, std::vector<code_t>& x) {
  for (std::size_t i = x.size(); i-- > 0;) {
    x[i] = static_cast<code_t>(index % q);
    index /= q;
  }
}

inline void advance(std::uint32_t q, std::vector<code_t>& x) {
  for (std::size_t i = x.size(); i-- > 0;) {
    if (++x[i] < q) return;
    x[i] = 0;
  }
}

}  // namespace detail

/// Exact number of F_q-points by exhaustion over the q^n x-assignments.
inline CountReport brute_count(const VarietyInstance& v, const EnumOptions& opt = {},
                               std::optional<Locus> locus = std::nullopt) {
  detail::Elapsed timer;
  v.validate();
  const auto& F = v.field();
  const std::size_t n = v.forest.size();
  const std::uint32_t q = F.q();
  detail::check_budget(n, q, opt.budget);
  const detail::Kernel kernel(v, locus);

  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= q;
  const unsigned jobs = static_cast<unsigned>(std::min<std::uint64_t>(detail::resolve_jobs(opt.jobs), total));

  // histogram of assignments by number of free x' coordinates
  std::vector<std::vector<std::uint64_t>> hist(jobs, std::vector<std::uint64_t>(n + 1, 0));
  auto work = [&](unsigned j) {
    const std::uint64_t lo = total * j / jobs, hi = total * (j + 1) / jobs;
    std::vector<code_t> x(n);
    detail::decode(lo, q, x);
    for (std::uint64_t i = lo; i < hi; ++i) {
      const int free = kernel.free_count(x);
      if (free >= 0) ++hist[j][free];
      detail::advance(q, x);
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work, j);
    for (auto& th : pool) th.join();
  }
  Count count = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    std::uint64_t h = 0;
    for (unsigned j = 0; j < jobs; ++j) h += hist[j][k];
    count += Count(h) * ipow(q, static_cast<unsigned>(k));
  }
  return CountReport{v.descriptor(), q, "brute", count, "", timer.ms()};
}

/// Every point, ordered lexicographically by x then x'.
inline std::vector<PointRecord> brute_points(const VarietyInstance& v, const EnumOptions& opt = {}) {
  v.validate();
  const auto& F = v.field();
  const std::size_t n = v.forest.size();
  const std::uint32_t q = F.q();
  detail::check_budget(n, q, opt.budget);
  const detail::Kernel kernel(v, std::nullopt);

  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= q;
  std::vector<PointRecord> out;
  std::vector<code_t> x(n, 0);
  for (std::uint64_t i = 0; i < total; ++i, detail::advance(q, x)) {
    if (kernel.free_count(x) < 0) continue;
    std::vector<code_t> xp(n, 0);
    std::vector<vertex_t> free;
    for (vertex_t t = 0; t < n; ++t) {
      if (x[t] == 0)
        free.push_back(t);
      else
        xp[t] = F.div(kernel.rhs(x, t), x[t]);
    }
    // odometer over the free x' coordinates
    while (true) {
      out.push_back({x, xp});
      if (out.size() > opt.max_points)
        throw Error(ErrorKind::BudgetExceeded, "point listing exceeds " + std::to_string(opt.max_points));
      std::size_t k = free.size();
      while (k > 0) {
        auto t = free[k - 1];
        if (++xp[t] < q) break;
        xp[t] = 0;
        --k;
      }
      if (k == 0) break;
    }
  }
  return out;
}

/// Independent re-check of the defining equations at a point.
inline bool satisfies_equations(const VarietyInstance& v, const PointRecord& p) {
  const auto& F = v.field();
  const std::size_t n = v.forest.size();
  if (p.x.size() != n || p.xp.size() != n) return false;
  for (vertex_t t = 0; t < n; ++t) {
    FieldElem rhs = v.alpha.at(t);
    for (auto s : v.forest.neighbors(t)) rhs = rhs * F.elem(p.x[s]);
    rhs = rhs + F.elem(F.one());
    if (!(F.elem(p.x[t]) * F.elem(p.xp[t]) == rhs)) return false;
  }
  return true;
}

/// X_{A_n}(alpha, 1, ..., 1); alpha = 0 is accepted (Z-variant).
inline VarietyInstance type_a_fiber(int n, const FieldSpec& F, code_t alpha) {
  CoeffMap c = CoeffMap::ones(F, static_cast<std::size_t>(n));
  if (n > 0) c.set(0, alpha);
  VarietyInstance v = dynkin_instance(DynkinType::A, n, std::move(c));
  if (n > 0) v.zero_allowed = 0;
  return v;
}

/// Points of Y_{A_n}: the union of X_{A_n}(alpha, 1, ..., 1) over invertible alpha.
inline CountReport count_Y(int n, const FieldSpec& F, const EnumOptions& opt = {}) {
  detail::Elapsed timer;
  check_rank(DynkinType::A, n);
  Count total = 0;
  for (code_t a = 1; a < F.q(); ++a) total += brute_count(type_a_fiber(n, F, a), opt).count;
  return CountReport{"Y_A" + std::to_string(n), F.q(), "brute", total, "", timer.ms()};
}

/// Points of Z_{A_n}: the same union over every alpha, zero included.
inline CountReport count_Z(int n, const FieldSpec& F, const EnumOptions& opt = {}) {
  detail::Elapsed timer;
  if (n < 1) throw Error(ErrorKind::BadRank, "Z_A" + std::to_string(n) + " needs n >= 1");
  Count total = 0;
  for (code_t a = 0; a < F.q(); ++a) total += brute_count(type_a_fiber(n, F, a), opt).count;
  return CountReport{"Z_A" + std::to_string(n), F.q(), "brute", total, "", timer.ms()};
}

// A point of Z_{A_n} is (alpha, x_1..x_n, x'_1..x'_n).
using ZPoint = std::vector<code_t>;

inline std::vector<ZPoint> z_points(int n, const FieldSpec& F, const EnumOptions& opt = {}) {
  std::vector<ZPoint> out;
  for (code_t a = 0; a < F.q(); ++a)
    for (auto& p : brute_points(type_a_fiber(n, F, a), opt)) {
      ZPoint z{a};
      z.insert(z.end(), p.x.begin(), p.x.end());
      z.insert(z.end(), p.xp.begin(), p.xp.end());
      out.push_back(std::move(z));
    }
  return out;
}

struct FibrationReport {
  bool ok = true;
  std::size_t source_points = 0;
  std::size_t target_points = 0;
  std::size_t min_fiber = 0;
  std::size_t max_fiber = 0;
  bool surjective = true;
  std::string witness;
};

/// Forget the first equation of Z_{A_{n+1}}: x_1 becomes the new alpha and
/// the remaining coordinates shift down. Checks the image lies in Z_{A_n},
/// the map is onto and every fiber has exactly q points.
inline FibrationReport check_z_fibration(int n, const FieldSpec& F, const EnumOptions& opt = {}) {
  if (n < 1) throw Error(ErrorKind::BadRank, "fibration check needs n >= 1");
  const std::size_t m = static_cast<std::size_t>(n) + 1;
  FibrationReport rep;
  auto describe = [&](const ZPoint& z) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < z.size(); ++i) os << (i ? "," : "") << F.format(z[i]);
    os << ")";
    return os.str();
  };

  std::map<ZPoint, std::size_t> fibers;
  const auto source = z_points(static_cast<int>(m), F, opt);
  rep.source_points = source.size();
  for (const auto& z : source) {
    // z = (alpha, x_1..x_m, x'_1..x'_m)
    ZPoint image{z[1]};
    image.insert(image.end(), z.begin() + 2, z.begin() + 1 + static_cast<std::ptrdiff_t>(m));
    image.insert(image.end(), z.begin() + 2 + static_cast<std::ptrdiff_t>(m), z.end());
    PointRecord rec{{image.begin() + 1, image.begin() + 1 + n}, {image.begin() + 1 + n, image.end()}};
    if (!satisfies_equations(type_a_fiber(n, F, image[0]), rec)) {
      rep.ok = false;
      rep.witness = "image of " + describe(z) + " is not on Z_A" + std::to_string(n);
      return rep;
    }
    ++fibers[image];
  }
  const auto target = z_points(n, F, opt);
  rep.target_points = target.size();
  rep.min_fiber = ~std::size_t{0};
  for (const auto& z : target) {
    auto it = fibers.find(z);
    const std::size_t size = it == fibers.end() ? 0 : it->second;
    rep.min_fiber = std::min(rep.min_fiber, size);
    rep.max_fiber = std::max(rep.max_fiber, size);
    if (size == 0) rep.surjective = false;
    if (size != F.q() && rep.witness.empty())
      rep.witness = "fiber over " + describe(z) + " has " + std::to_string(size) + " points";
  }
  if (fibers.size() != target.size() && rep.witness.empty()) rep.witness = "image contains unlisted points";
  rep.ok = rep.surjective && rep.witness.empty();
  return rep;
}

}  // namespace clustercount
