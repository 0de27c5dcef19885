#pragma once

// Consistency batteries. Each one cross-checks independent counting routes
// (exhaustion, leaf-removal recursion, closed forms) or structural claims
// (fibration, smoothness, E-polynomials) over a grid of small cases and
// reports the first failing case as a witness.

#include <clustercount/closedform.hpp>
#include <clustercount/coeffreduce.hpp>
#include <clustercount/enumerate.hpp>
#include <clustercount/qinterp.hpp>
#include <clustercount/recursion.hpp>
#include <clustercount/singular.hpp>
#include <clustercount/treegraph.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace clustercount::checks {

struct CheckResult {
  std::string name;
  bool ok = true;
  std::size_t cases = 0;
  std::string witness;
  double elapsed_ms = 0;

  void fail(const std::string& why) {
    if (ok) witness = why;
    ok = false;
  }
};

namespace detail {

inline std::string case_name(const VarietyInstance& v) {
  return v.descriptor() + " over " + v.field().name();
}

/// brute == recursion == formula on one normal-form Dynkin instance.
inline std::string three_way(DynkinType t, int rank, const CoeffMap& c, const EnumOptions& opt) {
  const auto v = dynkin_instance(t, rank, c);
  const auto b = brute_count(v, opt).count;
  const auto r = recursive_count(v).count;
  const auto f = formula_count(t, rank, c);
  if (b == r && r == f.count) return {};
  std::ostringstream os;
  os << case_name(v) << ": brute=" << b << " recursion=" << r << " formula=" << f.count << " (" << f.branch << ")";
  return os.str();
}

inline std::vector<CoeffMap> all_normal_forms(DynkinType t, int rank, const FieldSpec& F) {
  const auto free = normal_form_free_vertices(t, rank);
  std::vector<CoeffMap> out;
  std::vector<code_t> vals(free.size(), 1);
  while (true) {
    CoeffMap c = CoeffMap::ones(F, static_cast<std::size_t>(rank));
    for (std::size_t i = 0; i < free.size(); ++i) c.set(free[i], vals[i]);
    out.push_back(std::move(c));
    std::size_t i = free.size();
    while (i > 0) {
      if (++vals[i - 1] < F.q()) break;
      vals[i - 1] = 1;
      --i;
    }
    if (i == 0) return out;
  }
}

template <class Body>
CheckResult timed(const std::string& name, Body&& body) {
  ::clustercount::detail::Elapsed timer;
  CheckResult r{name};
  try {
    body(r);
  } catch (const std::exception& e) {
    r.fail(std::string("exception: ") + e.what());
  }
  r.elapsed_ms = timer.ms();
  return r;
}

inline Forest random_tree(std::size_t n, std::mt19937_64& rng) {
  std::vector<vertex_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Edge> es;
  for (vertex_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<vertex_t> pick(0, v - 1);
    es.emplace_back(perm[v], perm[pick(rng)]);
  }
  return Forest(n, std::move(es));
}

inline CoeffMap random_invertible(const FieldSpec& F, std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<code_t> pick(1, F.q() - 1);
  std::vector<code_t> a(n);
  for (auto& x : a) x = pick(rng);
  return CoeffMap(F, std::move(a));
}

}  // namespace detail

/// Type A, n = 0..8, q in {2,3,4,5,7}, every normal-form alpha: three-way
/// agreement, and for odd n the special alpha adds exactly q^((n+1)/2).
inline CheckResult type_a_battery(const EnumOptions& opt = {}) {
  return detail::timed("type-A formula battery", [&](CheckResult& r) {
    for (std::uint64_t q : {2, 3, 4, 5, 7}) {
      const auto F = FieldSpec::of_order(q);
      for (int n = 0; n <= 8; ++n) {
        std::optional<Count> generic, special;
        for (const auto& c : detail::all_normal_forms(DynkinType::A, n, F)) {
          ++r.cases;
          if (auto w = detail::three_way(DynkinType::A, n, c, opt); !w.empty()) r.fail(w);
          if (n % 2 == 1) {
            const auto b = brute_count(dynkin_instance(DynkinType::A, n, c), opt).count;
            (c[0] == F.minus_one_pow((n + 1) / 2) ? special : generic) = b;
          }
        }
        if (n % 2 == 1 && generic && special && *special - *generic != ipow(q, static_cast<unsigned>((n + 1) / 2)))
          r.fail("A" + std::to_string(n) + " q=" + std::to_string(q) + ": special - generic = " +
                 to_string(*special - *generic));
      }
    }
  });
}

/// Type D, n in {4,5,6}, q in {2,3,5}, all (alpha, beta): three-way
/// agreement and all six printed cases reached.
inline CheckResult type_d_battery(const EnumOptions& opt = {}) {
  return detail::timed("type-D formula battery", [&](CheckResult& r) {
    std::set<std::string> seen;
    for (std::uint64_t q : {2, 3, 5}) {
      const auto F = FieldSpec::of_order(q);
      for (int n : {4, 5, 6})
        for (const auto& c : detail::all_normal_forms(DynkinType::D, n, F)) {
          ++r.cases;
          if (auto w = detail::three_way(DynkinType::D, n, c, opt); !w.empty()) r.fail(w);
          auto id = branch_id(formula_count(DynkinType::D, n, c).branch);
          if (id == "D-even-beta=(-1)^(n/2)!=alpha") id = "D-even-alpha=(-1)^(n/2)!=beta";
          seen.insert(id);
        }
    }
    for (const char* b : {"D-odd-generic", "D-odd-special", "D-even-generic", "D-even-alpha=beta!=(-1)^(n/2)",
                          "D-even-alpha=(-1)^(n/2)!=beta", "D-even-alpha=beta=(-1)^(n/2)"})
      if (!seen.count(b)) r.fail(std::string("branch never exercised: ") + b);
  });
}

/// E6, E7 over q in {2,3,5} and E8 over q in {2,3,5}: three-way agreement and
/// agreement with the four printed polynomials.
inline CheckResult type_e_battery(const EnumOptions& opt = {}) {
  return detail::timed("type-E battery", [&](CheckResult& r) {
    // ascending coefficients
    const auto e6 = QPolynomial::from_integers({1, 0, 1, 1, 1, 0, 1});
    const auto e7 = QPolynomial::from_integers({-1, 0, -1, 0, 0, 1, 0, 1});
    const auto e7m = QPolynomial::from_integers({-1, 0, -1, 1, 0, 2, 0, 1});
    const auto e8 = QPolynomial::from_integers({1, 0, 1, 1, 1, 1, 1, 0, 1});
    for (int rank : {6, 7, 8})
      for (std::uint64_t q : {2, 3, 5}) {
        const auto F = FieldSpec::of_order(q);
        for (const auto& c : detail::all_normal_forms(DynkinType::E, rank, F)) {
          ++r.cases;
          if (auto w = detail::three_way(DynkinType::E, rank, c, opt); !w.empty()) r.fail(w);
          const QPolynomial& expect =
              rank == 6 ? e6 : rank == 8 ? e8 : (c[long_branch_end(7)] == F.neg(F.one()) ? e7m : e7);
          const auto b = brute_count(dynkin_instance(DynkinType::E, rank, c), opt).count;
          if (Rational(b) != expect.eval(Rational(q)))
            r.fail(detail::case_name(dynkin_instance(DynkinType::E, rank, c)) + ": brute " + to_string(b) +
                   " vs printed polynomial " + expect.str());
        }
      }
  });
}

/// Randomized trees (<= 7 vertices): flip and normalize preserve brute counts,
/// and normalization leaves 1 on every covered vertex.
inline CheckResult reduction_soundness(std::size_t trials = 500, std::uint64_t seed = 20261016,
                                       const EnumOptions& opt = {}) {
  return detail::timed("reduction soundness", [&](CheckResult& r) {
    std::mt19937_64 rng(seed);
    const std::vector<FieldSpec> fields{FieldSpec::make(2), FieldSpec::make(3), FieldSpec::make(5)};
    for (std::size_t i = 0; i < trials; ++i) {
      ++r.cases;
      const auto& F = fields[i % fields.size()];
      const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 7)(rng);
      const Forest f = detail::random_tree(n, rng);
      const CoeffMap c = detail::random_invertible(F, n, rng);
      const VarietyInstance v{f, c};
      const Count base = brute_count(v, opt).count;
      std::ostringstream where;
      where << "trial " << i << " n=" << n << " " << detail::case_name(v);
      if (!f.edges().empty()) {
        auto e = f.edges()[std::uniform_int_distribution<std::size_t>(0, f.edges().size() - 1)(rng)];
        if (rng() & 1) std::swap(e.first, e.second);
        const Count flipped = brute_count({f, flip(f, c, e.first, e.second)}, opt).count;
        if (flipped != base) r.fail(where.str() + ": flip changes the count");
      }
      const auto nf = normalize(f, c);
      for (vertex_t u = 0; u < n; ++u)
        if (nf.tiling.covered(u) && nf.alpha[u] != F.one()) r.fail(where.str() + ": covered vertex not 1");
      if (brute_count({f, nf.alpha}, opt).count != base) r.fail(where.str() + ": normalize changes the count");
    }
  });
}

/// Y_{A_n} and Z_{A_n} counts for n <= 5, q in {2,3,5}.
inline CheckResult yz_identities(const EnumOptions& opt = {}) {
  return detail::timed("Y/Z identities", [&](CheckResult& r) {
    for (std::uint64_t q : {2, 3, 5}) {
      const auto F = FieldSpec::make(q);
      std::vector<Count> y;
      for (int n = 0; n <= 5; ++n) {
        ++r.cases;
        y.push_back(count_Y(n, F, opt).count);
        const std::string at = " n=" + std::to_string(n) + " q=" + std::to_string(q);
        if (y.back() != formula_Y(n, q)) r.fail("Y" + at + ": " + to_string(y.back()) + " vs " + to_string(formula_Y(n, q)));
        if (n >= 1) {
          const auto z = count_Z(n, F, opt).count;
          if (z != formula_Z(n, q)) r.fail("Z" + at + ": " + to_string(z) + " vs q^(n+1)");
          if (z != y[n] + y[n - 1]) r.fail("Z" + at + ": not Y(n) + Y(n-1)");
        }
      }
    }
  });
}

/// Shift-projection Z_{A_{n+1}} -> Z_{A_n}, n in {1,2,3}, q in {2,3}.
inline CheckResult fibration(const EnumOptions& opt = {}) {
  return detail::timed("Z fibration", [&](CheckResult& r) {
    for (std::uint64_t q : {2, 3})
      for (int n : {1, 2, 3}) {
        ++r.cases;
        const auto rep = check_z_fibration(n, FieldSpec::make(q), opt);
        if (!rep.ok) r.fail("n=" + std::to_string(n) + " q=" + std::to_string(q) + ": " + rep.witness);
      }
  });
}

/// Singular points of X_n(alpha), n <= 6, q in {2,3,5,7}: none except for n
/// odd with alpha = (-1)^((n+1)/2), where there is exactly one and its
/// odd-index coordinates vanish.
inline CheckResult smoothness(const EnumOptions& opt = {}) {
  return detail::timed("smoothness classification", [&](CheckResult& r) {
    for (std::uint64_t q : {2, 3, 5, 7}) {
      const auto F = FieldSpec::make(q);
      for (int n = 0; n <= 6; ++n)
        for (const auto& c : detail::all_normal_forms(DynkinType::A, n, F)) {
          ++r.cases;
          const auto v = dynkin_instance(DynkinType::A, n, c);
          const auto sing = singular_points(v, opt);
          const bool special = n % 2 == 1 && c[0] == F.minus_one_pow((n + 1) / 2);
          if (sing.size() != (special ? 1u : 0u)) {
            r.fail(detail::case_name(v) + ": " + std::to_string(sing.size()) + " singular points");
            continue;
          }
          if (special)
            for (int i = 0; i < n; i += 2)  // index i is vertex i+1, odd
              if (sing[0].x[i] != 0 || sing[0].xp[i] != 0)
                r.fail(detail::case_name(v) + ": singular point has nonzero odd coordinate");
        }
    }
  });
}

/// Alternating weight sums of the type-A cohomology tables equal the counts.
inline CheckResult cohomology() {
  return detail::timed("cohomology consistency", [&](CheckResult& r) {
    for (std::uint64_t q : {2, 3, 5, 7}) {
      for (int n = 0; n <= 6; ++n) {
        ++r.cases;
        const auto e = epoly_check(CohomologySpace::Y, n, q);
        if (!e.ok) r.fail("Y_A" + std::to_string(n) + " q=" + std::to_string(q) + ": " + to_string(e.epoly) +
                          " vs " + to_string(e.count));
      }
      for (int n = 0; n <= 8; n += 2) {
        ++r.cases;
        const auto e = epoly_check(CohomologySpace::XEven, n, q);
        if (!e.ok) r.fail("X_" + std::to_string(n) + "(1) q=" + std::to_string(q) + ": " + to_string(e.epoly) +
                          " vs " + to_string(e.count));
      }
    }
  });
}

struct InterpolationCase {
  DynkinType type;
  int rank;
  std::string policy;
  QPolynomial expected;
};

/// Expected count polynomials, expanded by hand (ascending coefficients).
inline std::vector<InterpolationCase> interpolation_cases() {
  using P = QPolynomial;
  return {
      {DynkinType::A, 2, "generic", P::from_integers({1, 0, 1})},
      {DynkinType::A, 3, "generic", P::from_integers({-1, 0, 0, 1})},
      {DynkinType::A, 3, "special", P::from_integers({-1, 0, 1, 1})},
      {DynkinType::D, 4, "generic", P::from_integers({1, 0, -2, 0, 1})},
      {DynkinType::D, 5, "generic", P::from_integers({-1, 0, 0, 0, 0, 1})},
      {DynkinType::E, 6, "generic", P::from_integers({1, 0, 1, 1, 1, 0, 1})},
      {DynkinType::E, 7, "generic", P::from_integers({-1, 0, -1, 0, 0, 1, 0, 1})},
      {DynkinType::E, 7, "special", P::from_integers({-1, 0, -1, 1, 0, 2, 0, 1})},
      {DynkinType::E, 8, "generic", P::from_integers({1, 0, 1, 1, 1, 1, 1, 0, 1})},
  };
}

/// Interpolated count polynomials with zero held-out residual.
inline CheckResult interpolation() {
  return detail::timed("interpolation", [&](CheckResult& r) {
    for (const auto& ic : interpolation_cases()) {
      ++r.cases;
      const std::string name = dynkin_name(ic.type, ic.rank) + " " + ic.policy;
      try {
        FitOptions fo;
        fo.degree = ic.rank + 1;
        fo.held_out = 2;
        const auto rep = fit_and_verify(dynkin_branch_builder(ic.type, ic.rank, ic.policy), fo);
        if (!(rep.poly == ic.expected))
          r.fail(name + ": fitted " + rep.poly.str() + ", expected " + ic.expected.str());
        if (rep.held_out.size() < 2) r.fail(name + ": fewer than two held-out primes");
      } catch (const Error& e) {
        r.fail(name + ": " + e.what());
      }
    }
  });
}

/// Counts over F_4 and F_9 match the closed forms evaluated at q = 4, 9 for
/// A_n (n <= 4) and D_4.
inline CheckResult prime_powers(const EnumOptions& opt = {}) {
  return detail::timed("prime-power sanity", [&](CheckResult& r) {
    for (std::uint64_t q : {4, 9}) {
      const auto F = FieldSpec::of_order(q);
      auto run = [&](DynkinType t, int rank) {
        for (const auto& c : detail::all_normal_forms(t, rank, F)) {
          ++r.cases;
          if (auto w = detail::three_way(t, rank, c, opt); !w.empty()) r.fail(w);
        }
      };
      for (int n = 0; n <= 4; ++n) run(DynkinType::A, n);
      run(DynkinType::D, 4);
    }
  });
}

inline std::map<std::string, std::function<CheckResult()>> suites(const EnumOptions& opt = {}) {
  return {
      {"typeA", [=] { return type_a_battery(opt); }},
      {"typeD", [=] { return type_d_battery(opt); }},
      {"typeE", [=] { return type_e_battery(opt); }},
      {"reduction", [=] { return reduction_soundness(500, 20261016, opt); }},
      {"yz", [=] { return yz_identities(opt); }},
      {"fibration", [=] { return fibration(opt); }},
      {"smoothness", [=] { return smoothness(opt); }},
      {"epoly", [] { return cohomology(); }},
      {"interpolation", [] { return interpolation(); }},
      {"primepower", [=] { return prime_powers(opt); }},
  };
}

/// Suite names in the order the full battery runs them.
inline std::vector<std::string> suite_order() {
  return {"typeA", "typeD", "typeE", "reduction", "yz", "fibration", "smoothness", "epoly", "interpolation",
          "primepower"};
}

}  // namespace clustercount::checks
