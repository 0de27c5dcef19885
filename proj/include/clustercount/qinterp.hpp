#pragma once

// Count polynomials in q recovered by exact interpolation through point
// counts at several primes, then checked at held-out primes.

#include <clustercount/closedform.hpp>
#include <clustercount/count.hpp>
#include <clustercount/enumerate.hpp>
#include <clustercount/recursion.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace clustercount {

using Rational = boost::multiprecision::cpp_rational;

/// Polynomial in q with exact rational coefficients, lowest degree first.
class QPolynomial {
 public:
  QPolynomial() = default;
  explicit QPolynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static QPolynomial from_integers(std::initializer_list<long long> ascending) {
    std::vector<Rational> c;
    for (auto x : ascending) c.emplace_back(x);
    return QPolynomial(std::move(c));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coefficients() const { return c_; }
  Rational coefficient(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }

  Rational eval(const Rational& x) const {
    Rational r = 0;
    for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
  }

  bool integral() const {
    for (const auto& x : c_)
      if (boost::multiprecision::denominator(x) != 1) return false;
    return true;
  }

  /// Exact decimal strings ("a/b" for non-integers), ascending degree.
  std::vector<std::string> coefficient_strings() const {
    std::vector<std::string> out;
    for (const auto& x : c_) out.push_back(x.str());
    if (out.empty()) out.push_back("0");
    return out;
  }

  /// "q^4 - 2*q^2 + 1" (descending) or "1 - 2*q^2 + q^4" (ascending).
  std::string str(bool descending = true) const {
    if (c_.empty()) return "0";
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i] != 0) order.push_back(i);
    if (descending) std::reverse(order.begin(), order.end());
    std::ostringstream os;
    bool first = true;
    for (auto d : order) {
      Rational a = c_[d];
      const bool neg = a < 0;
      if (neg) a = -a;
      if (first)
        os << (neg ? "-" : "");
      else
        os << (neg ? " - " : " + ");
      first = false;
      const bool unit = a == 1;
      if (d == 0) {
        os << a.str();
        continue;
      }
      if (!unit) os << a.str() << "*";
      os << "q";
      if (d > 1) os << "^" << d;
    }
    return os.str();
  }

  friend bool operator==(const QPolynomial&, const QPolynomial&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

using Sample = std::pair<std::uint64_t, Count>;

/// Lagrange interpolant through the samples (Newton form, then expanded).
inline QPolynomial interpolate_counts(const std::vector<Sample>& samples) {
  if (samples.size() < 2) throw std::invalid_argument("interpolation needs at least two samples");
  std::set<std::uint64_t> seen;
  for (auto& s : samples)
    if (!seen.insert(s.first).second)
      throw Error(ErrorKind::DuplicateAbscissa, "q = " + std::to_string(s.first) + " appears twice");
  const std::size_t m = samples.size();
  std::vector<Rational> xs, dd;
  for (auto& [x, y] : samples) {
    xs.emplace_back(x);
    dd.emplace_back(y);
  }
  for (std::size_t j = 1; j < m; ++j)
    for (std::size_t i = m - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
  // Horner in the Newton basis
  std::vector<Rational> poly{dd[m - 1]};
  for (std::size_t k = m - 1; k-- > 0;) {
    std::vector<Rational> next(poly.size() + 1, Rational(0));
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i];
      next[i] -= poly[i] * xs[k];
    }
    next[0] += dd[k];
    poly = std::move(next);
  }
  return QPolynomial(std::move(poly));
}

/// Builds the instance to count over a given prime field, or nullopt when the
/// requested parameter class is not available there.
using InstanceBuilder = std::function<std::optional<VarietyInstance>(const FieldSpec&)>;

struct FitOptions {
  int degree = 1;
  int held_out = 2;
  std::string method = "recursion";  // or "brute"
  EnumOptions enum_options{};
};

struct HeldOutResult {
  std::uint64_t q;
  Count count;
  Rational predicted;
  Rational residual() const { return Rational(count) - predicted; }
};

struct FitReport {
  QPolynomial poly;
  std::vector<Sample> samples;
  std::vector<HeldOutResult> held_out;
  std::vector<std::uint64_t> skipped;  // inadmissible primes
  bool integral = false;
};

inline std::uint64_t next_prime(std::uint64_t p) {
  do ++p;
  while (!detail::is_prime_u64(p));
  return p;
}

/// Counts at the first degree+1 admissible primes >= 3, interpolates, and
/// verifies at `held_out` further admissible primes. Throws HeldOutMismatch
/// if a held-out count disagrees or the coefficients are not integers.
inline FitReport fit_and_verify(const InstanceBuilder& builder, const FitOptions& opt) {
  FitReport rep;
  auto count_at = [&](const VarietyInstance& v) -> Count {
    if (opt.method == "brute") return brute_count(v, opt.enum_options).count;
    return recursive_count(v).count;
  };
  std::uint64_t p = 2;
  const std::size_t need = static_cast<std::size_t>(opt.degree) + 1;
  while (rep.samples.size() < need + static_cast<std::size_t>(opt.held_out)) {
    p = next_prime(p);
    const auto F = FieldSpec::make(p);
    const auto inst = builder(F);
    if (!inst) {
      rep.skipped.push_back(p);
      if (p > 10'000) throw Error(ErrorKind::HeldOutMismatch, "no admissible primes for this parameter class");
      continue;
    }
    rep.samples.emplace_back(p, count_at(*inst));
  }
  std::vector<Sample> fit(rep.samples.begin(), rep.samples.begin() + static_cast<std::ptrdiff_t>(need));
  rep.poly = opt.degree == 0 ? QPolynomial({Rational(fit.front().second)}) : interpolate_counts(fit);
  rep.integral = rep.poly.integral();
  std::ostringstream bad;
  for (std::size_t i = need; i < rep.samples.size(); ++i) {
    const auto& [q, c] = rep.samples[i];
    HeldOutResult h{q, c, rep.poly.eval(Rational(q))};
    if (h.residual() != 0) bad << " q=" << q << " count=" << c << " predicted=" << h.predicted;
    rep.held_out.push_back(h);
  }
  if (!bad.str().empty())
    throw Error(ErrorKind::HeldOutMismatch, "fitted " + rep.poly.str() + " fails at" + bad.str());
  if (!rep.integral) throw Error(ErrorKind::HeldOutMismatch, "non-integral count polynomial " + rep.poly.str());
  rep.samples.resize(need);
  return rep;
}

/// Branch ids of the closed form for one Dynkin diagram.
inline std::vector<std::string> known_branches(DynkinType t, int rank) {
  check_rank(t, rank);
  switch (t) {
    case DynkinType::A:
      if (rank % 2 == 0) return {"A-even"};
      return {"A-odd-generic", "A-odd-special"};
    case DynkinType::D:
      if (rank % 2 == 1) return {"D-odd-generic", "D-odd-special"};
      return {"D-even-generic", "D-even-alpha=beta!=(-1)^(n/2)", "D-even-alpha=(-1)^(n/2)!=beta",
              "D-even-beta=(-1)^(n/2)!=alpha", "D-even-alpha=beta=(-1)^(n/2)"};
    case DynkinType::E:
      if (rank == 7) return {"E7-generic", "E7-special"};
      return {"E" + std::to_string(rank)};
  }
  return {};
}

/// Exact branch id ("A-odd-special", "D-even-generic", ...) for a policy
/// name: "generic", "special", or a branch id itself.
inline std::string branch_for_policy(DynkinType t, int rank, const std::string& policy) {
  check_rank(t, rank);
  const bool special = policy == "special";
  if (policy != "generic" && policy != "special") {
    const auto known = known_branches(t, rank);
    if (std::find(known.begin(), known.end(), policy) == known.end())
      throw Error(ErrorKind::UnsupportedType, "unknown branch '" + policy + "' for " + dynkin_name(t, rank));
    return policy;
  }
  switch (t) {
    case DynkinType::A:
      if (rank % 2 == 0) return "A-even";
      return special ? "A-odd-special" : "A-odd-generic";
    case DynkinType::D:
      if (rank % 2 == 1) return special ? "D-odd-special" : "D-odd-generic";
      return special ? "D-even-alpha=beta=(-1)^(n/2)" : "D-even-generic";
    case DynkinType::E:
      if (rank == 7) return special ? "E7-special" : "E7-generic";
      return "E" + std::to_string(rank);
  }
  return policy;
}

inline std::string branch_id(const std::string& label) { return label.substr(0, label.find(' ')); }

/// Normal-form coefficients selecting the given branch: the first choice in
/// code order over the free vertices, or nullopt if the field has none.
inline std::optional<CoeffMap> coefficients_for_branch(DynkinType t, int rank, const FieldSpec& F,
                                                       const std::string& branch) {
  const auto free = normal_form_free_vertices(t, rank);
  CoeffMap c = CoeffMap::ones(F, static_cast<std::size_t>(rank));
  std::vector<code_t> vals(free.size(), 1);
  while (true) {
    for (std::size_t i = 0; i < free.size(); ++i) c.set(free[i], vals[i]);
    if (branch_id(formula_count(t, rank, c).branch) == branch) return c;
    std::size_t i = free.size();
    while (i > 0) {
      if (++vals[i - 1] < F.q()) break;
      vals[i - 1] = 1;
      --i;
    }
    if (i == 0) return std::nullopt;
  }
}

inline InstanceBuilder dynkin_branch_builder(DynkinType t, int rank, const std::string& policy) {
  const std::string branch = branch_for_policy(t, rank, policy);
  return [=](const FieldSpec& F) -> std::optional<VarietyInstance> {
    auto c = coefficients_for_branch(t, rank, F, branch);
    if (!c) return std::nullopt;
    return dynkin_instance(t, rank, std::move(*c));
  };
}

}  // namespace clustercount
