#pragma once

// Finite fields F_q, q = p^k.
//
// Elements are handled as integer codes in [0, q). For prime fields the code
// is the residue. For extension fields the code packs the coefficient vector
// of the polynomial-basis representative in base p, lowest degree first, so
// code 0 is zero, code 1 is one and code c < p is the image of the integer c.

#include <clustercount/error.hpp>

#include <cstdint>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace clustercount {

using code_t = std::uint32_t;

namespace detail {

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Dense polynomials over F_p, lowest degree first, no trailing zeros.
using Poly = std::vector<std::uint32_t>;

inline void poly_trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t inv_mod_prime(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, nt = 1, r = p, nr = a;
  while (nr != 0) {
    std::int64_t qq = r / nr;
    t -= qq * nt;
    std::swap(t, nt);
    r -= qq * nr;
    std::swap(r, nr);
  }
  if (t < 0) t += p;
  return static_cast<std::uint32_t>(t);
}

// Remainder of a modulo a monic polynomial m.
inline Poly poly_rem_monic(Poly a, const Poly& m, std::uint32_t p) {
  const std::size_t dm = m.size() - 1;
  poly_trim(a);
  while (a.size() > dm) {
    const std::uint64_t lead = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      const std::uint64_t sub = (lead * m[i]) % p;
      a[i + shift] = static_cast<std::uint32_t>((a[i + shift] + p - sub) % p);
    }
    poly_trim(a);
  }
  return a;
}

inline Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t{a[i]} * b[j]) % p);
  poly_trim(r);
  return r;
}

// Trial division by every monic polynomial of degree 1..deg/2.
inline bool poly_irreducible(const Poly& f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  if (deg <= 1) return deg == 1;
  if (f[0] == 0) return false;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t m = 0; m < count; ++m) {
      Poly g(d + 1, 0);
      g[d] = 1;
      std::uint64_t x = m;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(x % p);
        x /= p;
      }
      if (poly_rem_monic(f, g, p).empty()) return false;
    }
  }
  return true;
}

// Smallest monic irreducible of degree k, coefficients compared c0 first.
inline Poly smallest_irreducible(std::uint32_t p, std::uint32_t k) {
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < k; ++i) count *= p;
  for (std::uint64_t m = 0; m < count; ++m) {
    Poly f(k + 1, 0);
    f[k] = 1;
    std::uint64_t x = m;
    for (std::uint32_t i = k; i-- > 0;) {
      f[i] = static_cast<std::uint32_t>(x % p);
      x /= p;
    }
    if (poly_irreducible(f, p)) return f;
  }
  throw Error(ErrorKind::UnsupportedSize, "no irreducible polynomial found");
}

struct FieldData {
  std::uint32_t p = 0;
  std::uint32_t k = 0;
  std::uint32_t q = 0;
  Poly modulus;
  // Extension fields only.
  std::vector<code_t> exp_table;  // length 2(q-1)
  std::vector<std::uint32_t> log_table;
  std::vector<code_t> add_table;  // q*q, only when q is small
  std::vector<code_t> neg_table;

  Poly to_poly(code_t c) const {
    Poly a(k, 0);
    for (std::uint32_t i = 0; i < k; ++i) {
      a[i] = c % p;
      c /= p;
    }
    poly_trim(a);
    return a;
  }

  code_t from_poly(const Poly& a) const {
    code_t c = 0;
    for (std::size_t i = a.size(); i-- > 0;) c = c * p + a[i];
    return c;
  }

  code_t digit_add(code_t a, code_t b) const {
    if (p == 2) return a ^ b;
    code_t r = 0, w = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
      std::uint32_t d = a % p + b % p;
      if (d >= p) d -= p;
      r += d * w;
      w *= p;
      a /= p;
      b /= p;
    }
    return r;
  }

  code_t digit_neg(code_t a) const {
    code_t r = 0, w = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
      const std::uint32_t d = a % p;
      r += (d == 0 ? 0 : p - d) * w;
      w *= p;
      a /= p;
    }
    return r;
  }

  code_t slow_mul(code_t a, code_t b) const {
    return from_poly(poly_rem_monic(poly_mul(to_poly(a), to_poly(b), p), modulus, p));
  }

  void build_tables() {
    const std::uint32_t n = q - 1;
    const auto factors = prime_factors(n);
    auto slow_pow = [&](code_t g, std::uint64_t e) {
      code_t r = 1;
      while (e) {
        if (e & 1) r = slow_mul(r, g);
        g = slow_mul(g, g);
        e >>= 1;
      }
      return r;
    };
    code_t gen = 0;
    for (code_t g = 2; g < q; ++g) {
      bool primitive = true;
      for (auto r : factors)
        if (slow_pow(g, n / r) == 1) {
          primitive = false;
          break;
        }
      if (primitive) {
        gen = g;
        break;
      }
    }
    exp_table.assign(2 * std::size_t{n}, 0);
    log_table.assign(q, 0);
    code_t x = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
      exp_table[i] = x;
      exp_table[i + n] = x;
      log_table[x] = i;
      x = slow_mul(x, gen);
    }
    neg_table.resize(q);
    for (code_t a = 0; a < q; ++a) neg_table[a] = digit_neg(a);
    if (q <= 1024) {
      add_table.resize(std::size_t{q} * q);
      for (code_t a = 0; a < q; ++a)
        for (code_t b = 0; b < q; ++b) add_table[std::size_t{a} * q + b] = digit_add(a, b);
    }
  }
};

}  // namespace detail

class FieldElem;

/// A finite field F_q with q = p^k. Immutable and cheap to copy.
class FieldSpec {
 public:
  static constexpr std::uint64_t kMaxExtensionOrder = std::uint64_t{1} << 20;

  static FieldSpec make(std::uint64_t p, std::uint64_t k = 1) {
    if (!detail::is_prime_u64(p))
      throw Error(ErrorKind::NonPrime, std::to_string(p) + " is not prime");
    if (k < 1 || p >= (std::uint64_t{1} << 31))
      throw Error(ErrorKind::UnsupportedSize, "p=" + std::to_string(p) + " k=" + std::to_string(k));
    std::uint64_t q = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
      q *= p;
      if (k > 1 && q > kMaxExtensionOrder)
        throw Error(ErrorKind::UnsupportedSize,
                    "p^k exceeds 2^20 for p=" + std::to_string(p) + " k=" + std::to_string(k));
    }
    auto d = std::make_shared<detail::FieldData>();
    d->p = static_cast<std::uint32_t>(p);
    d->k = static_cast<std::uint32_t>(k);
    d->q = static_cast<std::uint32_t>(q);
    if (k == 1) {
      d->modulus = {0, 1};
    } else {
      d->modulus = detail::smallest_irreducible(d->p, d->k);
      d->build_tables();
    }
    FieldSpec f;
    f.d_ = std::move(d);
    return f;
  }

  /// Field of the given order; q must be a prime power.
  static FieldSpec of_order(std::uint64_t q) {
    if (q < 2) throw Error(ErrorKind::NonPrime, "field order " + std::to_string(q));
    const auto fac = detail::prime_factors(q);
    if (fac.size() != 1) throw Error(ErrorKind::NonPrime, std::to_string(q) + " is not a prime power");
    std::uint64_t k = 0;
    for (std::uint64_t x = q; x > 1; x /= fac[0]) ++k;
    return make(fac[0], k);
  }

  std::uint32_t p() const { return d_->p; }
  std::uint32_t k() const { return d_->k; }
  std::uint32_t q() const { return d_->q; }
  bool is_prime_field() const { return d_->k == 1; }
  /// Monic modulus, lowest degree first. {0, 1} for prime fields.
  const std::vector<std::uint32_t>& modulus() const { return d_->modulus; }

  code_t zero() const { return 0; }
  code_t one() const { return 1; }

  code_t add(code_t a, code_t b) const {
    const auto& d = *d_;
    if (d.k == 1) {
      std::uint64_t s = std::uint64_t{a} + b;
      return static_cast<code_t>(s >= d.p ? s - d.p : s);
    }
    if (!d.add_table.empty()) return d.add_table[std::size_t{a} * d.q + b];
    return d.digit_add(a, b);
  }

  code_t neg(code_t a) const {
    const auto& d = *d_;
    if (d.k == 1) return a == 0 ? 0 : d.p - a;
    return d.neg_table[a];
  }

  code_t sub(code_t a, code_t b) const { return add(a, neg(b)); }

  code_t mul(code_t a, code_t b) const {
    const auto& d = *d_;
    if (d.k == 1) return static_cast<code_t>(std::uint64_t{a} * b % d.p);
    if (a == 0 || b == 0) return 0;
    return d.exp_table[d.log_table[a] + d.log_table[b]];
  }

  code_t inv(code_t a) const {
    if (a == 0) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
    const auto& d = *d_;
    if (d.k == 1) return detail::inv_mod_prime(a, d.p);
    const std::uint32_t n = d.q - 1;
    return d.exp_table[(n - d.log_table[a]) % n];
  }

  code_t div(code_t a, code_t b) const { return mul(a, inv(b)); }

  code_t pow(code_t a, std::uint64_t e) const {
    code_t r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  /// Image of an integer under Z -> F_p -> F_q.
  code_t from_int(long long v) const {
    long long m = v % static_cast<long long>(d_->p);
    if (m < 0) m += d_->p;
    return static_cast<code_t>(m);
  }

  /// (-1)^e as a field element.
  code_t minus_one_pow(long long e) const { return (e % 2 == 0) ? one() : neg(one()); }

  /// Coefficient vector of length k, lowest degree first.
  std::vector<std::uint32_t> coords(code_t c) const {
    std::vector<std::uint32_t> out(d_->k);
    for (auto& x : out) {
      x = c % d_->p;
      c /= d_->p;
    }
    return out;
  }

  code_t from_coords(std::span<const long long> cs) const {
    if (cs.size() > d_->k)
      throw Error(ErrorKind::Parse, "coefficient vector longer than extension degree");
    code_t c = 0;
    for (std::size_t i = cs.size(); i-- > 0;) c = c * d_->p + from_int(cs[i]);
    return c;
  }

  /// Integer for prime fields, comma-separated coefficients otherwise.
  std::string format(code_t c) const {
    if (d_->k == 1) return std::to_string(c);
    std::ostringstream os;
    auto v = coords(c);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
  }

  std::string name() const {
    return d_->k == 1 ? "F_" + std::to_string(d_->q)
                      : "F_" + std::to_string(d_->q) + "(" + std::to_string(d_->p) + "^" +
                            std::to_string(d_->k) + ")";
  }

  FieldElem elem(code_t c) const;
  FieldElem elem_from_int(long long v) const;
  /// All q elements; code order, so 0 comes first and 1 second.
  std::vector<FieldElem> elements() const;

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.d_ == b.d_ || (a.d_->p == b.d_->p && a.d_->k == b.d_->k);
  }

 private:
  FieldSpec() = default;
  std::shared_ptr<const detail::FieldData> d_;
};

/// Checked element value: carries its field and refuses mixed-field arithmetic.
class FieldElem {
 public:
  FieldElem(FieldSpec field, code_t code) : field_(std::move(field)), code_(code) {
    if (code_ >= field_.q()) throw Error(ErrorKind::Parse, "element code out of range");
  }

  const FieldSpec& field() const { return field_; }
  code_t code() const { return code_; }
  bool is_zero() const { return code_ == 0; }

  FieldElem inv() const { return {field_, field_.inv(code_)}; }
  FieldElem pow(std::uint64_t e) const { return {field_, field_.pow(code_, e)}; }

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b) {
    check(a, b);
    return {a.field_, a.field_.add(a.code_, b.code_)};
  }
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b) {
    check(a, b);
    return {a.field_, a.field_.sub(a.code_, b.code_)};
  }
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b) {
    check(a, b);
    return {a.field_, a.field_.mul(a.code_, b.code_)};
  }
  friend FieldElem operator/(const FieldElem& a, const FieldElem& b) {
    check(a, b);
    return {a.field_, a.field_.div(a.code_, b.code_)};
  }
  friend FieldElem operator-(const FieldElem& a) { return {a.field_, a.field_.neg(a.code_)}; }

  friend bool operator==(const FieldElem& a, const FieldElem& b) {
    return a.field_ == b.field_ && a.code_ == b.code_;
  }

  std::string str() const { return field_.format(code_); }

 private:
  static void check(const FieldElem& a, const FieldElem& b) {
    if (!(a.field_ == b.field_))
      throw Error(ErrorKind::FieldMismatch, a.field_.name() + " vs " + b.field_.name());
  }

  FieldSpec field_;
  code_t code_;
};

inline FieldElem FieldSpec::elem(code_t c) const { return FieldElem(*this, c); }
inline FieldElem FieldSpec::elem_from_int(long long v) const { return FieldElem(*this, from_int(v)); }

inline std::vector<FieldElem> FieldSpec::elements() const {
  std::vector<FieldElem> out;
  out.reserve(q());
  for (code_t c = 0; c < q(); ++c) out.emplace_back(*this, c);
  return out;
}

}  // namespace clustercount
