#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace clustercount {

/// Exact point counts and formula values.
using Count = boost::multiprecision::cpp_int;

inline Count ipow(std::uint64_t base, unsigned e) { return boost::multiprecision::pow(Count(base), e); }

inline std::string to_string(const Count& c) { return c.str(); }

/// Exact quotient; throws std::logic_error when b does not divide a.
inline Count exact_div(const Count& a, const Count& b) {
  Count q, r;
  boost::multiprecision::divide_qr(a, b, q, r);
  if (r != 0) throw std::logic_error("inexact division " + a.str() + " / " + b.str());
  return q;
}

}  // namespace clustercount
