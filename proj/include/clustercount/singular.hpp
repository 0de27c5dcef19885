#pragma once

// Jacobian of the exchange equations and the singular-point search.
//
// With f_t = x_t x'_t - 1 - alpha_t prod_{s-t} x_s, row t of the Jacobian has
//   d f_t / d x_t  = x'_t,
//   d f_t / d x'_t = x_t,
//   d f_t / d x_u  = -alpha_t prod_{s-t, s != u} x_s   for u - t,
// and zeros elsewhere. Columns are x_1..x_n followed by x'_1..x'_n.

#include <clustercount/enumerate.hpp>
#include <clustercount/gf.hpp>

#include <thread>
#include <vector>

namespace clustercount {

struct FieldMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<code_t> data;

  FieldMatrix() = default;
  FieldMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

  code_t& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  code_t at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Row rank by Gaussian elimination over F_q.
inline std::size_t rank(const FieldSpec& F, FieldMatrix m) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < m.cols && r < m.rows; ++col) {
    std::size_t piv = r;
    while (piv < m.rows && m.at(piv, col) == 0) ++piv;
    if (piv == m.rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
    const code_t inv = F.inv(m.at(r, col));
    for (std::size_t i = r + 1; i < m.rows; ++i) {
      const code_t factor = F.mul(m.at(i, col), inv);
      if (factor == 0) continue;
      for (std::size_t j = col; j < m.cols; ++j) m.at(i, j) = F.sub(m.at(i, j), F.mul(factor, m.at(r, j)));
    }
    ++r;
  }
  return r;
}

inline FieldMatrix jacobian_at(const VarietyInstance& v, const PointRecord& p) {
  if (!satisfies_equations(v, p)) throw Error(ErrorKind::PointNotOnVariety, "point does not satisfy the equations");
  const auto& F = v.field();
  const std::size_t n = v.forest.size();
  FieldMatrix m(n, 2 * n);
  for (vertex_t t = 0; t < n; ++t) {
    m.at(t, t) = p.xp[t];
    m.at(t, n + t) = p.x[t];
    const auto& nb = v.forest.neighbors(t);
    for (auto u : nb) {
      code_t prod = v.alpha[t];
      for (auto s : nb)
        if (s != u) prod = F.mul(prod, p.x[s]);
      m.at(t, u) = F.neg(prod);
    }
  }
  return m;
}

/// Points where the Jacobian has rank < n, in brute_points order.
inline std::vector<PointRecord> singular_points(const VarietyInstance& v, const EnumOptions& opt = {}) {
  const auto pts = brute_points(v, opt);
  const std::size_t n = v.forest.size();
  std::vector<char> singular(pts.size(), 0);
  const unsigned jobs =
      static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(detail::resolve_jobs(opt.jobs), pts.size())));
  auto work = [&](unsigned j) {
    const std::size_t lo = pts.size() * j / jobs, hi = pts.size() * (j + 1) / jobs;
    for (std::size_t i = lo; i < hi; ++i) singular[i] = rank(v.field(), jacobian_at(v, pts[i])) < n;
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work, j);
    for (auto& th : pool) th.join();
  }
  std::vector<PointRecord> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (singular[i]) out.push_back(pts[i]);
  return out;
}

}  // namespace clustercount
