#pragma once

// Reference computations written from the defining formulas, deliberately
// sharing no code with the library: plain coefficient vectors, maps and loops.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Poly = std::vector<C>;

inline Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline double l1(const Poly& a) {
  double s = 0;
  for (auto c : a) s += std::abs(c);
  return s;
}

inline C eval(const Poly& a, C z) {
  C acc = 0;
  C zk = 1;
  for (auto c : a) {
    acc += c * zk;
    zk *= z;
  }
  return acc;
}

inline C ipow(C z, std::size_t k) {
  C out = 1;
  for (std::size_t i = 0; i < k; ++i) out *= z;
  return out;
}

/// (z - lambda) * sum_{k <= M} conj(lambda)^k z^k, cut to degree M.
inline Poly blaschke(C lam, std::size_t m) {
  Poly geo(m + 1);
  for (std::size_t k = 0; k <= m; ++k) geo[k] = ipow(std::conj(lam), k);
  Poly full = mul({-lam, 1.0}, geo);
  full.resize(m + 1);
  return full;
}

/// (z^j - lambda^j)/(z - lambda) * (1 - conj(lambda) z).
inline Poly divided(C lam, std::size_t j) {
  if (j == 0) return {0.0};
  Poly q(j);
  for (std::size_t k = 0; k < j; ++k) q[k] = ipow(lam, j - 1 - k);
  return mul(q, {1.0, -std::conj(lam)});
}

/// z^j - lambda^j.
inline Poly projected_delta(C lam, std::size_t j) {
  Poly f(j + 1);
  f[j] += 1.0;
  f[0] -= ipow(lam, j);
  return f;
}

using Tuple = std::vector<std::size_t>;
using Fn = std::function<C(const Tuple&)>;

/// (delta T)(j_0..j_n) straight from the alternating sum.
inline C coboundary(const Fn& t, C lam, const Tuple& j) {
  const std::size_t n = j.size() - 1;
  C acc = ipow(lam, j[0]) * t(Tuple(j.begin() + 1, j.end()));
  for (std::size_t i = 1; i <= n; ++i) {
    Tuple merged;
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == i) continue;
      merged.push_back(k == i - 1 ? j[k] + j[k + 1] : j[k]);
    }
    acc += (i % 2 ? -1.0 : 1.0) * t(merged);
  }
  acc += ((n + 1) % 2 ? -1.0 : 1.0) * ipow(lam, j[n]) * t(Tuple(j.begin(), j.end() - 1));
  return acc;
}

/// Coefficients of output entry (j, rest) of s_n over the input entries (a, b, rest).
inline std::map<std::pair<std::size_t, std::size_t>, C> split_row(C lam, std::size_t m, std::size_t j) {
  std::map<std::pair<std::size_t, std::size_t>, C> row;
  const Poly bm = blaschke(lam, m);
  const Poly u = divided(lam, j);
  for (std::size_t a = 0; a < bm.size(); ++a)
    for (std::size_t b = 0; b < u.size(); ++b) row[{a, b}] -= bm[a] * u[b];
  row[{0, 0}] += ipow(lam, j);
  return row;
}

inline C split(const Fn& t, C lam, std::size_t m, const Tuple& out) {
  C acc = 0;
  for (const auto& [ab, c] : split_row(lam, m, out[0])) {
    Tuple in{ab.first, ab.second};
    in.insert(in.end(), out.begin() + 1, out.end());
    acc += c * t(in);
  }
  return acc;
}

/// Operator norm of s_n on sup-normed cochains: the largest row l^1 norm.
inline double split_opnorm(C lam, std::size_t m, std::size_t window) {
  double best = 0;
  for (std::size_t j = 0; j <= window; ++j) {
    double s = 0;
    for (const auto& [ab, c] : split_row(lam, m, j)) s += std::abs(c);
    best = std::max(best, s);
  }
  return best;
}

/// ||v_m * (delta_j - lambda^j delta_0)|| with v_m the twisted average.
inline double peak_residual(double theta, std::size_t m, std::size_t j) {
  const C lam = std::polar(1.0, theta);
  Poly v(m);
  for (std::size_t k = 0; k < m; ++k) v[k] = std::polar(1.0 / static_cast<double>(m), -theta * static_cast<double>(k));
  return l1(mul(v, projected_delta(lam, j)));
}

/// Largest gamma with a/gamma and b/gamma positive integers, by search over
/// gamma = a/n for n = 1, 2, ...
inline mpq_class join(const mpq_class& a, const mpq_class& b, unsigned long limit = 100000) {
  for (unsigned long n = 1; n <= limit; ++n) {
    mpq_class gamma = a / n;
    gamma.canonicalize();
    mpq_class q = b / gamma;
    q.canonicalize();
    if (q.get_den() == 1) return gamma;
  }
  return 0;
}

/// (f * g) at t for piecewise-constant f, g on aligned grids with step h,
/// from the overlap lengths of the cells.
inline C pw_convolution_at(const std::vector<C>& f, double flo, const std::vector<C>& g, double glo, double h,
                           double t) {
  C acc = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a0 = flo + static_cast<double>(i) * h;
    for (std::size_t j = 0; j < g.size(); ++j) {
      // s in [a0, a0 + h) with t - s in [b0, b0 + h)
      const double b0 = glo + static_cast<double>(j) * h;
      const double lo = std::max(a0, t - b0 - h);
      const double hi = std::min(a0 + h, t - b0);
      if (hi > lo) acc += f[i] * g[j] * (hi - lo);
    }
  }
  return acc;
}

}  // namespace oracle
