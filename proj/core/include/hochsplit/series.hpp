#pragma once

// Truncated l^1(Z_+) convolution algebra.
//
// A TruncatedSeries stores the Taylor coefficients a_0..a_deg of an element of
// l^1(Z_+) together with a certified bound on the l^1 mass of everything that
// was not stored. Every operation propagates that bound, so a norm computed
// from a TruncatedSeries is a rigorous interval [norm_lower, norm_upper].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hochsplit/errors.hpp"
#include "hochsplit/scalar.hpp"

namespace hochsplit {

/// A point of the closed unit disc, i.e. a character of l^1(Z_+).
template <class S>
class DiscPoint {
 public:
  using Traits = ScalarTraits<S>;
  using Real = RealOf<S>;

  explicit DiscPoint(S lambda) : lambda_(std::move(lambda)), abs2_(Traits::abs2(lambda_)) {
    if constexpr (Traits::exact) {
      if (abs2_ > 1) throw DomainError("point lies outside the closed unit disc");
    } else {
      if (!std::isfinite(abs2_) || abs2_ > 1.0 + 1e-12) throw DomainError("point lies outside the closed unit disc");
    }
  }

  const S& lambda() const { return lambda_; }
  const Real& modulus_squared() const { return abs2_; }
  /// |lambda|. In exact mode this requires |lambda|^2 to be a rational square.
  Real modulus() const { return Traits::sqrt(abs2_); }
  bool interior() const { return abs2_ < 1; }

 private:
  S lambda_;
  Real abs2_;
};

template <class S>
struct TruncatedSeries {
  using Traits = ScalarTraits<S>;
  using Real = RealOf<S>;

  std::vector<S> coeffs;
  Real tail{0};

  static TruncatedSeries delta(std::size_t j) {
    TruncatedSeries out;
    out.coeffs.assign(j + 1, S(0));
    out.coeffs[j] = S(1);
    return out;
  }

  static TruncatedSeries make(std::vector<S> c, Real t = Real(0)) {
    TruncatedSeries out{std::move(c), std::move(t)};
    out.validate();
    return out;
  }

  void validate() const {
    if (tail < 0) throw DomainError("negative tail bound");
    if constexpr (!Traits::exact) {
      if (!std::isfinite(tail)) throw DomainError("non-finite tail bound");
      for (const auto& c : coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw DomainError("non-finite coefficient");
    }
  }

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  S at(std::size_t k) const { return k < coeffs.size() ? coeffs[k] : S(0); }

  /// Sum of |a_k| over stored coefficients. Exact mode needs rational moduli.
  Real norm_lower() const {
    Real s(0);
    for (const auto& c : coeffs) s += Traits::abs(c);
    return s;
  }
  Real norm_upper() const { return norm_lower() + tail; }

  /// Rigorous upper bound that never needs an exact modulus.
  Real norm_bound() const {
    Real s(0);
    for (const auto& c : coeffs) s += Traits::abs_upper(c);
    return s + tail;
  }
};

/// Value of a character together with a bound on the error caused by the
/// unstored part of the series.
template <class S>
struct Evaluation {
  S value;
  RealOf<S> error;
};

/// Cauchy product keeping degrees <= budget; everything else moves into the tail.
template <class S>
TruncatedSeries<S> convolve(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b, std::size_t budget) {
  using Traits = ScalarTraits<S>;
  using Real = RealOf<S>;
  TruncatedSeries<S> out;
  if (a.coeffs.empty() || b.coeffs.empty()) {
    out.coeffs.assign(1, S(0));
  } else {
    const std::size_t full = a.coeffs.size() + b.coeffs.size() - 1;
    std::vector<S> prod(full, S(0));
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
      if (Traits::is_zero(a.coeffs[i])) continue;
      for (std::size_t j = 0; j < b.coeffs.size(); ++j) prod[i + j] += a.coeffs[i] * b.coeffs[j];
    }
    Real overflow(0);
    for (std::size_t k = budget + 1; k < full; ++k) overflow += Traits::abs_upper(prod[k]);
    prod.resize(std::min(full, budget + 1));
    out.coeffs = std::move(prod);
    out.tail = overflow;
  }
  Real na(0);
  Real nb(0);
  for (const auto& c : a.coeffs) na += Traits::abs_upper(c);
  for (const auto& c : b.coeffs) nb += Traits::abs_upper(c);
  out.tail += na * b.tail + nb * a.tail + a.tail * b.tail;
  return out;
}

/// Gelfand transform sum a_k lambda^k (Horner).
template <class S>
Evaluation<S> evaluate_char(const TruncatedSeries<S>& a, const DiscPoint<S>& p) {
  S acc(0);
  for (std::size_t k = a.coeffs.size(); k-- > 0;) acc = acc * p.lambda() + a.coeffs[k];
  return {acc, a.tail};
}

/// Coefficients -lambda, (1-|lambda|^2) conj(lambda)^{n-1} for 1 <= n <= M of the
/// Blaschke factor (z - lambda)/(1 - conj(lambda) z); tail (1+|lambda|)|lambda|^M.
template <class S>
TruncatedSeries<S> blaschke(const DiscPoint<S>& p, std::size_t cutoff) {
  using Traits = ScalarTraits<S>;
  using Real = RealOf<S>;
  if (!p.interior()) throw DomainError("blaschke factor needs |lambda| < 1");
  const Real r = p.modulus();
  const S scale = Traits::from_real(Real(1) - p.modulus_squared());
  const S lbar = Traits::conj(p.lambda());
  TruncatedSeries<S> out;
  out.coeffs.reserve(cutoff + 1);
  out.coeffs.push_back(-p.lambda());
  S pw = scale;
  for (std::size_t n = 1; n <= cutoff; ++n) {
    out.coeffs.push_back(pw);
    pw *= lbar;
  }
  Real rm(1);
  for (std::size_t n = 0; n < cutoff; ++n) rm *= r;
  out.tail = (Real(1) + r) * rm;
  return out;
}

/// f - f(lambda) delta_0, the projection of the algebra onto the maximal ideal.
template <class S>
TruncatedSeries<S> maximal_ideal_project(const TruncatedSeries<S>& f, const DiscPoint<S>& p) {
  TruncatedSeries<S> out = f;
  if (out.coeffs.empty()) out.coeffs.assign(1, S(0));
  out.coeffs[0] -= evaluate_char(f, p).value;
  out.tail = f.tail + f.tail;
  return out;
}

/// Closed form of b_lambda^{-1}(z^j - lambda^j):
/// c_0 = lambda^{j-1}, c_k = (1-|lambda|^2) lambda^{j-1-k} (1 <= k < j), c_j = -conj(lambda).
/// For j = 0 the argument is zero and so is the result.
template <class S>
std::vector<S> divided_unit(const DiscPoint<S>& p, std::size_t j) {
  using Traits = ScalarTraits<S>;
  if (j == 0) return {S(0)};
  const auto pw = power_table(p.lambda(), j - 1);
  const S scale = Traits::from_real(RealOf<S>(1) - p.modulus_squared());
  std::vector<S> out(j + 1);
  out[0] = pw[j - 1];
  for (std::size_t k = 1; k < j; ++k) out[k] = scale * pw[j - 1 - k];
  out[j] = -Traits::conj(p.lambda());
  return out;
}

/// Solves b_lambda * g = f for a polynomial f vanishing at lambda: synthetic
/// division by (z - lambda) followed by multiplication with (1 - conj(lambda) z).
/// Throws NotInIdeal unless |f(lambda)| <= tol (1 + ||f||). In exact mode
/// tol = 0 demands exact vanishing.
template <class S>
TruncatedSeries<S> blaschke_divide(const TruncatedSeries<S>& f, const DiscPoint<S>& p, double tol = 1e-10) {
  using Traits = ScalarTraits<S>;
  if (f.tail != 0) throw DomainError("blaschke_divide needs a polynomial (zero tail)");
  const S at = evaluate_char(f, p).value;
  if constexpr (Traits::exact) {
    if (tol == 0.0) {
      if (!Traits::is_zero(at)) throw NotInIdeal("f(lambda) != 0");
    } else if (std::abs(Traits::to_complex(at)) > tol * (1.0 + Traits::to_double(f.norm_bound()))) {
      throw NotInIdeal("f(lambda) is not within tolerance of zero");
    }
  } else {
    if (std::abs(at) > tol * (1.0 + f.norm_lower())) throw NotInIdeal("f(lambda) is not within tolerance of zero");
  }
  const std::size_t deg = f.degree();
  if (deg == 0) return TruncatedSeries<S>{{S(0)}, RealOf<S>(0)};
  // f = (z - lambda) q + f(lambda); q has degree deg-1.
  std::vector<S> q(deg);
  S carry(0);
  for (std::size_t k = deg; k-- > 0;) {
    carry = carry * p.lambda() + f.coeffs[k + 1];
    q[k] = carry;
  }
  const S lbar = Traits::conj(p.lambda());
  TruncatedSeries<S> g;
  g.coeffs.assign(deg + 1, S(0));
  for (std::size_t k = 0; k < deg; ++k) {
    g.coeffs[k] += q[k];
    g.coeffs[k + 1] -= lbar * q[k];
  }
  return g;
}

/// Element of l^1(Z_+) (x) l^1(Z_+) = l^1(Z_+ x Z_+) stored densely, with a
/// tail bound on omitted mass.
template <class S>
struct TensorSeries {
  using Traits = ScalarTraits<S>;
  using Real = RealOf<S>;

  std::size_t rows{0};
  std::size_t cols{0};
  std::vector<S> values;
  Real tail{0};

  S& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  const S& at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

  Real norm_lower() const {
    Real s(0);
    for (const auto& v : values) s += Traits::abs(v);
    return s;
  }
  Real norm_upper() const { return norm_lower() + tail; }
};

template <class S>
TensorSeries<S> outer(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b) {
  using Traits = ScalarTraits<S>;
  TensorSeries<S> out;
  out.rows = a.coeffs.size();
  out.cols = b.coeffs.size();
  out.values.resize(out.rows * out.cols);
  for (std::size_t i = 0; i < out.rows; ++i)
    for (std::size_t j = 0; j < out.cols; ++j) out.at(i, j) = a.coeffs[i] * b.coeffs[j];
  RealOf<S> na(0);
  RealOf<S> nb(0);
  for (const auto& c : a.coeffs) na += Traits::abs_upper(c);
  for (const auto& c : b.coeffs) nb += Traits::abs_upper(c);
  out.tail = na * b.tail + nb * a.tail + a.tail * b.tail;
  return out;
}

/// The multiplication map pi(x (x) y) = x y.
template <class S>
TruncatedSeries<S> multiply(const TensorSeries<S>& w) {
  TruncatedSeries<S> out;
  out.coeffs.assign(w.rows + w.cols == 0 ? 1 : w.rows + w.cols - 1, S(0));
  for (std::size_t i = 0; i < w.rows; ++i)
    for (std::size_t j = 0; j < w.cols; ++j) out.coeffs[i + j] += w.at(i, j);
  out.tail = w.tail;
  return out;
}

/// sigma_lambda(f) = b_lambda (x) S_lambda(f), the right-module splitting of the
/// multiplication map on the maximal ideal, with the Blaschke factor cut at M.
template <class S>
TensorSeries<S> sigma(const TruncatedSeries<S>& f, const DiscPoint<S>& p, std::size_t cutoff, double tol = 1e-10) {
  return outer(blaschke(p, cutoff), blaschke_divide(f, p, tol));
}

/// Smallest M >= 1 with (1+2r)(1+r) r^M <= target, capped at `cap`.
inline std::size_t default_blaschke_cutoff(double r, double target = 1e-10, std::size_t cap = 5000) {
  const double lead = (1.0 + 2.0 * r) * (1.0 + r);
  double pw = r;
  for (std::size_t m = 1; m <= cap; ++m) {
    if (lead * pw <= target) return m;
    pw *= r;
  }
  return cap;
}

}  // namespace hochsplit
