#pragma once

// Hochschild cochains C^n(l^1(Z_+), C_lambda) in basis coordinates.
//
// A cochain is determined by its values on tuples of basis vectors
// (delta_{j_1}, ..., delta_{j_n}). We store those values densely on a box
// {0..w_0} x ... x {0..w_{n-1}}; a cube is the special case w_k = N. Boxes
// are needed because a splitting map reads its input far along the first
// axis (up to the Blaschke cutoff) but only a little along the others.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hochsplit/errors.hpp"
#include "hochsplit/scalar.hpp"
#include "hochsplit/series.hpp"

namespace hochsplit {

inline constexpr std::size_t kMaxDegree = 6;

using Index = std::span<const std::size_t>;

template <class S>
class Cochain {
 public:
  using Traits = ScalarTraits<S>;
  using Real = RealOf<S>;

  Cochain(DiscPoint<S> point, std::vector<std::size_t> windows)
      : point_(std::move(point)), windows_(std::move(windows)) {
    if (windows_.size() > kMaxDegree) throw DomainError("cochain degree exceeds " + std::to_string(kMaxDegree));
    strides_.assign(windows_.size(), 1);
    std::size_t total = 1;
    for (std::size_t k = windows_.size(); k-- > 0;) {
      strides_[k] = total;
      total *= windows_[k] + 1;
    }
    values_.assign(total, S(0));
  }

  static Cochain cube(DiscPoint<S> point, std::size_t degree, std::size_t window) {
    return Cochain(std::move(point), std::vector<std::size_t>(degree, window));
  }

  std::size_t degree() const { return windows_.size(); }
  const std::vector<std::size_t>& windows() const { return windows_; }
  /// Largest N such that the cube {0..N}^n is stored.
  std::size_t window() const {
    std::size_t w = windows_.empty() ? 0 : windows_[0];
    for (auto x : windows_) w = std::min(w, x);
    return w;
  }
  bool is_cube() const {
    for (auto x : windows_)
      if (x != windows_[0]) return false;
    return true;
  }
  const DiscPoint<S>& point() const { return point_; }
  std::size_t size() const { return values_.size(); }
  std::span<const S> values() const { return values_; }
  std::span<S> values() { return values_; }

  bool covers(Index idx) const {
    if (idx.size() != windows_.size()) return false;
    for (std::size_t k = 0; k < idx.size(); ++k)
      if (idx[k] > windows_[k]) return false;
    return true;
  }
  /// True if the box `w` fits inside this cochain's box.
  bool covers_box(std::span<const std::size_t> w) const {
    if (w.size() != windows_.size()) return false;
    for (std::size_t k = 0; k < w.size(); ++k)
      if (w[k] > windows_[k]) return false;
    return true;
  }

  S& operator[](Index idx) { return values_[offset(idx)]; }
  const S& operator[](Index idx) const { return values_[offset(idx)]; }
  S& at(std::initializer_list<std::size_t> idx) { return checked(Index(idx.begin(), idx.size())); }
  const S& at(std::initializer_list<std::size_t> idx) const {
    return const_cast<Cochain*>(this)->checked(Index(idx.begin(), idx.size()));
  }

  /// max |T(j)|. Exact mode needs rational moduli.
  Real norm() const {
    Real m(0);
    for (const auto& v : values_) {
      Real a = Traits::abs(v);
      if (a > m) m = a;
    }
    return m;
  }
  /// max |T(j)|^2, always exact.
  Real norm2() const {
    Real m(0);
    for (const auto& v : values_) {
      Real a = Traits::abs2(v);
      if (a > m) m = a;
    }
    return m;
  }
  /// Rigorous upper bound for norm() that never needs an exact modulus.
  Real norm_bound() const {
    if constexpr (Traits::exact) return sqrt_upper(norm2());
    else return norm();
  }

  /// Calls f(idx, value) for every stored tuple in row-major order.
  template <class F>
  void for_each(F&& f) {
    std::array<std::size_t, kMaxDegree> idx{};
    const std::size_t n = degree();
    for (std::size_t pos = 0; pos < values_.size(); ++pos) {
      f(Index(idx.data(), n), values_[pos]);
      for (std::size_t k = n; k-- > 0;) {
        if (++idx[k] <= windows_[k]) break;
        idx[k] = 0;
      }
    }
  }
  template <class F>
  void for_each(F&& f) const {
    const_cast<Cochain*>(this)->for_each([&](Index i, const S& v) { f(i, v); });
  }

  Cochain restrict_to(std::vector<std::size_t> w) const {
    if (!covers_box(w)) throw WindowTooSmall("restriction window exceeds the stored box");
    Cochain out(point_, std::move(w));
    out.for_each([&](Index i, S& v) { v = (*this)[i]; });
    return out;
  }

 private:
  std::size_t offset(Index idx) const {
    std::size_t off = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) off += idx[k] * strides_[k];
    return off;
  }
  S& checked(Index idx) {
    if (!covers(idx)) throw WindowTooSmall("index outside the stored window");
    return values_[offset(idx)];
  }

  DiscPoint<S> point_;
  std::vector<std::size_t> windows_;
  std::vector<std::size_t> strides_;
  std::vector<S> values_;
};

template <class S>
Cochain<S> operator-(const Cochain<S>& a, const Cochain<S>& b) {
  if (a.windows() != b.windows()) throw WindowTooSmall("cochain shapes differ");
  Cochain<S> out = a;
  auto ov = out.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] -= bv[i];
  return out;
}

template <class S>
Cochain<S> operator+(const Cochain<S>& a, const Cochain<S>& b) {
  if (a.windows() != b.windows()) throw WindowTooSmall("cochain shapes differ");
  Cochain<S> out = a;
  auto ov = out.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] += bv[i];
  return out;
}

/// Reads a dense cochain as a callable source. No bounds checks; callers
/// validate windows up front.
template <class S>
struct DenseSource {
  const Cochain<S>* t;
  S operator()(Index i) const { return (*t)[i]; }
};

/// Lazy coboundary of a degree-n source: evaluates (delta T)(j_0..j_n) on demand.
template <class S, class Src>
class CoboundaryView {
 public:
  CoboundaryView(const Src& src, std::size_t source_degree, const std::vector<S>* powers)
      : src_(src), n_(source_degree), pw_(powers) {}

  S operator()(Index j) const {
    std::array<std::size_t, kMaxDegree> buf{};
    const std::size_t n = n_;
    for (std::size_t k = 0; k < n; ++k) buf[k] = j[k + 1];
    S acc = (*pw_)[j[0]] * src_(Index(buf.data(), n));
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t k = 0; k + 1 < i; ++k) buf[k] = j[k];
      buf[i - 1] = j[i - 1] + j[i];
      for (std::size_t k = i; k < n; ++k) buf[k] = j[k + 1];
      if (i % 2 == 1) acc -= src_(Index(buf.data(), n));
      else acc += src_(Index(buf.data(), n));
    }
    for (std::size_t k = 0; k < n; ++k) buf[k] = j[k];
    S last = (*pw_)[j[n]] * src_(Index(buf.data(), n));
    if ((n + 1) % 2 == 1) acc -= last;
    else acc += last;
    return acc;
  }

 private:
  const Src& src_;
  std::size_t n_;
  const std::vector<S>* pw_;
};

/// Box a degree-n cochain must cover so that its coboundary is exact on `out`.
inline std::vector<std::size_t> coboundary_requirement(std::span<const std::size_t> out) {
  std::vector<std::size_t> need;
  for (std::size_t k = 0; k + 1 < out.size(); ++k) need.push_back(out[k] + out[k + 1]);
  return need;
}

/// Evaluates a callable source on every tuple of a box.
template <class S, class Src>
Cochain<S> materialize(const DiscPoint<S>& point, std::vector<std::size_t> windows, const Src& src) {
  Cochain<S> out(point, std::move(windows));
  out.for_each([&](Index i, S& v) { v = src(i); });
  return out;
}

/// delta T on an explicit output box; every entry is exact.
template <class S>
Cochain<S> coboundary_on(const Cochain<S>& t, std::vector<std::size_t> out) {
  if (out.size() != t.degree() + 1) throw DomainError("output box must have degree n+1");
  if (!t.covers_box(coboundary_requirement(out)))
    throw WindowTooSmall("cochain window too small for the requested coboundary box");
  std::size_t top = std::max(out.front(), out.back());
  const auto pw = power_table(t.point().lambda(), top);
  DenseSource<S> src{&t};
  CoboundaryView<S, DenseSource<S>> view(src, t.degree(), &pw);
  return materialize(t.point(), std::move(out), view);
}

/// delta T for a cube of window N; the result is the cube of window floor(N/2).
template <class S>
Cochain<S> coboundary(const Cochain<S>& t) {
  if (t.degree() == 0) throw DomainError("coboundary of a degree-0 cochain needs an explicit window");
  const std::size_t n = t.window();
  if (n < 2) throw WindowTooSmall("coboundary needs window >= 2");
  return coboundary_on(t, std::vector<std::size_t>(t.degree() + 1, n / 2));
}

template <class S>
RealOf<S> cochain_norm(const Cochain<S>& t) {
  return t.norm();
}

/// T(f_1, ..., f_n) with error <= ||T|| sum_i (prod_{k != i} ||f_k||) f_i.tail.
template <class S>
Evaluation<S> apply_multilinear(const Cochain<S>& t, std::span<const TruncatedSeries<S>> fs) {
  using Real = RealOf<S>;
  if (fs.size() != t.degree()) throw DomainError("argument count must equal the cochain degree");
  for (std::size_t k = 0; k < fs.size(); ++k)
    if (fs[k].degree() > t.windows()[k]) throw WindowTooSmall("argument degree exceeds the cochain window");
  S acc(0);
  t.for_each([&](Index idx, const S& v) {
    S term = v;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] >= fs[k].coeffs.size()) return;
      term *= fs[k].coeffs[idx[k]];
    }
    acc += term;
  });
  Real err(0);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    Real prod = fs[i].tail;
    for (std::size_t k = 0; k < fs.size(); ++k)
      if (k != i) prod *= fs[k].norm_bound();
    err += prod;
  }
  return {acc, t.norm_bound() * err};
}

namespace detail {

/// 53 random bits mapped to [0, 1); identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace detail

/// One sample from the uniform distribution on the disc of radius `scale`.
/// Double samples are truncated to a 2^-26 scale grid so that short sums of
/// entries are exact; exact samples have rational modulus.
template <class S>
S random_disc_value(std::mt19937_64& rng, double scale) {
  const double u1 = detail::unit_uniform(rng);
  const double u2 = detail::unit_uniform(rng);
  if constexpr (ScalarTraits<S>::exact) {
    // r ((1 - t^2) + 2 t i) / (1 + t^2) has modulus exactly r.
    const double theta = 2.0 * std::numbers::pi * u2;
    mpq_class r(std::trunc(std::sqrt(u1) * 0x1.0p20));
    r /= mpq_class(1 << 20);
    r *= mpq_class(scale);
    const double half_tan = std::clamp(std::tan(0.5 * theta), -1e6, 1e6);
    mpq_class t(std::trunc(half_tan * 4096.0));
    t /= 4096;
    const mpq_class d = 1 + t * t;
    return ExactComplex{r * (1 - t * t) / d, r * 2 * t / d};
  } else {
    const double r = std::sqrt(u1);
    const double theta = 2.0 * std::numbers::pi * u2;
    const double q = 0x1.0p26;
    return Complex{std::trunc(r * std::cos(theta) * q) / q * scale, std::trunc(r * std::sin(theta) * q) / q * scale};
  }
}

template <class S>
Cochain<S> random_cochain_box(const DiscPoint<S>& point, std::vector<std::size_t> windows, std::uint64_t seed,
                              double scale = 1.0) {
  std::mt19937_64 rng(seed);
  Cochain<S> out(point, std::move(windows));
  for (auto& v : out.values()) v = random_disc_value<S>(rng, scale);
  return out;
}

template <class S>
Cochain<S> random_cochain(std::size_t degree, std::size_t window, const DiscPoint<S>& point, std::uint64_t seed,
                          double scale = 1.0) {
  return random_cochain_box(point, std::vector<std::size_t>(degree, window), seed, scale);
}

}  // namespace hochsplit
