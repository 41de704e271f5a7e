#pragma once

// Scalar layer. Every algebraic routine is written once against
// ScalarTraits<S> and instantiated for two scalar types:
//   Complex       double-precision complex, the default
//   ExactComplex  complex with mpq_class parts, for golden tests
// Moduli of exact numbers are only representable when |z|^2 is the square
// of a rational; abs() throws InexactModulus otherwise, while abs_upper()
// always returns a rigorous rational upper bound.

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace hochsplit {

using Complex = std::complex<double>;

struct ExactComplex {
  mpq_class re{0};
  mpq_class im{0};

  ExactComplex() = default;
  ExactComplex(mpq_class r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  ExactComplex(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}
  ExactComplex(int r) : re(r) {}  // NOLINT(google-explicit-constructor)

  ExactComplex& operator+=(const ExactComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ExactComplex& operator-=(const ExactComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  ExactComplex& operator*=(const ExactComplex& o) {
    mpq_class r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  ExactComplex& operator/=(const ExactComplex& o);

  friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
  friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
  friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
  friend ExactComplex operator/(ExactComplex a, const ExactComplex& b) { return a /= b; }
  friend ExactComplex operator-(const ExactComplex& a) { return {-a.re, -a.im}; }
  friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
    return a.re == b.re && a.im == b.im;
  }
};

/// Parses "p/q" or "p/q+r/s i" style literals is left to callers; this parses
/// a single rational such as "3/4", "-2" or "0.75" (decimal is read exactly).
mpq_class parse_rational(const std::string& text);

/// Exact square root of a nonnegative rational if it is a perfect square.
bool exact_sqrt(const mpq_class& q, mpq_class& out);

/// Smallest representable upper bound for sqrt(q) with relative slack about 2^-60.
mpq_class sqrt_upper(const mpq_class& q);

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
  using Real = double;
  static constexpr bool exact = false;

  static Real abs(const Complex& z) { return std::abs(z); }
  static Real abs_upper(const Complex& z) { return std::abs(z); }
  static Real abs2(const Complex& z) { return std::norm(z); }
  static Complex conj(const Complex& z) { return std::conj(z); }
  static Complex from_real(Real r) { return {r, 0.0}; }
  static Real sqrt(Real r) { return std::sqrt(r); }
  static double to_double(Real r) { return r; }
  static Complex to_complex(const Complex& z) { return z; }
  static Complex from_complex(const Complex& z) { return z; }
  static bool is_zero(const Complex& z) { return z == Complex{}; }
};

template <>
struct ScalarTraits<ExactComplex> {
  using Real = mpq_class;
  static constexpr bool exact = true;

  static Real abs(const ExactComplex& z);
  static Real abs_upper(const ExactComplex& z);
  static Real abs2(const ExactComplex& z) { return z.re * z.re + z.im * z.im; }
  static ExactComplex conj(const ExactComplex& z) { return {z.re, -z.im}; }
  static ExactComplex from_real(const Real& r) { return {r, 0}; }
  static Real sqrt(const Real& r);
  static double to_double(const Real& r) { return r.get_d(); }
  static Complex to_complex(const ExactComplex& z) { return {z.re.get_d(), z.im.get_d()}; }
  /// Exact conversion: every finite double is a dyadic rational.
  static ExactComplex from_complex(const Complex& z) { return {mpq_class(z.real()), mpq_class(z.imag())}; }
  static bool is_zero(const ExactComplex& z) { return z.re == 0 && z.im == 0; }
};

template <class S>
using RealOf = typename ScalarTraits<S>::Real;

/// Table lambda^0 .. lambda^n.
template <class S>
std::vector<S> power_table(const S& lambda, std::size_t n) {
  std::vector<S> out;
  out.reserve(n + 1);
  out.emplace_back(1);
  for (std::size_t k = 1; k <= n; ++k) out.push_back(out.back() * lambda);
  return out;
}

/// Real powers r^0 .. r^n.
template <class R>
std::vector<R> real_power_table(const R& r, std::size_t n) {
  std::vector<R> out;
  out.reserve(n + 1);
  out.emplace_back(1);
  for (std::size_t k = 1; k <= n; ++k) out.push_back(out.back() * r);
  return out;
}

}  // namespace hochsplit
