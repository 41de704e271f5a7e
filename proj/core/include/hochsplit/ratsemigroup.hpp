#pragma once

// l^1(G_+) for a subgroup G of the rationals.
//
// Keys are exact rationals (mpq_class) so bucketing and joins never round;
// values are double complex. Characters are x -> e^{(-t + i s) x} for t >= 0,
// plus the character b -> b(0) at t = infinity.

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hochsplit/scalar.hpp"

namespace hochsplit::rat {

using Rational = mpq_class;

/// Finitely supported function on the nonnegative rationals.
class RationalSeries {
 public:
  RationalSeries() = default;

  static RationalSeries delta(const Rational& x, Complex v = 1.0);

  /// Adds v at x; rejects negative keys.
  RationalSeries& add(const Rational& x, Complex v);
  Complex at(const Rational& x) const;
  const std::map<Rational, Complex>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  double norm() const;
  /// Drops exact zeros.
  RationalSeries pruned() const;

  RationalSeries& operator+=(const RationalSeries& o);
  RationalSeries& operator-=(const RationalSeries& o);
  RationalSeries& operator*=(Complex s);
  friend RationalSeries operator+(RationalSeries a, const RationalSeries& b) { return a += b; }
  friend RationalSeries operator-(RationalSeries a, const RationalSeries& b) { return a -= b; }
  friend RationalSeries operator*(RationalSeries a, Complex s) { return a *= s; }

 private:
  std::map<Rational, Complex> terms_;
};

/// Convolution in l^1(G_+).
RationalSeries convolve(const RationalSeries& a, const RationalSeries& b);

/// Character of l^1(G_+): either x -> e^{(-t + i s) x} or evaluation at 0.
struct RatChar {
  double t{0};
  double s{0};
  bool infinite{false};

  static RatChar finite(double t, double s);
  static RatChar at_infinity();

  /// Value on delta_x.
  Complex operator()(const Rational& x) const;
  Complex operator()(const RationalSeries& b) const;
  /// e^{(-t + i s) alpha}, the point of the disc seen on alpha Z_+.
  Complex point(const Rational& alpha) const;
};

/// Element of l^1(G_+ x G_+).
class TensorSeries {
 public:
  using Key = std::pair<Rational, Rational>;

  static TensorSeries elementary(const RationalSeries& a, const RationalSeries& b);

  TensorSeries& add(const Rational& x, const Rational& y, Complex v);
  const std::map<Key, Complex>& terms() const { return terms_; }
  double norm() const;
  /// Multiplication map pi(x (x) y) = x * y.
  RationalSeries multiply() const;
  /// Right module action (x (x) y) . b = x (x) (y * b).
  TensorSeries right_act(const RationalSeries& b) const;

  TensorSeries& operator-=(const TensorSeries& o);

 private:
  std::map<Key, Complex> terms_;
};

Rational parse(const std::string& text);
std::vector<Rational> parse_chain(const std::string& text);
std::string to_string(const Rational& q);

/// Largest gamma with a1/gamma, a2/gamma in Z_+: gcd(p1 q2, p2 q1)/(q1 q2).
Rational join(Rational a1, Rational a2);

/// True if beta refines alpha, i.e. alpha = k beta for a positive integer k.
bool refines(const Rational& alpha, const Rational& beta);

/// Splits x = n alpha + r with 0 <= r < alpha.
std::pair<std::size_t, Rational> bucket(const Rational& x, const Rational& alpha);

/// theta_alpha: contractive projection onto l^1(alpha Z_+) preserving the character.
RationalSeries theta(const RationalSeries& b, const Rational& alpha, const RatChar& c);
/// theta for the character at infinity: keeps the values on alpha Z_+.
RationalSeries theta_inf(const RationalSeries& b, const Rational& alpha);

/// ||theta_alpha(b) - b|| along a refining chain.
std::vector<double> theta_converges(const RationalSeries& b, const std::vector<Rational>& chain, const RatChar& c);

struct FlatWitness {
  Complex lambda{};       ///< the disc point e^{(-t+is) alpha}
  std::size_t cutoff{0};  ///< Blaschke cutoff used for rho_alpha
  double r1{0};           ///< ||pi rho(c) - c||
  double r2{0};           ///< ||rho(c) . b - rho(c * b)||
  double theta_defect{0}; ///< ||theta(c) - c||
  double tail{0};         ///< certified size of the Blaschke truncation in r1
  double rho_ratio{0};    ///< ||rho(c)|| / ||c||
  double norm_bound{0};   ///< (1 + 2|lambda|)^2
};

/// rho_alpha = sigma_alpha o theta_alpha on the maximal ideal and its two defects.
FlatWitness flat_witness_residuals(const RationalSeries& cvec, const RationalSeries& b, const Rational& alpha,
                                   const RatChar& c, std::size_t cutoff = 0, double tol = 1e-10);

struct InfinityWitness {
  TensorSeries rho;
  double r{0};
  double rho_norm{0};
};

/// rho_alpha(f) = delta_alpha (x) (delta_{-alpha} * theta_alpha(f)) for f(0) = 0.
InfinityWitness infinity_witness(const RationalSeries& f, const Rational& alpha);

/// Degree-2 cochain on G_+ given by its values on pairs of basis points.
using RatCochain = std::function<Complex(const Rational&, const Rational&)>;

/// Smooth random cochain sum_k a_k e^{i (w_k x + v_k y)}: Lipschitz in both slots.
RatCochain smooth_random_cochain(std::uint64_t seed, std::size_t terms = 4);

struct PrelimitReport {
  Complex lambda{};
  std::size_t cutoff{0};
  double residual{0};
  double norm{0};  ///< max |F| over the window
};

/// sup over window pairs of |(delta s_1 + s_2 delta - id) F| with the
/// pre-limit maps built from rho_alpha. cutoff = 0 selects the default.
PrelimitReport prelimit_flat_split(const RatCochain& f, const RatChar& c, const Rational& alpha,
                                   const std::vector<Rational>& window, std::size_t cutoff = 0);

/// Random series with `terms` draws of points n/den, 0 <= n <= count, and
/// values with real and imaginary parts in [-1/2, 1/2).
RationalSeries random_series(std::uint64_t seed, long den, long count, std::size_t terms);

/// g - chi(g) delta_0, the projection onto the maximal ideal of chi.
RationalSeries ideal_part(const RationalSeries& g, const RatChar& c);

/// Points {n/den : 0 <= n <= count}.
std::vector<Rational> grid_window(long den, long count);

}  // namespace hochsplit::rat
