#include "hochsplit/ratsemigroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hochsplit/errors.hpp"
#include "hochsplit/series.hpp"

namespace hochsplit::rat {

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Complex char_value(double t, double s, double x) { return std::exp(Complex(-t * x, s * x)); }

}  // namespace

RationalSeries RationalSeries::delta(const Rational& x, Complex v) {
  RationalSeries out;
  out.add(x, v);
  return out;
}

RationalSeries& RationalSeries::add(const Rational& x, Complex v) {
  Rational key = x;
  key.canonicalize();
  if (key < 0) throw DomainError("negative key " + to_string(key));
  terms_[key] += v;
  return *this;
}

Complex RationalSeries::at(const Rational& x) const {
  auto it = terms_.find(x);
  return it == terms_.end() ? Complex{} : it->second;
}

double RationalSeries::norm() const {
  double s = 0;
  for (const auto& [k, v] : terms_) s += std::abs(v);
  return s;
}

RationalSeries RationalSeries::pruned() const {
  RationalSeries out;
  for (const auto& [k, v] : terms_)
    if (v != Complex{}) out.terms_.emplace(k, v);
  return out;
}

RationalSeries& RationalSeries::operator+=(const RationalSeries& o) {
  for (const auto& [k, v] : o.terms_) terms_[k] += v;
  return *this;
}

RationalSeries& RationalSeries::operator-=(const RationalSeries& o) {
  for (const auto& [k, v] : o.terms_) terms_[k] -= v;
  return *this;
}

RationalSeries& RationalSeries::operator*=(Complex s) {
  for (auto& [k, v] : terms_) v *= s;
  return *this;
}

RationalSeries convolve(const RationalSeries& a, const RationalSeries& b) {
  RationalSeries out;
  for (const auto& [x, u] : a.terms())
    for (const auto& [y, v] : b.terms()) out.add(x + y, u * v);
  return out;
}

RatChar RatChar::finite(double t, double s) {
  if (!(t >= 0) || !std::isfinite(t) || !std::isfinite(s)) throw DomainError("character needs finite t >= 0");
  return {t, s, false};
}

RatChar RatChar::at_infinity() { return {0, 0, true}; }

Complex RatChar::operator()(const Rational& x) const {
  if (infinite) return x == 0 ? Complex(1) : Complex{};
  return char_value(t, s, x.get_d());
}

Complex RatChar::operator()(const RationalSeries& b) const {
  Complex acc{};
  for (const auto& [x, v] : b.terms()) acc += v * (*this)(x);
  return acc;
}

Complex RatChar::point(const Rational& alpha) const {
  if (infinite) return 0.0;
  return char_value(t, s, alpha.get_d());
}

TensorSeries TensorSeries::elementary(const RationalSeries& a, const RationalSeries& b) {
  TensorSeries out;
  for (const auto& [x, u] : a.terms())
    for (const auto& [y, v] : b.terms()) out.add(x, y, u * v);
  return out;
}

TensorSeries& TensorSeries::add(const Rational& x, const Rational& y, Complex v) {
  Key key{x, y};
  key.first.canonicalize();
  key.second.canonicalize();
  if (key.first < 0 || key.second < 0) throw DomainError("negative tensor key");
  terms_[key] += v;
  return *this;
}

double TensorSeries::norm() const {
  double s = 0;
  for (const auto& [k, v] : terms_) s += std::abs(v);
  return s;
}

RationalSeries TensorSeries::multiply() const {
  RationalSeries out;
  for (const auto& [k, v] : terms_) out.add(k.first + k.second, v);
  return out;
}

TensorSeries TensorSeries::right_act(const RationalSeries& b) const {
  TensorSeries out;
  for (const auto& [k, v] : terms_)
    for (const auto& [y, w] : b.terms()) out.add(k.first, k.second + y, v * w);
  return out;
}

TensorSeries& TensorSeries::operator-=(const TensorSeries& o) {
  for (const auto& [k, v] : o.terms_) terms_[k] -= v;
  return *this;
}

Rational parse(const std::string& text) {
  std::string trimmed;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') trimmed += ch;
  return parse_rational(trimmed);
}

std::vector<Rational> parse_chain(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(parse(item));
  }
  return out;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational join(Rational a1, Rational a2) {
  a1.canonicalize();
  a2.canonicalize();
  if (a1 <= 0 || a2 <= 0) throw DomainError("join needs positive rationals");
  mpz_class g;
  const mpz_class x = a1.get_num() * a2.get_den();
  const mpz_class y = a2.get_num() * a1.get_den();
  mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  Rational out(g, a1.get_den() * a2.get_den());
  out.canonicalize();
  return out;
}

bool refines(const Rational& alpha, const Rational& beta) {
  if (alpha <= 0 || beta <= 0) return false;
  Rational k = alpha / beta;
  k.canonicalize();
  return k.get_den() == 1;
}

std::pair<std::size_t, Rational> bucket(const Rational& x, const Rational& alpha) {
  if (alpha <= 0) throw DomainError("bucket width must be positive");
  if (x < 0) throw DomainError("bucket needs a nonnegative point");
  Rational q = x / alpha;
  q.canonicalize();
  mpz_class n;
  mpz_fdiv_q(n.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  Rational r = x - Rational(n) * alpha;
  return {static_cast<std::size_t>(n.get_ui()), r};
}

RationalSeries theta(const RationalSeries& b, const Rational& alpha, const RatChar& c) {
  if (c.infinite) return theta_inf(b, alpha);
  RationalSeries out;
  for (const auto& [x, v] : b.terms()) {
    auto [n, r] = bucket(x, alpha);
    const Complex w = r == 0 ? Complex(1) : char_value(c.t, c.s, r.get_d());
    out.add(Rational(static_cast<unsigned long>(n)) * alpha, v * w);
  }
  return out;
}

RationalSeries theta_inf(const RationalSeries& b, const Rational& alpha) {
  RationalSeries out;
  for (const auto& [x, v] : b.terms()) {
    auto [n, r] = bucket(x, alpha);
    if (r == 0) out.add(x, v);
  }
  return out;
}

std::vector<double> theta_converges(const RationalSeries& b, const std::vector<Rational>& chain, const RatChar& c) {
  std::vector<double> out;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (chain[i] <= 0) throw DomainError("chain entries must be positive");
    if (i > 0 && !refines(chain[i - 1], chain[i]))
      throw ChainNotRefining(to_string(chain[i]) + " does not refine " + to_string(chain[i - 1]));
    out.push_back((theta(b, chain[i], c) - b).norm());
  }
  return out;
}

namespace {

/// theta_alpha(b) as Taylor coefficients in the variable of alpha Z_+.
TruncatedSeries<Complex> to_disc(const RationalSeries& b, const Rational& alpha, const RatChar& c) {
  TruncatedSeries<Complex> out;
  out.coeffs.assign(1, 0.0);
  const RationalSeries th = theta(b, alpha, c);
  for (const auto& [x, v] : th.terms()) {
    Rational q = x / alpha;
    q.canonicalize();
    const std::size_t n = q.get_num().get_ui();
    if (out.coeffs.size() <= n) out.coeffs.resize(n + 1, 0.0);
    out.coeffs[n] += v;
  }
  return out;
}

RationalSeries from_disc(const std::vector<Complex>& coeffs, const Rational& alpha) {
  RationalSeries out;
  for (std::size_t n = 0; n < coeffs.size(); ++n)
    if (coeffs[n] != Complex{}) out.add(Rational(static_cast<unsigned long>(n)) * alpha, coeffs[n]);
  return out;
}

}  // namespace

FlatWitness flat_witness_residuals(const RationalSeries& cvec, const RationalSeries& b, const Rational& alpha,
                                   const RatChar& c, std::size_t cutoff, double tol) {
  if (c.infinite || !(c.t > 0)) throw DomainError("flat witness needs a finite character with t > 0");
  if (alpha <= 0) throw DomainError("alpha must be positive");
  if (std::abs(c(cvec)) > tol * (1.0 + cvec.norm())) throw NotInIdeal("c is not in the maximal ideal");
  const DiscPoint<Complex> p(c.point(alpha));
  const double r = std::abs(p.lambda());
  if (cutoff == 0) cutoff = default_blaschke_cutoff(r);

  const auto bm = blaschke(p, cutoff);
  const RationalSeries left = from_disc(bm.coeffs, alpha);
  const auto g = blaschke_divide(to_disc(cvec, alpha, c), p, tol);
  const RationalSeries sg = from_disc(g.coeffs, alpha);
  const auto gb = blaschke_divide(to_disc(convolve(cvec, b), alpha, c), p, tol);
  const RationalSeries sgb = from_disc(gb.coeffs, alpha);

  const TensorSeries rho = TensorSeries::elementary(left, sg);
  FlatWitness out;
  out.lambda = p.lambda();
  out.cutoff = cutoff;
  out.r1 = (rho.multiply() - cvec).norm();
  // Both sides are elementary tensors with left factor b_M, so the tensor norm factors.
  out.r2 = left.norm() * (convolve(sg, b) - sgb).norm();
  out.theta_defect = (theta(cvec, alpha, c) - cvec).norm();
  out.tail = bm.tail * g.norm_lower();
  const double cn = cvec.norm();
  out.rho_ratio = cn > 0 ? rho.norm() / cn : 0.0;
  out.norm_bound = (1 + 2 * r) * (1 + 2 * r);
  return out;
}

InfinityWitness infinity_witness(const RationalSeries& f, const Rational& alpha) {
  if (alpha <= 0) throw DomainError("alpha must be positive");
  if (f.at(0) != Complex{}) throw NotInIdeal("f(0) must vanish for the character at infinity");
  const RationalSeries th = theta_inf(f, alpha);
  InfinityWitness out;
  for (const auto& [x, v] : th.terms())
    if (x != 0) out.rho.add(alpha, x - alpha, v);
  out.r = (out.rho.multiply() - f).norm();
  out.rho_norm = out.rho.norm();
  return out;
}

RatCochain smooth_random_cochain(std::uint64_t seed, std::size_t terms) {
  std::mt19937_64 rng(seed);
  struct Term {
    Complex a;
    double w;
    double v;
  };
  std::vector<Term> ts;
  for (std::size_t k = 0; k < terms; ++k) {
    const double rad = std::sqrt(unit_uniform(rng)) / static_cast<double>(terms);
    const double ph = 2 * std::numbers::pi * unit_uniform(rng);
    const double w = 2 * unit_uniform(rng) - 1;
    const double v = 2 * unit_uniform(rng) - 1;
    ts.push_back({std::polar(rad, ph), w, v});
  }
  return [ts](const Rational& x, const Rational& y) {
    const double xd = x.get_d();
    const double yd = y.get_d();
    Complex acc{};
    for (const auto& t : ts) acc += t.a * std::exp(Complex(0, t.w * xd + t.v * yd));
    return acc;
  };
}

PrelimitReport prelimit_flat_split(const RatCochain& f, const RatChar& c, const Rational& alpha,
                                   const std::vector<Rational>& window, std::size_t cutoff) {
  if (c.infinite || !(c.t > 0)) throw DomainError("pre-limit splitting needs a finite character with t > 0");
  if (alpha <= 0) throw DomainError("alpha must be positive");
  if (window.empty()) throw WindowTooSmall("empty window");
  const DiscPoint<Complex> p(c.point(alpha));
  if (cutoff == 0) cutoff = default_blaschke_cutoff(std::abs(p.lambda()));
  const auto bm = blaschke(p, cutoff).coeffs;

  std::vector<Rational> xs = window;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  // s_1 F is needed on window sums as well.
  std::vector<Rational> sums = xs;
  for (const auto& x : xs)
    for (const auto& y : xs) sums.push_back(x + y);
  std::sort(sums.begin(), sums.end());
  sums.erase(std::unique(sums.begin(), sums.end()), sums.end());

  std::size_t nmax = 0;
  for (const auto& x : sums) nmax = std::max(nmax, bucket(x, alpha).first);
  std::vector<std::vector<Complex>> units(nmax + 1);
  for (std::size_t n = 0; n <= nmax; ++n) units[n] = divided_unit(p, n);
  std::vector<Rational> akeys(cutoff + 1);
  for (std::size_t a = 0; a <= cutoff; ++a) akeys[a] = Rational(static_cast<unsigned long>(a)) * alpha;
  const Rational zero(0);

  auto mu = [&](const Rational& x) { return c(x); };
  auto df = [&](const Rational& x, const Rational& y, const Rational& z) {
    return mu(x) * f(y, z) - f(x + y, z) + f(x, y + z) - f(x, y) * mu(z);
  };

  // K1(b) = sum_a b_M[a] F(a alpha, b alpha).
  std::vector<Complex> k1(nmax + 1);
  for (std::size_t b = 0; b <= nmax; ++b) {
    Complex acc{};
    const Rational bk = Rational(static_cast<unsigned long>(b)) * alpha;
    for (std::size_t a = 0; a <= cutoff; ++a) acc += bm[a] * f(akeys[a], bk);
    k1[b] = acc;
  }
  const Complex f00 = f(zero, zero);
  std::map<Rational, Complex> s1;
  for (const auto& x : sums) {
    auto [n, r] = bucket(x, alpha);
    const Complex cx = r == 0 ? Complex(1) : c(r);
    Complex acc{};
    for (std::size_t b = 0; b <= n; ++b) acc += units[n][b] * k1[b];
    s1[x] = -cx * acc + mu(x) * f00;
  }

  std::size_t nwin = 0;
  for (const auto& x : xs) nwin = std::max(nwin, bucket(x, alpha).first);
  PrelimitReport out;
  out.lambda = p.lambda();
  out.cutoff = cutoff;
  for (const auto& y : xs) {
    // K2(b, y) = sum_a b_M[a] (delta F)(a alpha, b alpha, y).
    std::vector<Complex> k2(nwin + 1);
    for (std::size_t b = 0; b <= nwin; ++b) {
      const Rational bk = Rational(static_cast<unsigned long>(b)) * alpha;
      Complex acc{};
      for (std::size_t a = 0; a <= cutoff; ++a) acc += bm[a] * df(akeys[a], bk, y);
      k2[b] = acc;
    }
    const Complex g00 = df(zero, zero, y);
    for (const auto& x : xs) {
      auto [n, r] = bucket(x, alpha);
      const Complex cx = r == 0 ? Complex(1) : c(r);
      Complex s2{};
      for (std::size_t b = 0; b <= n; ++b) s2 += units[n][b] * k2[b];
      s2 = -cx * s2 + mu(x) * g00;
      const Complex ds1 = mu(x) * s1[y] - s1[x + y] + s1[x] * mu(y);
      const Complex fxy = f(x, y);
      out.residual = std::max(out.residual, std::abs(ds1 + s2 - fxy));
      out.norm = std::max(out.norm, std::abs(fxy));
    }
  }
  return out;
}

RationalSeries random_series(std::uint64_t seed, long den, long count, std::size_t terms) {
  if (den <= 0 || count < 0) throw DomainError("random series needs den > 0 and count >= 0");
  std::mt19937_64 rng(seed);
  RationalSeries out;
  for (std::size_t k = 0; k < terms; ++k) {
    const long n = static_cast<long>(rng() % static_cast<std::uint64_t>(count + 1));
    const double re = unit_uniform(rng) - 0.5;
    const double im = unit_uniform(rng) - 0.5;
    out.add(Rational(n, den), Complex(re, im));
  }
  return out;
}

RationalSeries ideal_part(const RationalSeries& g, const RatChar& c) {
  return g - RationalSeries::delta(Rational(0), c(g));
}

std::vector<Rational> grid_window(long den, long count) {
  if (den <= 0 || count < 0) throw DomainError("grid window needs den > 0 and count >= 0");
  std::vector<Rational> out;
  for (long n = 0; n <= count; ++n) {
    Rational q(n, den);
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

}  // namespace hochsplit::rat
