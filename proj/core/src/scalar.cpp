#include "hochsplit/scalar.hpp"

#include <cmath>

#include "hochsplit/errors.hpp"

namespace hochsplit {

ExactComplex& ExactComplex::operator/=(const ExactComplex& o) {
  const mpq_class d = o.re * o.re + o.im * o.im;
  if (d == 0) throw DomainError("exact complex division by zero");
  mpq_class r = (re * o.re + im * o.im) / d;
  im = (im * o.re - re * o.im) / d;
  re = std::move(r);
  return *this;
}

mpq_class parse_rational(const std::string& text) {
  if (text.empty()) throw DomainError("empty rational literal");
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t frac = text.size() - dot - 1;
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac; ++i) den *= 10;
    mpq_class q;
    try {
      q = mpq_class(mpz_class(digits, 10), den);
    } catch (const std::invalid_argument&) {
      throw DomainError("bad rational literal: " + text);
    }
    q.canonicalize();
    return q;
  }
  mpq_class q;
  if (q.set_str(text, 10) != 0) throw DomainError("bad rational literal: " + text);
  if (q.get_den() == 0) throw DomainError("zero denominator: " + text);
  q.canonicalize();
  return q;
}

bool exact_sqrt(const mpq_class& q, mpq_class& out) {
  if (q < 0) return false;
  const mpz_class& n = q.get_num();
  const mpz_class& d = q.get_den();
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0 || mpz_perfect_square_p(d.get_mpz_t()) == 0) return false;
  mpz_class rn;
  mpz_class rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  out = mpq_class(rn, rd);
  out.canonicalize();
  return true;
}

mpq_class sqrt_upper(const mpq_class& q) {
  if (q < 0) throw DomainError("sqrt of negative rational");
  mpq_class exact;
  if (exact_sqrt(q, exact)) return exact;
  // sqrt(n/d) = sqrt(n d 4^64) / (d 2^64); take the integer ceiling of the numerator.
  mpz_class scaled = q.get_num() * q.get_den();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 128);
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  if (root * root < scaled) root += 1;
  mpz_class den = q.get_den();
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), 64);
  mpq_class out(root, den);
  out.canonicalize();
  return out;
}

mpq_class ScalarTraits<ExactComplex>::abs(const ExactComplex& z) {
  mpq_class out;
  if (!exact_sqrt(abs2(z), out)) throw InexactModulus("modulus is irrational");
  return out;
}

mpq_class ScalarTraits<ExactComplex>::abs_upper(const ExactComplex& z) { return sqrt_upper(abs2(z)); }

mpq_class ScalarTraits<ExactComplex>::sqrt(const mpq_class& r) {
  mpq_class out;
  if (!exact_sqrt(r, out)) throw InexactModulus("square root is irrational");
  return out;
}

}  // namespace hochsplit
