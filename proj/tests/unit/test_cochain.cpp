#include <doctest.h>

#include "gen.hpp"
#include "hochsplit/cochain.hpp"
#include "oracles.hpp"

using namespace hochsplit;

namespace {

oracle::Fn as_fn(const Cochain<Complex>& t) {
  return [&t](const oracle::Tuple& j) { return t[Index(j.data(), j.size())]; };
}

ExactComplex q(const char* re, const char* im = "0") { return {parse_rational(re), parse_rational(im)}; }

}  // namespace

TEST_SUITE("cochain") {

TEST_CASE("norms of simple cochains") {
  const DiscPoint<Complex> p({0.2, 0.1});
  Cochain<Complex> t = Cochain<Complex>::cube(p, 2, 4);
  CHECK(cochain_norm(t) == 0);
  t.at({3, 1}) = Complex(0, -1);
  CHECK(cochain_norm(t) == 1);
  CHECK_THROWS_AS(t.at({5, 0}), WindowTooSmall);
  CHECK_THROWS_AS(Cochain<Complex>::cube(p, kMaxDegree + 1, 1), DomainError);
}

TEST_CASE("norm of the derivation n lambda^{n-1}") {
  for (double r : {0.3, 0.8, 0.95, 0.99}) {
    const DiscPoint<Complex> p(std::polar(r, 0.4));
    for (std::size_t n : {5u, 20u, 60u}) {
      Cochain<Complex> psi = Cochain<Complex>::cube(p, 1, n);
      const auto pw = power_table(p.lambda(), n);
      for (std::size_t k = 1; k <= n; ++k) psi.at({k}) = static_cast<double>(k) * pw[k - 1];
      double scan = 0;
      for (std::size_t k = 1; k <= n; ++k) scan = std::max(scan, static_cast<double>(k) * std::pow(r, static_cast<double>(k - 1)));
      CHECK(psi.norm() == doctest::Approx(scan).epsilon(1e-13));
      if (r >= 1 - 1.0 / static_cast<double>(n))
        CHECK(psi.norm() == doctest::Approx(static_cast<double>(n) * std::pow(r, static_cast<double>(n - 1))).epsilon(1e-13));
    }
  }
}

TEST_CASE("coboundary matches the alternating sum") {
  gen::for_all(21, 12, [](gen::Rng& rng, std::size_t k) {
    const DiscPoint<Complex> p(rng.disc(1.0));
    const std::size_t n = 1 + k % 3;
    const std::size_t w = n == 3 ? 6 : 10;
    const auto t = random_cochain(n, w, p, 100 + k);
    const auto dt = coboundary(t);
    CHECK(dt.degree() == n + 1);
    CHECK(dt.window() == w / 2);
    double gap = 0;
    dt.for_each([&](Index i, const Complex& v) {
      gap = std::max(gap, std::abs(v - oracle::coboundary(as_fn(t), p.lambda(), oracle::Tuple(i.begin(), i.end()))));
    });
    CHECK(gap <= 1e-14);
  });
}

TEST_CASE("degree one coboundary formula") {
  const DiscPoint<Complex> p({-0.3, 0.6});
  const auto psi = random_cochain(1, 12, p, 5);
  const auto d = coboundary(psi);
  const auto pw = power_table(p.lambda(), 12);
  for (std::size_t j = 0; j <= 6; ++j)
    for (std::size_t k = 0; k <= 6; ++k) {
      const Complex expected = pw[j] * psi.at({k}) - psi.at({j + k}) + psi.at({j}) * pw[k];
      CHECK(std::abs(d.at({j, k}) - expected) <= 1e-15);
    }
}

TEST_CASE("point derivations are cocycles") {
  for (const Complex lam : {Complex(0), Complex(0.5, 0.5), Complex(-0.99, 0), Complex(0.6, 0.8)}) {
    const DiscPoint<Complex> p(lam);
    const Complex alpha(0.7, -1.3);
    Cochain<Complex> psi = Cochain<Complex>::cube(p, 1, 40);
    const auto pw = power_table(lam, 40);
    for (std::size_t k = 1; k <= 40; ++k) psi.at({k}) = static_cast<double>(k) * pw[k - 1] * alpha;
    CHECK(coboundary(psi).norm() <= 1e-12 * psi.norm());
  }
  const DiscPoint<ExactComplex> p(q("3/5", "4/5"));
  Cochain<ExactComplex> psi = Cochain<ExactComplex>::cube(p, 1, 12);
  const auto pw = power_table(p.lambda(), 12);
  for (std::size_t k = 1; k <= 12; ++k) psi.at({k}) = ExactComplex(static_cast<int>(k)) * pw[k - 1];
  CHECK(coboundary(psi).norm2() == 0);
}

TEST_CASE("delta o delta = 0") {
  gen::for_all(22, 10, [](gen::Rng& rng, std::size_t k) {
    const DiscPoint<Complex> p(rng.disc(1.0));
    for (std::size_t n : {1u, 2u}) {
      const std::size_t w = 8 + rng.index(0, 8);
      const auto t = random_cochain(n, w, p, 200 + k);
      const auto dd = coboundary(coboundary(t));
      CHECK(dd.window() == w / 4);
      CHECK(dd.norm() <= 1e-12 * t.norm());
    }
  });
  for (const auto& lam : {q("3/4"), q("-1/2", "1/3"), q("0")}) {
    const DiscPoint<ExactComplex> p(lam);
    for (std::size_t n : {1u, 2u}) {
      const auto t = random_cochain(n, 8, p, 7);
      CHECK(coboundary(coboundary(t)).norm2() == 0);
    }
  }
}

TEST_CASE("crude coboundary bound") {
  gen::for_all(23, 20, [](gen::Rng& rng, std::size_t k) {
    const DiscPoint<Complex> p(rng.disc(1.0));
    const std::size_t n = 1 + k % 3;
    const auto t = random_cochain(n, 6, p, 300 + k, rng.uniform(0.1, 10));
    CHECK(coboundary(t).norm() <= static_cast<double>(n + 3) * t.norm());
  });
}

TEST_CASE("coboundary window contract") {
  const DiscPoint<Complex> p(0.5);
  CHECK_THROWS_AS(coboundary(random_cochain(2, 1, p, 1)), WindowTooSmall);
  const auto t = random_cochain_box(p, {9, 4}, 3);
  const auto d = coboundary_on(t, {5, 4, 0});
  CHECK(d.windows() == std::vector<std::size_t>{5, 4, 0});
  CHECK_THROWS_AS(coboundary_on(t, {6, 4, 0}), WindowTooSmall);
}

TEST_CASE("apply_multilinear") {
  const DiscPoint<Complex> p({0.5, -0.2});
  const auto t = random_cochain(2, 30, p, 9);
  SUBCASE("basis tuples reproduce entries") {
    for (std::size_t j : {0u, 4u, 30u})
      for (std::size_t k : {0u, 7u, 29u}) {
        const std::vector<TruncatedSeries<Complex>> args{TruncatedSeries<Complex>::delta(j), TruncatedSeries<Complex>::delta(k)};
        const auto e = apply_multilinear(t, std::span(args));
        CHECK(e.value == t.at({j, k}));
        CHECK(e.error == 0);
      }
  }
  SUBCASE("linear in each slot") {
    gen::for_all(24, 10, [&](gen::Rng& rng, std::size_t) {
      const auto f = TruncatedSeries<Complex>::make(rng.poly(10));
      const auto g = TruncatedSeries<Complex>::make(rng.poly(10));
      const auto h = TruncatedSeries<Complex>::make(rng.poly(10));
      const Complex a = rng.complex();
      auto fg = f;
      for (std::size_t i = 0; i < fg.coeffs.size(); ++i) fg.coeffs[i] += a * g.coeffs[i];
      const std::vector<TruncatedSeries<Complex>> l{fg, h}, l1{f, h}, l2{g, h};
      const Complex lhs = apply_multilinear(t, std::span(l)).value;
      const Complex rhs = apply_multilinear(t, std::span(l1)).value + a * apply_multilinear(t, std::span(l2)).value;
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(lhs)));
    });
  }
  SUBCASE("blaschke argument carries its tail") {
    const std::size_t m = 20;
    const auto b = blaschke(p, m);
    const auto g = TruncatedSeries<Complex>::make({1.0, -0.5, 0.25});
    const std::vector<TruncatedSeries<Complex>> args{b, g};
    const auto e = apply_multilinear(t, std::span(args));
    const double r = std::abs(p.lambda());
    CHECK(e.error == doctest::Approx(t.norm() * (1 + r) * std::pow(r, 20.0) * g.norm_upper()).epsilon(1e-12));
  }
}

TEST_CASE("random_cochain is reproducible") {
  const DiscPoint<Complex> p(0.5);
  // Golden first entries for seeds 1, 42 and 20240601, window 3, degree 2.
  const std::vector<std::array<Complex, 3>> golden{
      {Complex(0x1.ea9012p-3, 0x1.1b39dp-2), Complex(0x1.54ed4dp-1, 0x1.6a664cp-4), Complex(0x1.017479p-1, -0x1.40a444p-2)},
      {Complex(-0x1.1db0188p-1, -0x1.5516dep-1), Complex(0x1.22f9a8p-1, 0x1.4f6a728p-1), Complex(0x1.940ebdp-1, 0x1.0f27328p-1)},
      {Complex(0x1.1e9e6ap-3, 0x1.3d336cp-2), Complex(0x1.cb846ap-3, -0x1.5ea7fbp-2), Complex(0x1.d0b4p-8, -0x1.31b05cp-2)}};
  const std::uint64_t seeds[] = {1, 42, 20240601};
  for (std::size_t s = 0; s < 3; ++s) {
    const auto t = random_cochain(2, 3, p, seeds[s]);
    for (std::size_t k = 0; k < 3; ++k) CHECK(t.values()[k] == golden[s][k]);
  }
  const auto e = random_cochain(1, 2, DiscPoint<ExactComplex>(q("1/2")), 1);
  CHECK(e.values()[0] == q("5093757147375/21262874181632", "717837215/2595565696"));
  CHECK(e.values()[1] == q("2941442124045/4417156808704", "95087925/1078407424"));
  gen::for_all(25, 5, [](gen::Rng& rng, std::size_t k) {
    const double scale = rng.uniform(0.1, 4);
    const auto t = random_cochain(3, 4, DiscPoint<ExactComplex>(q("1/3")), k, scale);
    for (const auto& v : t.values()) {
      mpq_class root;
      CHECK(exact_sqrt(ScalarTraits<ExactComplex>::abs2(v), root));
      CHECK(root <= mpq_class(scale));
    }
    CHECK(random_cochain(3, 4, DiscPoint<Complex>(0.0), k).norm() <= 1.0);
  });
}

TEST_CASE("restriction keeps entries") {
  const DiscPoint<Complex> p(0.25);
  const auto t = random_cochain_box(p, {6, 3}, 11);
  const auto r = t.restrict_to({2, 3});
  r.for_each([&](Index i, const Complex& v) { CHECK(v == t[i]); });
  CHECK_THROWS_AS(t.restrict_to({7, 0}), WindowTooSmall);
}

}  // TEST_SUITE
