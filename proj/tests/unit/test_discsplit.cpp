#include <doctest.h>

#include "gen.hpp"
#include "hochsplit/discsplit.hpp"
#include "oracles.hpp"

using namespace hochsplit;

namespace {

ExactComplex q(const char* re, const char* im = "0") { return {parse_rational(re), parse_rational(im)}; }

oracle::Fn as_fn(const Cochain<Complex>& t) {
  return [&t](const oracle::Tuple& j) { return t[Index(j.data(), j.size())]; };
}

Cochain<Complex> to_float(const Cochain<ExactComplex>& t, Complex lam) {
  Cochain<Complex> out(DiscPoint<Complex>(lam), t.windows());
  for (std::size_t k = 0; k < t.size(); ++k) out.values()[k] = ScalarTraits<ExactComplex>::to_complex(t.values()[k]);
  return out;
}

}  // namespace

TEST_SUITE("discsplit") {

TEST_CASE("split_map at lambda = 0 shifts the first slot") {
  const DiscPoint<Complex> p(0.0);
  const auto t = random_cochain_box(p, {4, 6, 5}, 31);
  const auto s = split_map(t, 4, 5).value;
  s.for_each([&](Index i, const Complex& v) {
    const std::size_t j = i[0];
    const Complex expected = j == 0 ? t.at({0, 0, i[1]}) : -t.at({1, j - 1, i[1]});
    CHECK(v == expected);
  });
}

TEST_CASE("split_map agrees with the coefficient formula") {
  gen::for_all(41, 8, [](gen::Rng& rng, std::size_t k) {
    const DiscPoint<Complex> p(rng.disc(0.9));
    const std::size_t m = 6 + rng.index(0, 10);
    const std::size_t deg = 2 + k % 2;
    std::vector<std::size_t> box(deg, 5);
    box[0] = m;
    const auto t = random_cochain_box(p, box, 400 + k);
    const auto s = split_map(t, m).value;
    double gap = 0;
    s.for_each([&](Index i, const Complex& v) {
      gap = std::max(gap, std::abs(v - oracle::split(as_fn(t), p.lambda(), m, oracle::Tuple(i.begin(), i.end()))));
    });
    CHECK(gap <= 1e-13);
  });
  CHECK_THROWS_AS(split_map(random_cochain(1, 5, DiscPoint<Complex>(0.5), 1), 3), DomainError);
  CHECK_THROWS_AS(split_map(random_cochain_box(DiscPoint<Complex>(0.5), {3, 5}, 1), 4), WindowTooSmall);
}

TEST_CASE("split error bound at 0.9 with cutoff 400") {
  const SplitKernel<Complex> k(DiscPoint<Complex>(0.9), 400, 4);
  CHECK(k.split_error(1.0) == doctest::Approx(2.8 * 1.9 * std::pow(0.9, 400)).epsilon(1e-12));
  CHECK(k.split_error(1.0) < 1e-17);
}

TEST_CASE("splitting identity") {
  SUBCASE("lambda = 0 is exact") {
    for (std::size_t n : {1u, 2u, 3u}) {
      const auto rep = splitting_identity_check(n, DiscPoint<Complex>(0.0), 6, 1, 50 + n);
      CHECK(rep.residual_sup == 0);
      CHECK(rep.bound_check);
    }
  }
  SUBCASE("lambda = 0.5, cutoff 120") {
    for (std::size_t n : {1u, 2u}) {
      const auto rep = splitting_identity_check(n, DiscPoint<Complex>(0.5), 8, 120, 60 + n);
      CHECK(rep.certified_error <= 2 * 1.5 * std::pow(0.5, 120) * (1 + 1e-10));
      CHECK(rep.bound_check);
      CHECK(rep.residual_sup <= 1e-14);
    }
  }
  SUBCASE("random points, tail dominated cutoffs") {
    gen::for_all(42, 12, [](gen::Rng& rng, std::size_t k) {
      const DiscPoint<Complex> p(rng.disc(0.95));
      const std::size_t m = 3 + rng.index(0, 20);
      const auto rep = splitting_identity_check(1 + k % 2, p, 5, m, 70 + k);
      CHECK(rep.bound_check);
      CHECK(rep.residual_sup <= rep.certified_error + 1e-10);
    });
  }
  SUBCASE("exact rational point 3/4 with cutoff 64") {
    const DiscPoint<ExactComplex> p(q("3/4"));
    const auto rep = splitting_identity_check(1, p, 3, 64, 81);
    CHECK(rep.exact);
    CHECK(rep.bound_check);
    CHECK(rep.residual_sup > 0);
    CHECK(rep.residual_sup <= rep.certified_error);
    // The same defect from the float reference formulas.
    const auto te = random_cochain_box(p, identity_check_box(2, 3, 64), 81);
    const auto t = to_float(te, 0.75);
    double worst = 0;
    for (std::size_t j = 0; j <= 3; ++j)
      for (std::size_t k = 0; k <= 3; ++k) {
        auto s1 = [&](const oracle::Tuple& x) { return oracle::split(as_fn(t), 0.75, 64, x); };
        auto dt = [&](const oracle::Tuple& x) { return oracle::coboundary(as_fn(t), 0.75, x); };
        auto s2dt = [&](const oracle::Tuple& x) { return oracle::split(dt, 0.75, 64, x); };
        const Complex res = oracle::coboundary(s1, 0.75, {j, k}) + s2dt({j, k}) - t.at({j, k});
        worst = std::max(worst, std::abs(res));
      }
    CHECK(rep.residual_sup == doctest::Approx(worst).epsilon(1e-6));
  }
  SUBCASE("exact point (3+4i)/10") {
    for (std::size_t n : {1u, 2u}) {
      const auto rep = splitting_identity_check(n, DiscPoint<ExactComplex>(q("3/10", "2/5")), 3, 24, 90 + n);
      CHECK(rep.bound_check);
    }
  }
}

TEST_CASE("exact mode needs a rational modulus") {
  CHECK_THROWS_AS(splitting_identity_check(1, DiscPoint<ExactComplex>(q("1/2", "1/2")), 3, 8, 1), InexactModulus);
}

TEST_CASE("norm audit") {
  SUBCASE("lambda = 0") {
    const auto rep = norm_audit(DiscPoint<Complex>(0.0), 1, 20, 1);
    CHECK(rep.division_sup == 1);
    CHECK(rep.operator_norm == 1);
    CHECK(rep.certified_error == 2);
    CHECK(oracle::split_opnorm(0.0, 1, 20) == 1);
    CHECK(rep.bound_check);
  }
  SUBCASE("lambda = 0.9, N = 50") {
    const auto rep = norm_audit(DiscPoint<Complex>(0.9), 1, 50, default_blaschke_cutoff(0.9));
    CHECK(rep.division_sup == doctest::Approx(2.8 - std::pow(0.9, 50)).epsilon(1e-12));
    CHECK(rep.bound_check);
  }
  SUBCASE("row norms match brute force") {
    gen::for_all(43, 20, [](gen::Rng& rng, std::size_t) {
      const DiscPoint<Complex> p(rng.disc(0.99));
      const std::size_t m = 1 + rng.index(0, 60);
      const std::size_t n = rng.index(1, 15);
      const auto rep = norm_audit(p, 1, n, m);
      CHECK(rep.operator_norm == doctest::Approx(oracle::split_opnorm(p.lambda(), m, n)).epsilon(1e-12));
    });
  }
  SUBCASE("default grid stays below 10") {
    for (double r : {0.0, 0.25, 0.5, 0.75, 0.9, 0.99})
      for (int k = 0; k < 8; ++k) {
        const DiscPoint<Complex> p(std::polar(r, std::numbers::pi * k / 4));
        for (std::size_t n : {1u, 2u}) {
          const auto rep = norm_audit(p, n, 50, default_blaschke_cutoff(r));
          CHECK(rep.operator_norm <= 10);
          CHECK(rep.bound_check);
        }
      }
  }
  SUBCASE("exact audit") {
    const auto ex = norm_audit(DiscPoint<ExactComplex>(q("-3/10", "2/5")), 1, 12, 30);
    const auto fl = norm_audit(DiscPoint<Complex>(Complex(-0.3, 0.4)), 1, 12, 30);
    CHECK(ex.bound_check);
    CHECK(ex.exact);
    CHECK(ex.operator_norm == doctest::Approx(fl.operator_norm).epsilon(1e-12));
    CHECK(ex.residual_sup == 0);
    // |lambda|^2 = 9/20 is not a rational square
    CHECK_THROWS_AS(norm_audit(DiscPoint<ExactComplex>(q("-3/5", "3/10")), 1, 12, 30), InexactModulus);
  }
}

TEST_CASE("truncated norm along rays") {
  // Nondecreasing while 1 + 2r - r^N is, i.e. for N r^{N-1} <= 2; beyond that
  // point the division norm itself decreases.
  for (double ph : {0.0, 2.0, std::numbers::pi})
    for (std::size_t n : {6u, 50u}) {
      const double rstar = std::pow(2.0 / static_cast<double>(n), 1.0 / static_cast<double>(n - 1));
      double prev = 0;
      for (int k = 0; k <= 99; ++k) {
        const double r = k / 100.0;
        const auto rep = norm_audit(DiscPoint<Complex>(std::polar(r, ph)), 1, n, default_blaschke_cutoff(r));
        if (r <= rstar) CHECK(rep.operator_norm >= prev - 1e-12);
        prev = rep.operator_norm;
      }
    }
  const auto a = norm_audit(DiscPoint<Complex>(0.97), 1, 50, default_blaschke_cutoff(0.97));
  const auto b = norm_audit(DiscPoint<Complex>(0.99), 1, 50, default_blaschke_cutoff(0.99));
  CHECK(b.operator_norm < a.operator_norm);
}

TEST_CASE("stabilize") {
  SUBCASE("cocycles are fixed") {
    const DiscPoint<ExactComplex> p(q("3/10", "2/5"));
    const std::size_t m = 12;
    const auto a = random_cochain(1, 40, p, 3);
    const auto t = coboundary_on(a, {m + 4, 8});
    const auto st = stabilize(t, m);
    CHECK(st.s.windows() == std::vector<std::size_t>{4, 4});
    st.s.for_each([&](Index i, const ExactComplex& v) { CHECK(v == t[i]); });
    CHECK(st.distance == 0);
  }
  SUBCASE("noisy derivation") {
    const DiscPoint<Complex> p({0.6, -0.3});
    const std::size_t m = default_blaschke_cutoff(std::abs(p.lambda()));
    const std::size_t w = m + 12;
    Cochain<Complex> psi(p, {w});
    const auto pw = power_table(p.lambda(), w);
    const auto noise = random_cochain(1, w, p, 8, 0.1);
    for (std::size_t k = 1; k <= w; ++k) psi.at({k}) = static_cast<double>(k) * pw[k - 1] + noise.at({k});
    const auto st = stabilize(psi, m);
    CHECK(st.bound_check);
    CHECK(st.distance <= 10 * st.coboundary_norm + st.certified_error + 1e-10);
    CHECK(st.defect_after <= st.certified_error + 1e-10 * psi.norm());
  }
  SUBCASE("near the boundary with unit coboundary") {
    const DiscPoint<Complex> p(0.99);
    const std::size_t m = default_blaschke_cutoff(0.99);
    auto t = random_cochain_box(p, {m + 6, 12}, 12);
    const auto pw = power_table(p.lambda(), std::max<std::size_t>(m, 12));
    DenseSource<Complex> src{&t};
    CoboundaryView<Complex, DenseSource<Complex>> g(src, 2, &pw);
    const double dn = materialize(p, {m, 6, 6}, g).norm();
    for (auto& v : t.values()) v /= dn;
    const auto st = stabilize(t, m);
    CHECK(st.coboundary_norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(st.distance <= 10 + st.certified_error + 1e-10);
    CHECK(st.bound_check);
  }
  SUBCASE("window checks") {
    CHECK_THROWS_AS(stabilize(random_cochain(1, 5, DiscPoint<Complex>(0.5), 1), 8), WindowTooSmall);
    CHECK_THROWS_AS(stabilize(random_cochain(1, 5, DiscPoint<Complex>(1.0), 1), 1), DomainError);
  }
}

TEST_CASE("derivation_stabilize") {
  SUBCASE("exact derivation") {
    const DiscPoint<Complex> p({-0.4, 0.5});
    const Complex alpha0(1.5, -0.25);
    const std::size_t m = default_blaschke_cutoff(std::abs(p.lambda()));
    std::vector<Complex> psi(m + 20);
    const auto pw = power_table(p.lambda(), psi.size());
    for (std::size_t k = 1; k < psi.size(); ++k) psi[k] = static_cast<double>(k) * pw[k - 1] * alpha0;
    const auto d = derivation_stabilize(psi, p, m);
    CHECK(std::abs(d.alpha - alpha0) <= 1e-12);
    CHECK(d.sup_dev <= 1e-12);
  }
  SUBCASE("perturbed derivation") {
    gen::for_all(44, 10, [](gen::Rng& rng, std::size_t k) {
      const DiscPoint<Complex> p(rng.disc(0.9));
      const double eps = 1e-3;
      const std::size_t m = default_blaschke_cutoff(std::abs(p.lambda()));
      std::vector<Complex> psi(m + 16);
      const auto pw = power_table(p.lambda(), psi.size());
      const auto noise = random_cochain(1, psi.size() - 1, p, 500 + k, eps);
      for (std::size_t n = 1; n < psi.size(); ++n) psi[n] = static_cast<double>(n) * pw[n - 1] + noise.at({n});
      const auto d = derivation_stabilize(psi, p, m);
      CHECK(d.defect <= 4 * eps);
      CHECK(d.sup_dev <= d.bound + 1e-10);
      CHECK(d.bound_check);
    });
  }
  SUBCASE("lambda = 0 reads alpha off psi_1") {
    std::vector<Complex> psi{0.0, {2, 1}, 1e-3, -2e-3, 0.0, 1e-3, 0.0, 0.0, 0.0};
    const auto d = derivation_stabilize(psi, DiscPoint<Complex>(0.0), 1);
    CHECK(d.alpha == Complex(2, 1));
    CHECK(d.bound_check);
  }
}

TEST_CASE("peak delta nets") {
  const double theta = 0.9;
  SUBCASE("m = 1") {
    for (std::size_t j = 1; j < 6; ++j) CHECK(peak_residual_norm(theta, 1, j) == doctest::Approx(2.0));
  }
  SUBCASE("j = 3, m = 12") { CHECK(peak_residual_norm(theta, 12, 3) == doctest::Approx(0.5).epsilon(1e-12)); }
  SUBCASE("unit mass and character one") {
    for (std::size_t m : {1u, 7u, 64u}) {
      const auto v = peak_delta_net(theta, m);
      CHECK(v.norm_lower() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(std::abs(evaluate_char(v, DiscPoint<Complex>(std::polar(1.0, theta))).value - 1.0) <= 1e-13);
    }
  }
  SUBCASE("closed form against brute force") {
    for (std::size_t m = 1; m <= 64; m += 7)
      for (std::size_t j = 0; j <= 64; j += 3) {
        const double expected = 2.0 * static_cast<double>(std::min(j, m)) / static_cast<double>(m);
        CHECK(std::abs(peak_residual_norm(theta, m, j) - expected) <= 1e-12);
        CHECK(std::abs(oracle::peak_residual(theta, m, j) - expected) <= 1e-12);
      }
  }
}

TEST_CASE("peak_split") {
  const double theta = 2.1;
  const DiscPoint<Complex> p(std::polar(1.0, theta));
  for (std::size_t d : {1u, 2u}) {
    const auto t = random_cochain_box(p, peak_box(d, 256, 16), 77 + d);
    double prev = INFINITY;
    for (std::size_t m : {32u, 64u, 128u, 256u}) {
      const auto rep = peak_split(t, theta, m, 16);
      CHECK(rep.profile[0] <= 1e-14 * t.norm());
      CHECK(rep.summary.bound_check);
      CHECK(rep.summary.residual_sup <= prev);
      prev = rep.summary.residual_sup;
    }
  }
  CHECK_THROWS_AS(peak_split(random_cochain(3, 4, p, 1), theta, 2, 2), DomainError);
  CHECK_THROWS_AS(peak_split(random_cochain(2, 4, p, 1), theta, 8, 4), WindowTooSmall);
}

}  // TEST_SUITE
