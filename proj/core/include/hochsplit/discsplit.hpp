#pragma once

// Splitting maps for the point modules of l^1(Z_+).
//
// Interior points |lambda| < 1 use
//   (s_n T)(j_1, ..., j_n) = -T(b, S p(delta_{j_1}), delta_{j_2}, ...) + lambda^{j_1} T(0, 0, j_2, ...)
// where b is the Blaschke factor at lambda (cut at M_b) and S p(delta_j) is
// the divided unit u_j. Peak points |lambda| = 1 use the twisted Folner
// averages v_m = (1/m) sum_{k<m} lambda^{-k} delta_k instead.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hochsplit/cochain.hpp"
#include "hochsplit/errors.hpp"
#include "hochsplit/scalar.hpp"
#include "hochsplit/series.hpp"

namespace hochsplit {

struct SplitReport {
  Complex lambda{};
  std::size_t degree{0};
  std::size_t window{0};
  std::size_t blaschke_cutoff{0};
  double residual_sup{0};
  double certified_error{0};
  double operator_norm{0};
  double division_sup{0};
  bool bound_check{false};
  bool exact{false};
};

namespace detail {

/// Calls f(idx) for every tuple of the box {0..w_0} x ... (row-major).
template <class F>
void for_each_index(std::span<const std::size_t> w, F&& f) {
  std::array<std::size_t, kMaxDegree> idx{};
  const std::size_t n = w.size();
  while (true) {
    f(Index(idx.data(), n));
    std::size_t k = n;
    while (k-- > 0) {
      if (++idx[k] <= w[k]) break;
      idx[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) return;
  }
}

template <class S>
double to_d(const RealOf<S>& r) {
  return ScalarTraits<S>::to_double(r);
}

/// sqrt of a nonnegative real, as a double; used only for reporting.
template <class S>
double root_d(const RealOf<S>& r2) {
  return std::sqrt(ScalarTraits<S>::to_double(r2));
}

/// Compares sqrt(lhs2) <= rhs without taking irrational roots.
template <class S>
bool sqrt_le(const RealOf<S>& lhs2, const RealOf<S>& rhs) {
  if (rhs < 0) return false;
  return lhs2 <= rhs * rhs;
}

}  // namespace detail

/// Precomputed data for the interior splitting maps at one point and cutoff.
template <class S>
class SplitKernel {
 public:
  using Traits = ScalarTraits<S>;
  using Real = RealOf<S>;

  SplitKernel(const DiscPoint<S>& p, std::size_t cutoff, std::size_t max_unit)
      : point_(p), cutoff_(cutoff), r_(p.modulus()) {
    if (!p.interior()) throw DomainError("interior splitting needs |lambda| < 1 (use peak_split)");
    bm_ = blaschke(p, cutoff).coeffs;
    units_.reserve(max_unit + 1);
    for (std::size_t j = 0; j <= max_unit; ++j) units_.push_back(divided_unit(p, j));
    pw_ = power_table(p.lambda(), max_unit);
    rm_ = Real(1);
    for (std::size_t k = 0; k < cutoff; ++k) rm_ *= r_;
  }

  const DiscPoint<S>& point() const { return point_; }
  std::size_t cutoff() const { return cutoff_; }
  std::size_t max_unit() const { return units_.size() - 1; }
  const Real& modulus() const { return r_; }
  const std::vector<S>& blaschke_coeffs() const { return bm_; }
  const std::vector<S>& unit(std::size_t j) const { return units_.at(j); }

  /// (1+|lambda|)|lambda|^M: l^1 mass of the omitted Blaschke coefficients.
  Real blaschke_tail() const { return (Real(1) + r_) * rm_; }
  /// Per-entry error of s_n against the untruncated map.
  Real split_error(const Real& norm_t) const { return norm_t * (Real(1) + 2 * r_) * blaschke_tail(); }
  /// Bound for |(delta s_n + s_{n+1} delta - id) T| entrywise.
  Real identity_error(const Real& norm_t) const {
    return norm_t * (Real(1) + 2 * r_) * (blaschke_tail() + rm_ * rm_ * r_);
  }

  /// l^1 norm of the coefficient row of output index j_1 = j.
  Real row_norm(std::size_t j) const {
    if (j == 0) return Real(1);
    Real nb(0);
    for (const auto& c : bm_) nb += Traits::abs(c);
    Real nu(0);
    for (const auto& c : units_.at(j)) nu += Traits::abs(c);
    const S corner = pw_[j] - bm_[0] * units_[j][0];
    return nb * nu - Traits::abs(bm_[0]) * Traits::abs(units_[j][0]) + Traits::abs(corner);
  }

  /// Box a dense degree-(n+1) input must cover to produce the degree-n box `out`.
  std::vector<std::size_t> requirement(std::span<const std::size_t> out) const {
    std::vector<std::size_t> need{cutoff_};
    need.insert(need.end(), out.begin(), out.end());
    return need;
  }

  /// s_n applied to a degree-(n+1) source on the output box `out`.
  template <class Src>
  Cochain<S> apply(const Src& src, std::vector<std::size_t> out) const {
    if (out.empty()) throw DomainError("splitting output must have degree >= 1");
    if (out[0] > max_unit()) throw WindowTooSmall("kernel holds too few divided units");
    const std::size_t n = out.size();
    Cochain<S> res(point_, out);
    std::vector<std::size_t> rest_w(out.begin() + 1, out.end());
    std::vector<S> h(out[0] + 1);
    std::array<std::size_t, kMaxDegree> in{};
    std::array<std::size_t, kMaxDegree> oi{};
    detail::for_each_index(rest_w, [&](Index rest) {
      for (std::size_t k = 0; k + 1 < n; ++k) in[k + 2] = rest[k];
      for (std::size_t b = 0; b <= out[0]; ++b) {
        in[1] = b;
        S acc(0);
        for (std::size_t a = 0; a <= cutoff_; ++a) {
          in[0] = a;
          acc += bm_[a] * src(Index(in.data(), n + 1));
        }
        h[b] = acc;
      }
      in[0] = 0;
      in[1] = 0;
      const S corner = src(Index(in.data(), n + 1));
      for (std::size_t k = 0; k + 1 < n; ++k) oi[k + 1] = rest[k];
      for (std::size_t j = 0; j <= out[0]; ++j) {
        S acc = pw_[j] * corner;
        const auto& u = units_[j];
        for (std::size_t b = 0; b < u.size() && b <= j; ++b) acc -= u[b] * h[b];
        oi[0] = j;
        res[Index(oi.data(), n)] = acc;
      }
    });
    return res;
  }

 private:
  DiscPoint<S> point_;
  std::size_t cutoff_;
  Real r_;
  Real rm_;
  std::vector<S> bm_;
  std::vector<std::vector<S>> units_;
  std::vector<S> pw_;
};

template <class S>
struct SplitResult {
  Cochain<S> value;
  RealOf<S> error;
};

/// s_n T for a dense T of degree n+1 >= 2. The output is the cube of window
/// `out_window` (default: the largest the input supports).
template <class S>
SplitResult<S> split_map(const Cochain<S>& t, std::size_t cutoff, std::size_t out_window = SIZE_MAX) {
  if (t.degree() < 2) throw DomainError("split_map needs a cochain of degree >= 2");
  if (!t.point().interior()) throw DomainError("split_map needs |lambda| < 1 (use peak_split)");
  std::size_t n_out = out_window;
  if (n_out == SIZE_MAX) {
    n_out = t.windows()[1];
    for (std::size_t k = 2; k < t.degree(); ++k) n_out = std::min(n_out, t.windows()[k]);
  }
  std::vector<std::size_t> out(t.degree() - 1, n_out);
  SplitKernel<S> kernel(t.point(), cutoff, n_out);
  if (!t.covers_box(kernel.requirement(out))) throw WindowTooSmall("cochain window too small for split_map");
  DenseSource<S> src{&t};
  return {kernel.apply(src, out), kernel.split_error(t.norm_bound())};
}

/// Box a random degree-(n+1) input needs for an exact residual on the cube N.
inline std::vector<std::size_t> identity_check_box(std::size_t degree, std::size_t window, std::size_t cutoff) {
  std::vector<std::size_t> w(degree, 2 * window);
  w[0] = cutoff + window;
  return w;
}

/// (delta s_n + s_{n+1} delta - id) T on the cube of window N, T of degree n+1.
template <class S>
Cochain<S> splitting_residual(const Cochain<S>& t, const SplitKernel<S>& kernel, std::size_t window) {
  const std::size_t d = t.degree();
  if (d < 2) throw DomainError("splitting residual needs degree >= 2");
  if (!t.covers_box(identity_check_box(d, window, kernel.cutoff())))
    throw WindowTooSmall("cochain window too small for the splitting identity");
  DenseSource<S> src{&t};
  const Cochain<S> a = kernel.apply(src, std::vector<std::size_t>(d - 1, 2 * window));
  const Cochain<S> da = coboundary_on(a, std::vector<std::size_t>(d, window));
  const auto pw = power_table(t.point().lambda(), std::max(kernel.cutoff(), 2 * window));
  CoboundaryView<S, DenseSource<S>> g(src, d, &pw);
  const Cochain<S> b = kernel.apply(g, std::vector<std::size_t>(d, window));
  return da + b - t.restrict_to(std::vector<std::size_t>(d, window));
}

/// Residual report for a random degree-(n+1) cochain.
template <class S>
SplitReport splitting_identity_check(std::size_t n, const DiscPoint<S>& p, std::size_t window, std::size_t cutoff,
                                     std::uint64_t seed) {
  using Traits = ScalarTraits<S>;
  using Real = RealOf<S>;
  if (n < 1 || n + 1 > kMaxDegree) throw DomainError("splitting degree out of range");
  const Cochain<S> t = random_cochain_box(p, identity_check_box(n + 1, window, cutoff), seed);
  const SplitKernel<S> kernel(p, cutoff, 2 * window);
  const Cochain<S> r = splitting_residual(t, kernel, window);
  const Real norm_t = t.norm_bound();
  const Real cert = kernel.identity_error(norm_t);
  const Real res2 = r.norm2();
  SplitReport rep;
  rep.lambda = Traits::to_complex(p.lambda());
  rep.degree = n;
  rep.window = window;
  rep.blaschke_cutoff = cutoff;
  rep.residual_sup = detail::root_d<S>(res2);
  rep.certified_error = detail::to_d<S>(cert);
  Real opn(0);
  for (std::size_t j = 0; j <= window; ++j) opn = std::max(opn, kernel.row_norm(j));
  rep.operator_norm = detail::to_d<S>(opn);
  rep.exact = Traits::exact;
  if constexpr (Traits::exact) {
    rep.bound_check = detail::sqrt_le<S>(res2, cert);
  } else {
    rep.bound_check = rep.residual_sup <= cert + 1e-10 * norm_t;
  }
  return rep;
}

/// 1 + (1+2r)(1+2r-r^N), the bound for the truncated operator norm of s_n.
template <class R>
R opnorm_bound(const R& r, std::size_t window) {
  R rn(1);
  for (std::size_t k = 0; k < window; ++k) rn *= r;
  return R(1) + (R(1) + 2 * r) * (R(1) + 2 * r - rn);
}

/// Exact l^1 operator norm of the truncated s_n on the window N, and the
/// division sup max_{j <= N} ||S p(delta_j)||.
template <class S>
SplitReport norm_audit(const DiscPoint<S>& p, std::size_t n, std::size_t window, std::size_t cutoff) {
  using Traits = ScalarTraits<S>;
  using Real = RealOf<S>;
  const SplitKernel<S> kernel(p, cutoff, window);
  Real opn(0);
  Real div(0);
  for (std::size_t j = 0; j <= window; ++j) {
    opn = std::max(opn, kernel.row_norm(j));
    Real nu(0);
    for (const auto& c : kernel.unit(j)) nu += Traits::abs(c);
    div = std::max(div, nu);
  }
  const Real r = kernel.modulus();
  const Real bound = opnorm_bound(r, window);
  Real rn(1);
  for (std::size_t k = 0; k < window; ++k) rn *= r;
  const Real div_expected = window == 0 ? Real(0) : Real(1) + 2 * r - rn;
  SplitReport rep;
  rep.lambda = Traits::to_complex(p.lambda());
  rep.degree = n;
  rep.window = window;
  rep.blaschke_cutoff = cutoff;
  rep.operator_norm = detail::to_d<S>(opn);
  rep.division_sup = detail::to_d<S>(div);
  rep.certified_error = detail::to_d<S>(bound);
  rep.residual_sup = std::abs(detail::to_d<S>(div - div_expected));
  rep.exact = Traits::exact;
  if constexpr (Traits::exact) {
    rep.bound_check = opn <= bound && opn <= 10 && div == div_expected;
  } else {
    rep.bound_check = opn <= bound * (1 + 1e-12) && opn <= 10.0 &&
                      std::abs(div - div_expected) <= 1e-10 * div_expected;
  }
  return rep;
}

template <class S>
struct StabilizeResult {
  Cochain<S> s;
  std::size_t window{0};
  double distance{0};
  double coboundary_norm{0};
  double defect_after{0};
  double certified_error{0};
  bool bound_check{false};
};

/// Output window of stabilize for an input box.
inline std::size_t stabilize_window(std::span<const std::size_t> w, std::size_t cutoff) {
  if (w.empty() || w[0] < cutoff) throw WindowTooSmall("stabilize needs the first window to exceed the cutoff");
  std::size_t n = w[0] - cutoff;
  for (std::size_t k = 1; k < w.size(); ++k) n = std::min(n, w[k] / 2);
  return n;
}

/// S = T - s_n(delta T), a cocycle near T. Guarantees ||S - T|| <= 10 ||delta T||
/// + certified error and ||delta S|| <= certified error on the admissible window.
template <class S>
StabilizeResult<S> stabilize(const Cochain<S>& t, std::size_t cutoff) {
  using Traits = ScalarTraits<S>;
  using Real = RealOf<S>;
  const std::size_t n = t.degree();
  if (n < 1 || n + 1 > kMaxDegree) throw DomainError("stabilize degree out of range");
  if (!t.point().interior()) throw DomainError("stabilize needs |lambda| < 1");
  const std::size_t ns = stabilize_window(t.windows(), cutoff);
  if (ns < 2) throw WindowTooSmall("stabilize window too small for a coboundary check");
  const SplitKernel<S> kernel(t.point(), cutoff, ns);
  DenseSource<S> src{&t};
  const auto pw = power_table(t.point().lambda(), std::max(cutoff, ns));
  CoboundaryView<S, DenseSource<S>> g(src, n, &pw);
  std::vector<std::size_t> dbox(n + 1, ns);
  dbox[0] = cutoff;
  const Cochain<S> dt = materialize(t.point(), dbox, g);
  DenseSource<S> dsrc{&dt};
  const Cochain<S> corr = kernel.apply(dsrc, std::vector<std::size_t>(n, ns));
  Cochain<S> s = t.restrict_to(std::vector<std::size_t>(n, ns)) - corr;
  const Cochain<S> ds = coboundary(s);

  const Real norm_t = t.norm_bound();
  const Real cert = kernel.identity_error(norm_t * Real(static_cast<long>(n + 2)));
  const Real dt_norm = dt.norm_bound();
  StabilizeResult<S> out{std::move(s), ns};
  out.distance = detail::root_d<S>(corr.norm2());
  out.coboundary_norm = detail::to_d<S>(dt_norm);
  out.defect_after = detail::root_d<S>(ds.norm2());
  out.certified_error = detail::to_d<S>(cert);
  if constexpr (Traits::exact) {
    out.bound_check = detail::sqrt_le<S>(corr.norm2(), Real(10) * dt_norm + cert) && detail::sqrt_le<S>(ds.norm2(), cert);
  } else {
    const double slack = 1e-10 * norm_t;
    out.bound_check = out.distance <= 10.0 * dt_norm + cert + slack && out.defect_after <= cert + slack;
  }
  return out;
}

template <class S>
struct DerivationResult {
  S alpha;
  std::size_t window{0};
  double sup_dev{0};
  double defect{0};
  double bound{0};
  bool bound_check{false};
};

/// Replaces an approximate point derivation psi by the derivation n lambda^{n-1} alpha.
template <class S>
DerivationResult<S> derivation_stabilize(const std::vector<S>& psi, const DiscPoint<S>& p, std::size_t cutoff) {
  using Traits = ScalarTraits<S>;
  using Real = RealOf<S>;
  if (psi.empty()) throw WindowTooSmall("empty derivation data");
  const std::size_t w = psi.size() - 1;
  Cochain<S> t(p, {w});
  std::copy(psi.begin(), psi.end(), t.values().begin());
  StabilizeResult<S> st = stabilize(t, cutoff);
  const std::size_t ns = st.window;
  const S alpha = st.s.at({1});
  const auto pw = power_table(p.lambda(), w);
  Real dev2(0);
  for (std::size_t k = 1; k <= ns; ++k) {
    const S d = psi[k] - S(static_cast<int>(k)) * pw[k - 1] * alpha;
    dev2 = std::max(dev2, Traits::abs2(d));
  }
  Real def2(0);
  for (std::size_t j = 0; j <= w; ++j)
    for (std::size_t k = 0; j + k <= w; ++k) def2 = std::max(def2, Traits::abs2(pw[j] * psi[k] - psi[j + k] + psi[j] * pw[k]));
  DerivationResult<S> out{alpha, ns};
  out.sup_dev = detail::root_d<S>(dev2);
  out.defect = detail::root_d<S>(def2);
  const double cert = st.certified_error;
  out.bound = 10.0 * out.defect + static_cast<double>(ns + 1) * cert;
  const double slack = Traits::exact ? 0.0 : 1e-10 * detail::to_d<S>(t.norm_bound()) * static_cast<double>(ns + 1);
  out.bound_check = out.sup_dev <= out.bound + slack;
  return out;
}

// Peak points.

/// v_m = (1/m) sum_{k<m} lambda^{-k} delta_k for lambda = e^{i theta}.
inline TruncatedSeries<Complex> peak_delta_net(double theta, std::size_t m) {
  if (m == 0) throw DomainError("delta-net index must be positive");
  TruncatedSeries<Complex> v;
  v.coeffs.resize(m);
  const double inv = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) v.coeffs[k] = std::polar(inv, -static_cast<double>(k) * theta);
  return v;
}

/// ||v_m * (delta_j - lambda^j delta_0)|| by direct convolution.
inline double peak_residual_norm(double theta, std::size_t m, std::size_t j) {
  const auto v = peak_delta_net(theta, m);
  auto a = TruncatedSeries<Complex>::delta(j);
  a.coeffs[0] -= std::polar(1.0, static_cast<double>(j) * theta);
  return convolve(v, a, m + j).norm_lower();
}

struct PeakReport {
  SplitReport summary;
  std::vector<double> profile;  ///< max residual over entries with first index j
  std::vector<double> bound;    ///< ||T|| 2 min(j, m)/m
};

inline std::vector<std::size_t> peak_box(std::size_t degree, std::size_t m, std::size_t window) {
  std::vector<std::size_t> w(degree, 2 * window);
  w[0] = m - 1 + window;
  return w;
}

/// (delta s^m + s^m delta - id) T for T of degree 1 or 2 at lambda = e^{i theta}.
inline PeakReport peak_split(const Cochain<Complex>& t, double theta, std::size_t m, std::size_t window) {
  const std::size_t d = t.degree();
  if (d < 1 || d > 2) throw DomainError("peak_split handles degrees 1 and 2");
  if (m == 0) throw DomainError("delta-net index must be positive");
  if (!t.covers_box(peak_box(d, m, window))) throw WindowTooSmall("cochain window too small for peak_split");
  const auto v = peak_delta_net(theta, m);
  const DiscPoint<Complex> p(std::polar(1.0, theta));
  std::vector<Complex> pw(m + 2 * window + 1);
  for (std::size_t k = 0; k < pw.size(); ++k) pw[k] = std::polar(1.0, static_cast<double>(k) * theta);

  // s^m H (f_1, ...) = H(v_m, f_1, ...).
  auto contract = [&](const auto& src, std::vector<std::size_t> out) {
    Cochain<Complex> res(p, out);
    std::array<std::size_t, kMaxDegree> in{};
    res.for_each([&](Index i, Complex& val) {
      for (std::size_t k = 0; k < i.size(); ++k) in[k + 1] = i[k];
      Complex acc{};
      for (std::size_t k = 0; k < m; ++k) {
        in[0] = k;
        acc += v.coeffs[k] * src(Index(in.data(), i.size() + 1));
      }
      val = acc;
    });
    return res;
  };

  DenseSource<Complex> src{&t};
  // For degree 1 the contraction is a 0-cochain, whose coboundary vanishes.
  Cochain<Complex> first(p, std::vector<std::size_t>(d, window));
  if (d == 2) {
    const Cochain<Complex> a = contract(src, std::vector<std::size_t>(1, 2 * window));
    first = coboundary_on(a, std::vector<std::size_t>(d, window));
  }
  CoboundaryView<Complex, DenseSource<Complex>> g(src, d, &pw);
  const Cochain<Complex> second = contract(g, std::vector<std::size_t>(d, window));
  const Cochain<Complex> r = first + second - t.restrict_to(std::vector<std::size_t>(d, window));

  PeakReport rep;
  const double norm_t = t.norm();
  rep.profile.assign(window + 1, 0.0);
  rep.bound.assign(window + 1, 0.0);
  r.for_each([&](Index i, const Complex& val) { rep.profile[i[0]] = std::max(rep.profile[i[0]], std::abs(val)); });
  bool ok = true;
  for (std::size_t j = 0; j <= window; ++j) {
    rep.bound[j] = norm_t * 2.0 * static_cast<double>(std::min(j, m)) / static_cast<double>(m);
    ok = ok && rep.profile[j] <= rep.bound[j] + 1e-12 * norm_t;
  }
  rep.summary.lambda = p.lambda();
  rep.summary.degree = d;
  rep.summary.window = window;
  rep.summary.blaschke_cutoff = m;
  rep.summary.residual_sup = *std::max_element(rep.profile.begin(), rep.profile.end());
  rep.summary.certified_error = rep.bound.back();
  rep.summary.operator_norm = 1.0;
  rep.summary.bound_check = ok;
  return rep;
}

}  // namespace hochsplit
