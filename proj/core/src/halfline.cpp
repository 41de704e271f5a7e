#include "hochsplit/halfline.hpp"

#include <algorithm>
#include <cmath>

#include "hochsplit/errors.hpp"

namespace hochsplit::halfline {

namespace {

constexpr double kAlignTol = 1e-9;

long cell_offset(double x, double step) {
  const double q = x / step;
  const double r = std::round(q);
  if (std::abs(q - r) > kAlignTol * std::max(1.0, std::abs(q))) throw GridMismatch("grid is not aligned to its step");
  return static_cast<long>(r);
}

std::size_t cell_count(double lo, double hi, double step) {
  if (!(step > 0) || !std::isfinite(step)) throw DomainError("grid step must be positive");
  if (hi < lo) throw DomainError("grid needs hi >= lo");
  const double q = (hi - lo) / step;
  const double r = std::round(q);
  if (std::abs(q - r) > kAlignTol * std::max(1.0, q)) throw DomainError("(hi - lo) / step must be an integer");
  return static_cast<std::size_t>(r);
}

void same_step(const GridFunction& a, const GridFunction& b) {
  if (std::abs(a.step - b.step) > 1e-12 * a.step) throw GridMismatch("grid steps differ");
}

/// a + s b on the union of both grids.
GridFunction axpy(const GridFunction& a, Complex s, const GridFunction& b) {
  if (b.values.empty()) return a;
  if (a.values.empty()) return s * b;
  same_step(a, b);
  const double h = a.step;
  const long oa = cell_offset(a.lo, h);
  const long ob = cell_offset(b.lo, h);
  const long lo = std::min(oa, ob);
  const long hi = std::max(oa + static_cast<long>(a.cells()), ob + static_cast<long>(b.cells()));
  GridFunction out;
  out.step = h;
  out.lo = static_cast<double>(lo) * h;
  out.hi = static_cast<double>(hi) * h;
  out.values.assign(static_cast<std::size_t>(hi - lo), 0.0);
  for (std::size_t i = 0; i < a.cells(); ++i) out.values[static_cast<std::size_t>(oa - lo) + i] += a.values[i];
  for (std::size_t i = 0; i < b.cells(); ++i) out.values[static_cast<std::size_t>(ob - lo) + i] += s * b.values[i];
  return out;
}

}  // namespace

GridFunction GridFunction::zeros(double lo, double hi, double step) {
  GridFunction out{lo, hi, step, {}};
  out.values.assign(cell_count(lo, hi, step), 0.0);
  return out;
}

GridFunction GridFunction::sample(const std::function<Complex(double)>& profile, double lo, double hi, double step) {
  GridFunction out = zeros(lo, hi, step);
  for (std::size_t i = 0; i < out.cells(); ++i) out.values[i] = profile(out.midpoint(i));
  return out;
}

double GridFunction::norm() const {
  double s = 0;
  for (const auto& v : values) s += std::abs(v);
  return s * step;
}

double GridFunction::norm_on(double a, double b) const {
  double s = 0;
  for (std::size_t i = 0; i < cells(); ++i) {
    const double m = midpoint(i);
    if (m >= a && m < b) s += std::abs(values[i]);
  }
  return s * step;
}

void GridFunction::validate() const {
  if (cell_count(lo, hi, step) != values.size()) throw DomainError("value count does not match the grid");
  for (const auto& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("non-finite grid value");
}

HalfPlanePoint::HalfPlanePoint(Complex lambda) : lambda_(lambda) {
  if (!(lambda.imag() > 0) || !std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
    throw DomainError("half-plane point needs Im lambda > 0");
}

double HalfPlanePoint::default_length() const { return std::max(20.0, 14.0 / im()); }

GridFunction operator+(const GridFunction& a, const GridFunction& b) { return axpy(a, 1.0, b); }
GridFunction operator-(const GridFunction& a, const GridFunction& b) { return axpy(a, -1.0, b); }
GridFunction operator*(Complex s, const GridFunction& a) {
  GridFunction out = a;
  for (auto& v : out.values) v *= s;
  return out;
}

namespace {

/// L rounded up to a whole number of cells.
double snap_length(double length, double step) { return std::ceil(length / step - kAlignTol) * step; }

}  // namespace

GridFunction u_plus(const HalfPlanePoint& p, double step, double length) {
  const Complex lb = std::conj(p.lambda());
  return GridFunction::sample([lb](double t) { return std::exp(Complex(0, -1) * lb * t); }, 0.0,
                              snap_length(length, step), step);
}

GridFunction u_minus(const HalfPlanePoint& p, double step, double length) {
  const Complex l = p.lambda();
  return GridFunction::sample([l](double t) { return std::exp(Complex(0, -1) * l * t); }, -snap_length(length, step),
                              0.0, step);
}

Complex ft_u_plus(const HalfPlanePoint& p, double x) { return Complex(0, 1) / (x - std::conj(p.lambda())); }
Complex ft_u_minus(const HalfPlanePoint& p, double x) { return 1.0 / (Complex(0, 1) * (x - p.lambda())); }
Complex ft_h(const HalfPlanePoint& p, double x) {
  return 1.0 - Complex(0, 2 * p.im()) / (x - std::conj(p.lambda()));
}
Complex ft_h_check(const HalfPlanePoint& p, double x) { return 1.0 + Complex(0, 2 * p.im()) / (x - p.lambda()); }

Complex fourier(const GridFunction& f, double x) {
  const double h = f.step;
  // int_a^{a+h} e^{ixt} dt = e^{ixa} w with w independent of the cell.
  const Complex w = std::abs(x * h) < 1e-8 ? Complex(h, x * h * h / 2) : (std::exp(Complex(0, x * h)) - 1.0) / Complex(0, x);
  Complex acc{};
  for (std::size_t i = 0; i < f.cells(); ++i) acc += f.values[i] * std::exp(Complex(0, x * (f.lo + static_cast<double>(i) * h)));
  return acc * w;
}

FourierCheck fourier_check(const HalfPlanePoint& p, double x, double step, double length) {
  return {fourier(u_plus(p, step, length), x), ft_u_plus(p, x)};
}

MeasureElement h_measure(const HalfPlanePoint& p, double step, double length) {
  return {1.0, Complex(-2 * p.im()) * u_plus(p, step, length)};
}

MeasureElement h_check_measure(const HalfPlanePoint& p, double step, double length) {
  return {1.0, Complex(-2 * p.im()) * u_minus(p, step, length)};
}

GridFunction convolve(const GridFunction& a, const GridFunction& b) {
  GridFunction out;
  out.step = a.step;
  if (a.values.empty() || b.values.empty()) {
    out.lo = out.hi = 0;
    return out;
  }
  same_step(a, b);
  const double h = a.step;
  const long oa = cell_offset(a.lo, h);
  const long ob = cell_offset(b.lo, h);
  const std::size_t na = a.cells();
  const std::size_t nb = b.cells();
  std::vector<Complex> c(na + nb - 1, 0.0);
  for (std::size_t i = 0; i < na; ++i) {
    const Complex ai = a.values[i];
    if (ai == Complex{}) continue;
    Complex* dst = c.data() + i;
    for (std::size_t j = 0; j < nb; ++j) dst[j] += ai * b.values[j];
  }
  out.lo = static_cast<double>(oa + ob) * h;
  out.hi = out.lo + static_cast<double>(na + nb) * h;
  out.values.assign(na + nb, 0.0);
  for (std::size_t k = 0; k < na + nb; ++k) {
    Complex v = k < c.size() ? c[k] : Complex{};
    if (k > 0) v += c[k - 1];
    out.values[k] = 0.5 * h * v;
  }
  return out;
}

MeasureElement convolve_measures(const MeasureElement& a, const MeasureElement& b) {
  MeasureElement out;
  out.atom = a.atom * b.atom;
  GridFunction d = convolve(a.density, b.density);
  d = axpy(d, a.atom, b.density);
  d = axpy(d, b.atom, a.density);
  out.density = std::move(d);
  return out;
}

MeasureElement convolve_measures(const MeasureElement& a, const GridFunction& f) {
  return convolve_measures(a, MeasureElement{0.0, f});
}

Complex laplace(const GridFunction& f, const HalfPlanePoint& p) {
  Complex acc{};
  for (std::size_t i = 0; i < f.cells(); ++i) acc += f.values[i] * std::exp(Complex(0, 1) * p.lambda() * f.midpoint(i));
  return acc * f.step;
}

namespace {

double resolve_length(const HalfPlanePoint& p, double length) { return length > 0 ? length : p.default_length(); }

void require_ideal(const GridFunction& f, const HalfPlanePoint& p, double tol) {
  if (f.lo < -kAlignTol * f.step) throw DomainError("f must be supported in [0, infinity)");
  if (std::abs(laplace(f, p)) > tol * f.norm()) throw NotInIdeal("Laplace transform of f does not vanish at lambda");
}

}  // namespace

double inverse_identity_residual(const GridFunction& f, const HalfPlanePoint& p, double length) {
  const double len = resolve_length(p, length);
  const MeasureElement hc = h_check_measure(p, f.step, len);
  const MeasureElement h = h_measure(p, f.step, len);
  const MeasureElement out = convolve_measures(h, convolve_measures(hc, f));
  return std::abs(out.atom) + (out.density - f).norm();
}

double ideal_support_check(const GridFunction& f, const HalfPlanePoint& p, double length, double tol) {
  require_ideal(f, p, tol);
  const double len = resolve_length(p, length);
  const MeasureElement g = convolve_measures(h_check_measure(p, f.step, len), f);
  return g.density.norm_on(-len - f.step, 0.0);
}

GridFunction approx_unit(std::size_t m, double step) {
  if (m == 0) throw DomainError("approximate unit index must be positive");
  const double k = 1.0 / (static_cast<double>(m) * step);
  const double kr = std::round(k);
  if (kr < 1 || std::abs(k - kr) > kAlignTol * k) throw GridMismatch("1/m must be a whole number of cells");
  GridFunction out = GridFunction::zeros(0.0, kr * step, step);
  for (auto& v : out.values) v = static_cast<double>(m);
  return out;
}

FlatWitness flat_witness(const GridFunction& f, const HalfPlanePoint& p, std::size_t m, double length, double tol) {
  require_ideal(f, p, tol);
  const double len = resolve_length(p, length);
  const GridFunction em = approx_unit(m, f.step);
  const MeasureElement eh = convolve_measures(h_measure(p, f.step, len), em);
  const MeasureElement hcf = convolve_measures(h_check_measure(p, f.step, len), f);
  const MeasureElement prf = convolve_measures(eh, hcf);
  const GridFunction emf = convolve(em, f);
  FlatWitness out;
  const double fn = f.norm();
  out.norm_bound = fn > 0 ? eh.norm() * hcf.norm() / fn : 0.0;
  out.r = std::abs(prf.atom) + (prf.density - emf).norm();
  return out;
}

double approx_identity_defect(const GridFunction& f, std::size_t m) { return (convolve(approx_unit(m, f.step), f) - f).norm(); }

std::vector<RefinementRow> refinement_study(Study kind, const std::function<Complex(double)>& profile, double support,
                                            const HalfPlanePoint& p, double step, std::size_t levels, double length,
                                            std::size_t m) {
  double len = length > 0 ? length : 8.0 / p.im();
  std::vector<RefinementRow> rows;
  double h = step;
  for (std::size_t l = 0; l < levels; ++l, h /= 2, len *= 2) {
    const GridFunction f = GridFunction::sample(profile, 0.0, std::ceil(support / h - kAlignTol) * h, h);
    double res = 0;
    switch (kind) {
      case Study::inverse_identity:
        res = inverse_identity_residual(f, p, len);
        break;
      case Study::ideal_support:
        res = ideal_support_check(f, p, len);
        break;
      case Study::flat_witness:
        res = flat_witness(f, p, m, len).r;
        break;
    }
    rows.push_back({h, len, res});
  }
  return rows;
}

std::function<Complex(double)> ideal_profile(const HalfPlanePoint& p) {
  const Complex l = p.lambda();
  return [l](double t) {
    const double g = t < 1.0 ? 1.0 : (t < 2.0 ? -1.0 : 0.0);
    return g * std::exp(Complex(0, -1) * l * t);
  };
}

}  // namespace hochsplit::halfline
