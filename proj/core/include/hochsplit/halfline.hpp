#pragma once

// Discretized L^1(R) and M(R) for the half-line point modules.
//
// Densities are piecewise constant on cells [lo + i h, lo + (i+1) h), sampled
// at cell midpoints. The atom at 0 is kept exactly. Convolving two cell
// indicators gives a hat whose mass falls half into each of two output cells,
// so convolution of grid functions is exact at the level of cell averages.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "hochsplit/scalar.hpp"

namespace hochsplit::halfline {

struct GridFunction {
  double lo{0};
  double hi{0};
  double step{1};
  std::vector<Complex> values;

  static GridFunction zeros(double lo, double hi, double step);
  /// Midpoint samples of a profile on [lo, hi).
  static GridFunction sample(const std::function<Complex(double)>& profile, double lo, double hi, double step);

  std::size_t cells() const { return values.size(); }
  double midpoint(std::size_t i) const { return lo + (static_cast<double>(i) + 0.5) * step; }
  double norm() const;
  /// Mass |f| on cells lying inside [a, b).
  double norm_on(double a, double b) const;
  void validate() const;
};

struct MeasureElement {
  Complex atom{0};
  GridFunction density;

  double norm() const { return std::abs(atom) + density.norm(); }
};

class HalfPlanePoint {
 public:
  explicit HalfPlanePoint(Complex lambda);
  Complex lambda() const { return lambda_; }
  double im() const { return lambda_.imag(); }
  /// max(20, 14 / Im lambda).
  double default_length() const;

 private:
  Complex lambda_;
};

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(Complex s, const GridFunction& a);

/// u+(t) = 1_{t>0} e^{-i conj(lambda) t} on [0, L).
GridFunction u_plus(const HalfPlanePoint& p, double step, double length);
/// u-(t) = 1_{t<0} e^{-i lambda t} on [-L, 0).
GridFunction u_minus(const HalfPlanePoint& p, double step, double length);

/// Closed forms of the Fourier transforms, with F f(x) = int f(t) e^{ixt} dt.
Complex ft_u_plus(const HalfPlanePoint& p, double x);
Complex ft_u_minus(const HalfPlanePoint& p, double x);
Complex ft_h(const HalfPlanePoint& p, double x);
Complex ft_h_check(const HalfPlanePoint& p, double x);

/// Fourier transform of a grid function, integrating e^{ixt} exactly on each cell.
Complex fourier(const GridFunction& f, double x);

struct FourierCheck {
  Complex computed;
  Complex closed_form;
};
FourierCheck fourier_check(const HalfPlanePoint& p, double x, double step, double length);

/// h = delta_0 - 2 Im(lambda) u+ and its mirror h-check = delta_0 - 2 Im(lambda) u-.
MeasureElement h_measure(const HalfPlanePoint& p, double step, double length);
MeasureElement h_check_measure(const HalfPlanePoint& p, double step, double length);

/// Density convolution with exact cell averages; grids must share the step
/// and be aligned.
GridFunction convolve(const GridFunction& a, const GridFunction& b);
MeasureElement convolve_measures(const MeasureElement& a, const MeasureElement& b);
MeasureElement convolve_measures(const MeasureElement& a, const GridFunction& f);

/// Midpoint quadrature of int f(t) e^{i lambda t} dt.
Complex laplace(const GridFunction& f, const HalfPlanePoint& p);

/// ||h * h-check * f - f||_1.
double inverse_identity_residual(const GridFunction& f, const HalfPlanePoint& p, double length = 0);

/// Mass of h-check * f on (-L, 0). Throws NotInIdeal unless |L f(lambda)| <= tol ||f||.
double ideal_support_check(const GridFunction& f, const HalfPlanePoint& p, double length = 0, double tol = 1e-6);

/// e_m = m 1_{[0, 1/m)} on the grid of the given step.
GridFunction approx_unit(std::size_t m, double step);

struct FlatWitness {
  double norm_bound{0};  ///< ||e_m * h|| ||h-check * f|| / ||f||
  double r{0};           ///< ||pi rho(f) - e_m * f||
};
FlatWitness flat_witness(const GridFunction& f, const HalfPlanePoint& p, std::size_t m, double length = 0,
                         double tol = 1e-6);

/// ||e_m * f - f||.
double approx_identity_defect(const GridFunction& f, std::size_t m);

struct RefinementRow {
  double step;
  double length;
  double residual;
};

enum class Study { inverse_identity, ideal_support, flat_witness };

/// Reruns a residual for a test profile supported on [0, support) at levels
/// (h, L), (h/2, 2L), (h/4, 4L), ... Refining the step alone stalls at the
/// truncation tail e^{-Im(lambda) L}. length = 0 starts from L = 8 / Im lambda.
std::vector<RefinementRow> refinement_study(Study kind, const std::function<Complex(double)>& profile, double support,
                                            const HalfPlanePoint& p, double step, std::size_t levels,
                                            double length = 0, std::size_t m = 4);

/// Profile e^{-i lambda t} (1_{[0,1)} - 1_{[1,2)}), which lies in the ideal at lambda.
std::function<Complex(double)> ideal_profile(const HalfPlanePoint& p);

}  // namespace hochsplit::halfline
