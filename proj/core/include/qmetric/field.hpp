#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "qmetric/errors.hpp"
#include "qmetric/grid.hpp"

namespace qmetric {

using Complex = std::complex<double>;

// Scalar fields sampled on a Grid2D lattice, stored in the grid's flat order
// (x index outermost, y innermost, both ascending). Immutable after
// construction; every sample is checked finite on the way in.

class RealField {
 public:
  RealField(const Grid2D& grid, std::vector<double> samples);

  template <class F>
  static RealField generate(const Grid2D& grid, F&& f) {
    std::vector<double> s(grid.size());
    for (int ix = 0; ix < grid.nx(); ++ix)
      for (int iy = 0; iy < grid.ny(); ++iy)
        s[grid.index(ix, iy)] = f(grid.x(ix), grid.y(iy));
    return RealField(grid, std::move(s));
  }

  static RealField constant(const Grid2D& grid, double value);

  const Grid2D& grid() const { return grid_; }
  std::span<const double> samples() const { return samples_; }
  double value(int ix, int iy) const { return samples_[grid_.index(ix, iy)]; }

 private:
  Grid2D grid_;
  std::vector<double> samples_;
};

class ComplexField {
 public:
  ComplexField(const Grid2D& grid, std::vector<Complex> samples);

  template <class F>
  static ComplexField generate(const Grid2D& grid, F&& f) {
    std::vector<Complex> s(grid.size());
    for (int ix = 0; ix < grid.nx(); ++ix)
      for (int iy = 0; iy < grid.ny(); ++iy)
        s[grid.index(ix, iy)] = f(grid.x(ix), grid.y(iy));
    return ComplexField(grid, std::move(s));
  }

  const Grid2D& grid() const { return grid_; }
  std::span<const Complex> samples() const { return samples_; }
  Complex value(int ix, int iy) const { return samples_[grid_.index(ix, iy)]; }

 private:
  Grid2D grid_;
  std::vector<Complex> samples_;
};

// Trapezoidal-rule inner product (f, g) = integral of conj(f) * g over the
// grid, pairwise-summed so the result is bit-reproducible.
Complex inner_product(const ComplexField& f, const ComplexField& g);

// Plain trapezoidal quadrature of a real field.
double integrate(const RealField& w);

// sqrt(Re (f, f)).
double quadrature_norm(const ComplexField& f);

// f scaled to unit quadrature norm. Throws NumericalError when the norm is
// zero or not finite.
ComplexField normalized(const ComplexField& f);

// Pointwise f * exp(i * alpha). Preserves |f| sample by sample.
ComplexField apply_phase(const ComplexField& f, const RealField& alpha);

// <w> = integral of w * |f|^2 for a unit-norm f. When f deviates from unit
// norm by more than 1e-8, the value is still returned and the deviation is
// reported through norm_deviation (when non-null) as a warning signal.
double expectation(const ComplexField& f, const RealField& w,
                   double* norm_deviation = nullptr);

ComplexField operator+(const ComplexField& a, const ComplexField& b);
ComplexField operator-(const ComplexField& a, const ComplexField& b);
ComplexField operator*(Complex scalar, const ComplexField& f);
// Pointwise real * complex, used for connection terms Gamma * psi.
ComplexField operator*(const RealField& w, const ComplexField& f);
RealField operator+(const RealField& a, const RealField& b);
RealField operator*(double scalar, const RealField& f);

}  // namespace qmetric
