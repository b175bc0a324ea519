#include "qmetric/field.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "qmetric/numeric.hpp"

namespace qmetric {

namespace {

// Trapezoid axis weight: 1/2 at the endpoints, 1 inside.
inline double axis_weight(int i, int n) {
  return (i == 0 || i == n - 1) ? 0.5 : 1.0;
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* op) {
  if (!(a == b))
    throw ContractError(std::string(op) + ": fields live on different grids");
}

std::string index_string(const Grid2D& g, std::size_t k) {
  const int ny = g.ny();
  return "(" + std::to_string(k / ny) + ", " + std::to_string(k % ny) + ")";
}

template <class T>
void check_finite(const Grid2D& grid, const std::vector<T>& samples,
                  const char* type) {
  if (samples.size() != grid.size())
    throw ContractError(std::string(type) +
                        ": sample count does not match grid size");
  for (std::size_t k = 0; k < samples.size(); ++k) {
    bool ok;
    if constexpr (std::is_same_v<T, double>) {
      ok = std::isfinite(samples[k]);
    } else {
      ok = std::isfinite(samples[k].real()) && std::isfinite(samples[k].imag());
    }
    if (!ok)
      throw NumericalError(std::string(type) + ": non-finite sample at index " +
                           index_string(grid, k));
  }
}

}  // namespace

RealField::RealField(const Grid2D& grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
  check_finite(grid_, samples_, "RealField");
}

RealField RealField::constant(const Grid2D& grid, double value) {
  return RealField(grid, std::vector<double>(grid.size(), value));
}

ComplexField::ComplexField(const Grid2D& grid, std::vector<Complex> samples)
    : grid_(grid), samples_(std::move(samples)) {
  check_finite(grid_, samples_, "ComplexField");
}

Complex inner_product(const ComplexField& f, const ComplexField& g) {
  require_same_grid(f.grid(), g.grid(), "inner_product");
  const Grid2D& grid = f.grid();
  const int nx = grid.nx(), ny = grid.ny();
  const auto fs = f.samples(), gs = g.samples();
  const Complex sum = pairwise_reduce<Complex>(
      0, grid.size(), [&](std::size_t k) {
        const int ix = static_cast<int>(k) / ny;
        const int iy = static_cast<int>(k) % ny;
        const double w = axis_weight(ix, nx) * axis_weight(iy, ny);
        return w * std::conj(fs[k]) * gs[k];
      });
  return grid.dx() * grid.dy() * sum;
}

double integrate(const RealField& w) {
  const Grid2D& grid = w.grid();
  const int nx = grid.nx(), ny = grid.ny();
  const auto ws = w.samples();
  const double sum = pairwise_reduce<double>(0, grid.size(), [&](std::size_t k) {
    const int ix = static_cast<int>(k) / ny;
    const int iy = static_cast<int>(k) % ny;
    return axis_weight(ix, nx) * axis_weight(iy, ny) * ws[k];
  });
  return grid.dx() * grid.dy() * sum;
}

double quadrature_norm(const ComplexField& f) {
  const double n2 = inner_product(f, f).real();
  return n2 > 0.0 ? std::sqrt(n2) : 0.0;
}

ComplexField normalized(const ComplexField& f) {
  const double n = quadrature_norm(f);
  if (!(n > 0.0) || !std::isfinite(n))
    throw NumericalError("normalized: field has zero or non-finite norm");
  return Complex(1.0 / n, 0.0) * f;
}

ComplexField apply_phase(const ComplexField& f, const RealField& alpha) {
  require_same_grid(f.grid(), alpha.grid(), "apply_phase");
  const auto fs = f.samples();
  const auto as = alpha.samples();
  std::vector<Complex> out(fs.size());
  for (std::size_t k = 0; k < fs.size(); ++k)
    out[k] = fs[k] * std::polar(1.0, as[k]);
  return ComplexField(f.grid(), std::move(out));
}

double expectation(const ComplexField& f, const RealField& w,
                   double* norm_deviation) {
  require_same_grid(f.grid(), w.grid(), "expectation");
  const Grid2D& grid = f.grid();
  const int nx = grid.nx(), ny = grid.ny();
  const auto fs = f.samples();
  const auto ws = w.samples();
  if (norm_deviation != nullptr)
    *norm_deviation = std::abs(quadrature_norm(f) - 1.0);
  const double sum = pairwise_reduce<double>(0, grid.size(), [&](std::size_t k) {
    const int ix = static_cast<int>(k) / ny;
    const int iy = static_cast<int>(k) % ny;
    return axis_weight(ix, nx) * axis_weight(iy, ny) * ws[k] * std::norm(fs[k]);
  });
  return grid.dx() * grid.dy() * sum;
}

namespace {

template <class Op>
std::vector<Complex> zip(const ComplexField& a, const ComplexField& b,
                         const char* name, Op op) {
  require_same_grid(a.grid(), b.grid(), name);
  const auto as = a.samples(), bs = b.samples();
  std::vector<Complex> out(as.size());
  for (std::size_t k = 0; k < as.size(); ++k) out[k] = op(as[k], bs[k]);
  return out;
}

}  // namespace

ComplexField operator+(const ComplexField& a, const ComplexField& b) {
  return ComplexField(a.grid(), zip(a, b, "operator+",
                                    [](Complex x, Complex y) { return x + y; }));
}

ComplexField operator-(const ComplexField& a, const ComplexField& b) {
  return ComplexField(a.grid(), zip(a, b, "operator-",
                                    [](Complex x, Complex y) { return x - y; }));
}

ComplexField operator*(Complex scalar, const ComplexField& f) {
  const auto fs = f.samples();
  std::vector<Complex> out(fs.size());
  for (std::size_t k = 0; k < fs.size(); ++k) out[k] = scalar * fs[k];
  return ComplexField(f.grid(), std::move(out));
}

ComplexField operator*(const RealField& w, const ComplexField& f) {
  require_same_grid(w.grid(), f.grid(), "operator*(RealField, ComplexField)");
  const auto ws = w.samples();
  const auto fs = f.samples();
  std::vector<Complex> out(fs.size());
  for (std::size_t k = 0; k < fs.size(); ++k) out[k] = ws[k] * fs[k];
  return ComplexField(f.grid(), std::move(out));
}

RealField operator+(const RealField& a, const RealField& b) {
  require_same_grid(a.grid(), b.grid(), "operator+(RealField, RealField)");
  const auto as = a.samples(), bs = b.samples();
  std::vector<double> out(as.size());
  for (std::size_t k = 0; k < as.size(); ++k) out[k] = as[k] + bs[k];
  return RealField(a.grid(), std::move(out));
}

RealField operator*(double scalar, const RealField& f) {
  const auto fs = f.samples();
  std::vector<double> out(fs.size());
  for (std::size_t k = 0; k < fs.size(); ++k) out[k] = scalar * fs[k];
  return RealField(f.grid(), std::move(out));
}

}  // namespace qmetric
