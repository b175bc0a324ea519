#include "qmetric/landau.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "qmetric/errors.hpp"
#include "qmetric/numeric.hpp"

namespace qmetric {

namespace {

void check_landau_args(double B, int m) {
  if (!(B > 0.0) || !std::isfinite(B))
    throw ContractError("field strength B must be positive, got " +
                        std::to_string(B));
  if (m < 0) throw ContractError("quantum number m must be non-negative");
}

// log of the normalization constant sqrt(B^(m+1) / (pi m! 2^(m+1))).
double log_norm(double B, int m) {
  return 0.5 * ((m + 1) * std::log(B) - std::log(M_PI) - std::lgamma(m + 1.0) -
                (m + 1) * std::log(2.0));
}

Complex state_sample(double B, int m, double ln_norm, double x, double y) {
  const double r2 = x * x + y * y;
  if (m == 0) return std::polar(std::exp(ln_norm - B * r2 / 4.0), 0.0);
  if (r2 == 0.0) return Complex(0.0, 0.0);
  const double ln_mag = ln_norm + 0.5 * m * std::log(r2) - B * r2 / 4.0;
  return std::polar(std::exp(ln_mag), m * std::atan2(y, x));
}

}  // namespace

ComplexField landau_state(double B, int m, const Grid2D& grid) {
  check_landau_args(B, m);
  const double ln_norm = log_norm(B, m);
  return ComplexField::generate(grid, [&](double x, double y) {
    return state_sample(B, m, ln_norm, x, y);
  });
}

ComplexField landau_state_derivative(double B, int m, double g,
                                     const Grid2D& grid) {
  check_landau_args(B, m);
  const double ln_norm = log_norm(B, m);
  return ComplexField::generate(grid, [&](double x, double y) {
    const double r2 = x * x + y * y;
    const Complex psi = state_sample(B, m, ln_norm, x, y) *
                        std::polar(1.0, g * B * x * y);
    return Complex((m + 1) / (2.0 * B) - r2 / 4.0, g * x * y) * psi;
  });
}

double lz_residual(double B, int m, const Grid2D& grid) {
  const ComplexField psi = landau_state(B, m, grid);
  const int nx = grid.nx(), ny = grid.ny();
  const double dx = grid.dx(), dy = grid.dy();
  const int inner_x = nx - 2, inner_y = ny - 2;
  const std::size_t count =
      static_cast<std::size_t>(inner_x) * static_cast<std::size_t>(inner_y);
  const double sum = pairwise_reduce<double>(0, count, [&](std::size_t k) {
    const int ix = 1 + static_cast<int>(k) / inner_y;
    const int iy = 1 + static_cast<int>(k) % inner_y;
    const Complex dpsi_dx =
        (psi.value(ix + 1, iy) - psi.value(ix - 1, iy)) / (2.0 * dx);
    const Complex dpsi_dy =
        (psi.value(ix, iy + 1) - psi.value(ix, iy - 1)) / (2.0 * dy);
    const Complex lz = Complex(0.0, -1.0) *
                       (grid.x(ix) * dpsi_dy - grid.y(iy) * dpsi_dx);
    return std::norm(lz - static_cast<double>(m) * psi.value(ix, iy));
  });
  return std::sqrt(sum * dx * dy);
}

StateFamily landau_family(int m, double g, Normalization policy) {
  if (m < 0) throw ContractError("quantum number m must be non-negative");
  if (!std::isfinite(g)) throw ContractError("gauge parameter g must be finite");
  auto evaluator = [m, g](const ParamPoint& at, const Grid2D& grid) {
    const double B = at.at("B");
    const ComplexField base = landau_state(B, m, grid);
    if (g == 0.0) return base;
    const RealField alpha = RealField::generate(
        grid, [&](double x, double y) { return g * B * x * y; });
    return apply_phase(base, alpha);
  };
  return StateFamily({"B"}, std::move(evaluator), policy, {{"B", 0.0}});
}

Connection landau_connection(double g) {
  if (!std::isfinite(g)) throw ContractError("gauge parameter g must be finite");
  if (g == 0.0) return Connection::zero({"B"});
  const ExprAst gamma = ExprAst::multiply(
      ExprAst::constant(g), ExprAst::multiply(ExprAst::x(), ExprAst::y()));
  return Connection({"B"}, {Connection::Entry::expression(gamma)});
}

GaugePhase landau_phase(double g) {
  if (!std::isfinite(g)) throw ContractError("gauge parameter g must be finite");
  const ExprAst xy = ExprAst::multiply(ExprAst::x(), ExprAst::y());
  const ExprAst alpha = ExprAst::multiply(
      ExprAst::constant(g), ExprAst::multiply(ExprAst::parameter("B"), xy));
  std::map<std::string, ExprAst> derivs;
  derivs.emplace("B", ExprAst::multiply(ExprAst::constant(g), xy));
  return GaugePhase(alpha, {"B"}, std::move(derivs));
}

double reference_qmt_closed_form(double B, double g) {
  if (!(B > 0.0)) throw ContractError("field strength B must be positive");
  return (g * g + 0.5) / B;
}

Grid2D default_grid(double B, int n, double n_sigma) {
  if (!(B > 0.0)) throw ContractError("field strength B must be positive");
  if (!(n_sigma > 0.0)) throw ContractError("n_sigma must be positive");
  return Grid2D::square(n_sigma / std::sqrt(B), n);
}

}  // namespace qmetric
