#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qmetric/family.hpp"
#include "qmetric/gauge.hpp"
#include "qmetric/grid.hpp"
#include "qmetric/params.hpp"

namespace qmetric {

// A state and its parameter derivative must satisfy Re (psi, d psi) = 0 up
// to discretization noise; a residual past this limit means the inputs are
// not a normalized family on an adequate grid, and the computation aborts
// with NumericalError rather than return a silently biased metric.
inline constexpr double kHermResidualLimit = 1e-4;

struct BerryConnection {
  double value;          // Im (psi, d psi)
  double herm_residual;  // |Re (psi, d psi)|
};

struct QMTDiagnostics {
  std::vector<double> herm_residuals;  // per parameter, family order
  std::vector<double> fd_steps;
  std::vector<bool> fd_step_shrunk;
  double norm_deviation;  // | ||psi|| - 1 | at the evaluation point
  DerivativeScheme scheme;
  Grid2D grid;
};

struct QMTResult {
  ParamPoint parameters;
  std::vector<double> metric;  // row-major, dimension x dimension
  std::vector<double> beta;    // Berry connection per parameter
  QMTDiagnostics diagnostics;

  std::size_t dimension() const { return beta.size(); }
  double metric_at(std::size_t i, std::size_t j) const;
};

// Berry connection component for one parameter.
BerryConnection berry_connection(const StateFamily& family,
                                 const ParamPoint& at,
                                 std::string_view parameter,
                                 const Grid2D& grid,
                                 const DerivativeScheme& scheme = {});

// Standard quantum metric G_ij = Re (d_i psi, d_j psi) - beta_i beta_j.
// Gauge dependent: families differing by a parameter-dependent phase give
// different metrics.
QMTResult qmt(const StateFamily& family, const ParamPoint& at,
              const Grid2D& grid, const DerivativeScheme& scheme = {});

// Covariant metric G_ij = Re (D_i psi, D_j psi) with D_i = d_i - i Gamma_i.
// No beta subtraction; gauge changes are absorbed by transporting the
// connection. beta is still reported for diagnostics.
QMTResult covariant_qmt(const StateFamily& family, const Connection& gamma,
                        const ParamPoint& at, const Grid2D& grid,
                        const DerivativeScheme& scheme = {});

// Covariant form with Gamma_i taken as the constant beta_i of the state
// itself. Coincides with qmt for a unit-norm family; exposing it as its own
// operation makes that identity testable.
QMTResult qmt_centered(const StateFamily& family, const ParamPoint& at,
                       const Grid2D& grid, const DerivativeScheme& scheme = {});

// ds^2 = sum_ij G_ij dlambda_i dlambda_j.
double line_element(const QMTResult& result, std::span<const double> dlambda);

// Family multiplied pointwise by exp(i alpha). A phase cannot change the
// norm, so the result carries the trust policy and returns the transformed
// state exactly as produced.
StateFamily gauge_transform(const StateFamily& family, const GaugePhase& alpha);

struct BetaShift {
  double transformed;  // beta of the gauge-transformed family
  double predicted;    // beta of the base family + <d alpha / d lambda>
};

// Checks the connection shift law beta'_i = beta_i + <psi| d_i alpha |psi>
// by evaluating both sides independently.
BetaShift beta_shift_check(const StateFamily& family, const GaugePhase& alpha,
                           const ParamPoint& at, std::string_view parameter,
                           const Grid2D& grid,
                           const DerivativeScheme& scheme = {});

}  // namespace qmetric
