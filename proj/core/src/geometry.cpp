#include "qmetric/geometry.hpp"

#include <cmath>
#include <utility>

#include "qmetric/errors.hpp"
#include "qmetric/field.hpp"

namespace qmetric {

namespace {

struct Workspace {
  ComplexField psi;
  std::vector<ComplexField> derivs;
  std::vector<double> beta;
  std::vector<double> herm;
  std::vector<double> steps;
  std::vector<bool> shrunk;
  double norm_deviation;
};

void check_herm(double residual, const std::string& parameter) {
  if (!(residual <= kHermResidualLimit))
    throw NumericalError("hermiticity residual |Re (psi, d psi)| = " +
                         std::to_string(residual) + " for parameter '" +
                         parameter + "' exceeds limit " +
                         std::to_string(kHermResidualLimit));
}

// Evaluates the state and all parameter derivatives once; every metric
// flavour is assembled from this.
Workspace build_workspace(const StateFamily& family, const ParamPoint& at,
                          const Grid2D& grid, const DerivativeScheme& scheme) {
  ComplexField psi = family.evaluate(at, grid);
  const double norm_deviation = std::abs(quadrature_norm(psi) - 1.0);

  const auto& names = family.parameter_names();
  std::vector<ComplexField> derivs;
  derivs.reserve(names.size());
  std::vector<double> beta, herm, steps;
  std::vector<bool> shrunk;
  for (const std::string& name : names) {
    DerivativeInfo info;
    derivs.push_back(param_derivative(family, at, name, grid, scheme, &info));
    const Complex overlap = inner_product(psi, derivs.back());
    const double residual = std::abs(overlap.real());
    check_herm(residual, name);
    beta.push_back(overlap.imag());
    herm.push_back(residual);
    steps.push_back(info.step);
    shrunk.push_back(info.step_shrunk);
  }
  return Workspace{std::move(psi),  std::move(derivs), std::move(beta),
                   std::move(herm), std::move(steps),  std::move(shrunk),
                   norm_deviation};
}

// cov == nullptr means: use the plain derivatives held by ws.
QMTResult assemble(const ParamPoint& at, const Grid2D& grid,
                   const DerivativeScheme& scheme, Workspace&& ws,
                   const std::vector<ComplexField>* cov, bool subtract_beta) {
  const std::vector<ComplexField>& d = cov != nullptr ? *cov : ws.derivs;
  const std::size_t dim = d.size();
  std::vector<double> metric(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      double g = inner_product(d[i], d[j]).real();
      if (subtract_beta) g -= ws.beta[i] * ws.beta[j];
      metric[i * dim + j] = g;
      metric[j * dim + i] = g;
    }
  }
  return QMTResult{
      at, std::move(metric), std::move(ws.beta),
      QMTDiagnostics{std::move(ws.herm), std::move(ws.steps),
                     std::move(ws.shrunk), ws.norm_deviation, scheme, grid}};
}

std::vector<ComplexField> covariant_derivatives(const Workspace& ws,
                                                const Connection& gamma,
                                                const ParamPoint& at,
                                                const Grid2D& grid,
                                                std::span<const std::string>
                                                    names) {
  std::vector<ComplexField> cov;
  cov.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    const RealField g = gamma.field(names[i], at, grid);
    cov.push_back(ws.derivs[i] - Complex(0.0, 1.0) * (g * ws.psi));
  }
  return cov;
}

}  // namespace

double QMTResult::metric_at(std::size_t i, std::size_t j) const {
  const std::size_t dim = dimension();
  if (i >= dim || j >= dim)
    throw ContractError("metric index out of range");
  return metric[i * dim + j];
}

BerryConnection berry_connection(const StateFamily& family,
                                 const ParamPoint& at,
                                 std::string_view parameter,
                                 const Grid2D& grid,
                                 const DerivativeScheme& scheme) {
  const ComplexField psi = family.evaluate(at, grid);
  const ComplexField d = param_derivative(family, at, parameter, grid, scheme);
  const Complex overlap = inner_product(psi, d);
  const double residual = std::abs(overlap.real());
  check_herm(residual, std::string(parameter));
  return BerryConnection{overlap.imag(), residual};
}

QMTResult qmt(const StateFamily& family, const ParamPoint& at,
              const Grid2D& grid, const DerivativeScheme& scheme) {
  Workspace ws = build_workspace(family, at, grid, scheme);
  return assemble(at, grid, scheme, std::move(ws), nullptr, true);
}

QMTResult covariant_qmt(const StateFamily& family, const Connection& gamma,
                        const ParamPoint& at, const Grid2D& grid,
                        const DerivativeScheme& scheme) {
  if (gamma.parameter_names() != family.parameter_names())
    throw ContractError(
        "connection and family declare different parameter lists");
  Workspace ws = build_workspace(family, at, grid, scheme);
  const std::vector<ComplexField> cov =
      covariant_derivatives(ws, gamma, at, grid, family.parameter_names());
  return assemble(at, grid, scheme, std::move(ws), &cov, false);
}

QMTResult qmt_centered(const StateFamily& family, const ParamPoint& at,
                       const Grid2D& grid, const DerivativeScheme& scheme) {
  Workspace ws = build_workspace(family, at, grid, scheme);
  std::vector<ComplexField> cov;
  cov.reserve(ws.derivs.size());
  for (std::size_t i = 0; i < ws.derivs.size(); ++i) {
    const RealField g = RealField::constant(grid, ws.beta[i]);
    cov.push_back(ws.derivs[i] - Complex(0.0, 1.0) * (g * ws.psi));
  }
  return assemble(at, grid, scheme, std::move(ws), &cov, false);
}

double line_element(const QMTResult& result, std::span<const double> dlambda) {
  const std::size_t dim = result.dimension();
  if (dlambda.size() != dim)
    throw ContractError("displacement size does not match metric dimension");
  double ds2 = 0.0;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      ds2 += result.metric[i * dim + j] * dlambda[i] * dlambda[j];
  return ds2;
}

StateFamily gauge_transform(const StateFamily& family,
                            const GaugePhase& alpha) {
  if (alpha.parameter_names() != family.parameter_names())
    throw ContractError(
        "gauge phase and family declare different parameter lists");
  auto evaluator = [family, alpha](const ParamPoint& at, const Grid2D& grid) {
    const ComplexField psi = family.evaluate(at, grid);
    return apply_phase(psi, alpha.phase_field(at, grid));
  };
  return StateFamily(family.parameter_names(), std::move(evaluator),
                     Normalization::trust, family.open_lower_bounds());
}

BetaShift beta_shift_check(const StateFamily& family, const GaugePhase& alpha,
                           const ParamPoint& at, std::string_view parameter,
                           const Grid2D& grid,
                           const DerivativeScheme& scheme) {
  const StateFamily transformed = gauge_transform(family, alpha);
  const BerryConnection after =
      berry_connection(transformed, at, parameter, grid, scheme);
  const BerryConnection before =
      berry_connection(family, at, parameter, grid, scheme);
  const ComplexField psi = family.evaluate(at, grid);
  const RealField dalpha = alpha.derivative_field(parameter, at, grid);
  const double shift = expectation(psi, dalpha);
  return BetaShift{after.value, before.value + shift};
}

}  // namespace qmetric
