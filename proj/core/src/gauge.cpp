#include "qmetric/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "qmetric/errors.hpp"

namespace qmetric {

namespace {

void check_names(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].empty())
      throw ContractError("parameter name must be non-empty");
    for (std::size_t j = 0; j < i; ++j)
      if (names[j] == names[i])
        throw ContractError("duplicate parameter '" + names[i] + "'");
  }
}

bool mentions(const ExprAst& e, std::string_view name) {
  const auto used = e.parameters();
  return std::find(used.begin(), used.end(), name) != used.end();
}

void require_subset(const ExprAst& e,
                    const std::vector<std::string>& declared,
                    const char* what) {
  for (const std::string& name : e.parameters())
    if (std::find(declared.begin(), declared.end(), name) == declared.end())
      throw ContractError(std::string(what) +
                          " references undeclared parameter '" + name + "'");
}

// Central difference of a scalar expression in one parameter, per sample.
RealField fd_derivative(const ExprAst& e, std::string_view parameter,
                        const ParamPoint& at, const Grid2D& grid) {
  const double value = at.at(parameter);
  const double h = 1e-3 * std::max(std::abs(value), 1.0);
  const auto central = [&](double step) {
    const RealField plus = eval_on_grid(e, grid, at.with(parameter, value + step));
    const RealField minus =
        eval_on_grid(e, grid, at.with(parameter, value - step));
    std::vector<double> s(grid.size());
    const auto ps = plus.samples(), ms = minus.samples();
    for (std::size_t k = 0; k < s.size(); ++k)
      s[k] = (ps[k] - ms[k]) / (2.0 * step);
    return RealField(grid, std::move(s));
  };
  const RealField d_h = central(h);
  const RealField d_half = central(h / 2.0);
  std::vector<double> s(grid.size());
  const auto a = d_h.samples(), b = d_half.samples();
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = (4.0 * b[k] - a[k]) / 3.0;
  return RealField(grid, std::move(s));
}

void validate_analytic(const ExprAst& alpha, const std::string& parameter,
                       const ExprAst& analytic,
                       const std::vector<std::string>& names) {
  const Grid2D probe(-1.0, 1.0, -1.0, 1.0, 9, 9);
  for (const double probe_value : {1.0, 0.7}) {
    std::vector<ParamPoint::Entry> entries;
    entries.reserve(names.size());
    for (const std::string& name : names) entries.emplace_back(name, probe_value);
    const ParamPoint at{std::move(entries)};

    const RealField exact = eval_on_grid(analytic, probe, at);
    const RealField approx = fd_derivative(alpha, parameter, at, probe);
    double scale = 1.0, worst = 0.0;
    const auto es = exact.samples(), as = approx.samples();
    for (std::size_t k = 0; k < es.size(); ++k) {
      scale = std::max(scale, std::abs(es[k]));
      worst = std::max(worst, std::abs(es[k] - as[k]));
    }
    if (worst > 1e-6 * scale)
      throw ContractError("analytic derivative for '" + parameter +
                          "' disagrees with finite differences of the phase");
  }
}

}  // namespace

GaugePhase::GaugePhase(ExprAst alpha, std::vector<std::string> parameter_names,
                       std::map<std::string, ExprAst> analytic_derivatives)
    : alpha_(std::move(alpha)),
      names_(std::move(parameter_names)),
      analytic_(std::move(analytic_derivatives)) {
  if (alpha_.empty()) throw ContractError("gauge phase expression is empty");
  check_names(names_);
  require_subset(alpha_, names_, "gauge phase");
  for (const auto& [parameter, d] : analytic_) {
    if (std::find(names_.begin(), names_.end(), parameter) == names_.end())
      throw ContractError("analytic derivative for unknown parameter '" +
                          parameter + "'");
    if (d.empty())
      throw ContractError("analytic derivative for '" + parameter +
                          "' is empty");
    require_subset(d, names_, "analytic derivative");
    validate_analytic(alpha_, parameter, d, names_);
  }
}

RealField GaugePhase::phase_field(const ParamPoint& at,
                                  const Grid2D& grid) const {
  return eval_on_grid(alpha_, grid, at);
}

RealField GaugePhase::derivative_field(std::string_view parameter,
                                       const ParamPoint& at,
                                       const Grid2D& grid) const {
  if (const ExprAst* d = analytic_derivative(parameter))
    return eval_on_grid(*d, grid, at);
  if (std::find(names_.begin(), names_.end(), parameter) == names_.end())
    throw ContractError("derivative of phase in unknown parameter '" +
                        std::string(parameter) + "'");
  if (!mentions(alpha_, parameter)) return RealField::constant(grid, 0.0);
  return fd_derivative(alpha_, parameter, at, grid);
}

const ExprAst* GaugePhase::analytic_derivative(
    std::string_view parameter) const {
  const auto it = analytic_.find(std::string(parameter));
  return it == analytic_.end() ? nullptr : &it->second;
}

GaugePhase GaugePhase::scaled(double factor) const {
  if (!std::isfinite(factor))
    throw ContractError("gauge phase scale factor must be finite");
  const ExprAst c = ExprAst::constant(factor);
  std::map<std::string, ExprAst> scaled_analytic;
  for (const auto& [parameter, d] : analytic_)
    scaled_analytic.emplace(parameter, ExprAst::multiply(c, d));
  return GaugePhase(ExprAst::multiply(c, alpha_), names_,
                    std::move(scaled_analytic));
}

Connection::Entry Connection::Entry::expression(ExprAst e) {
  if (e.empty()) throw ContractError("connection entry expression is empty");
  Entry out;
  out.expr_ = std::move(e);
  return out;
}

Connection::Entry Connection::Entry::sampled(Sampler s) {
  if (!s) throw ContractError("connection entry sampler is empty");
  Entry out;
  out.sampler_ = std::move(s);
  return out;
}

const ExprAst* Connection::Entry::expression_ast() const {
  return expr_.empty() ? nullptr : &expr_;
}

RealField Connection::Entry::field(const ParamPoint& at,
                                   const Grid2D& grid) const {
  if (!expr_.empty()) return eval_on_grid(expr_, grid, at);
  return sampler_(at, grid);
}

Connection::Connection(std::vector<std::string> parameter_names,
                       std::vector<Entry> entries)
    : names_(std::move(parameter_names)), entries_(std::move(entries)) {
  if (names_.empty())
    throw ContractError("connection needs at least one parameter");
  check_names(names_);
  if (entries_.size() != names_.size())
    throw ContractError("connection entry count does not match parameters");
}

Connection Connection::zero(std::vector<std::string> parameter_names) {
  std::vector<Entry> entries(parameter_names.size(),
                             Entry::expression(ExprAst::constant(0.0)));
  return Connection(std::move(parameter_names), std::move(entries));
}

const Connection::Entry& Connection::entry(std::string_view parameter) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == parameter) return entries_[i];
  throw ContractError("connection has no entry for parameter '" +
                      std::string(parameter) + "'");
}

RealField Connection::field(std::string_view parameter, const ParamPoint& at,
                            const Grid2D& grid) const {
  return entry(parameter).field(at, grid);
}

Connection transform_connection(const Connection& gamma,
                                const GaugePhase& alpha) {
  if (gamma.parameter_names() != alpha.parameter_names())
    throw ContractError(
        "connection and gauge phase declare different parameter lists");
  std::vector<Connection::Entry> entries;
  entries.reserve(gamma.parameter_names().size());
  for (const std::string& name : gamma.parameter_names()) {
    const Connection::Entry& base = gamma.entry(name);
    const ExprAst* base_expr = base.expression_ast();
    const ExprAst* d_expr = alpha.analytic_derivative(name);
    const bool alpha_free = !mentions(alpha.alpha(), name);
    if (base_expr != nullptr && alpha_free && d_expr == nullptr) {
      entries.push_back(Connection::Entry::expression(*base_expr));
    } else if (base_expr != nullptr && d_expr != nullptr) {
      entries.push_back(
          Connection::Entry::expression(ExprAst::add(*base_expr, *d_expr)));
    } else {
      entries.push_back(Connection::Entry::sampled(
          [base, alpha, name](const ParamPoint& at, const Grid2D& grid) {
            const RealField g = base.field(at, grid);
            const RealField d = alpha.derivative_field(name, at, grid);
            return g + d;
          }));
    }
  }
  return Connection(gamma.parameter_names(), std::move(entries));
}

}  // namespace qmetric
