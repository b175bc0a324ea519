#include "qmetric/family.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "qmetric/errors.hpp"

namespace qmetric {

namespace {

void check_scheme(const DerivativeScheme& scheme) {
  if (!(scheme.h_rel > 0.0) || !(scheme.h_rel < 0.1))
    throw ContractError("derivative step h_rel must lie in (0, 0.1)");
}

}  // namespace

StateFamily::StateFamily(std::vector<std::string> parameter_names,
                         Evaluator evaluate, Normalization policy,
                         std::map<std::string, double> open_lower_bounds)
    : names_(std::move(parameter_names)),
      evaluate_(std::move(evaluate)),
      policy_(policy),
      bounds_(std::move(open_lower_bounds)) {
  if (names_.empty())
    throw ContractError("state family needs at least one parameter");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty())
      throw ContractError("parameter name must be non-empty");
    for (std::size_t j = 0; j < i; ++j)
      if (names_[j] == names_[i])
        throw ContractError("duplicate parameter '" + names_[i] + "'");
  }
  if (!evaluate_) throw ContractError("state family evaluator is empty");
  for (const auto& [name, bound] : bounds_) {
    if (std::find(names_.begin(), names_.end(), name) == names_.end())
      throw ContractError("lower bound refers to unknown parameter '" + name +
                          "'");
    if (!std::isfinite(bound))
      throw ContractError("lower bound for '" + name + "' must be finite");
  }
}

std::optional<double> StateFamily::open_lower_bound(
    std::string_view name) const {
  const auto it = bounds_.find(std::string(name));
  if (it == bounds_.end()) return std::nullopt;
  return it->second;
}

ComplexField StateFamily::evaluate(const ParamPoint& at,
                                   const Grid2D& grid) const {
  for (const std::string& name : names_) {
    if (!at.contains(name))
      throw ContractError("parameter point does not bind '" + name + "'");
    if (const auto bound = open_lower_bound(name))
      if (!(at.at(name) > *bound))
        throw ContractError("parameter '" + name + "' = " +
                            std::to_string(at.at(name)) +
                            " is at or below its open lower bound " +
                            std::to_string(*bound));
  }
  ComplexField raw = evaluate_(at, grid);
  if (!(raw.grid() == grid))
    throw ContractError("family evaluator returned a field on a different grid");
  if (policy_ == Normalization::enforce) return normalized(raw);
  return raw;
}

StateFamily make_expr_family(const ExprAst& amplitude, const ExprAst& phase,
                             std::vector<std::string> parameter_names,
                             Normalization policy) {
  if (amplitude.empty() || phase.empty())
    throw ContractError("make_expr_family: empty expression");
  for (const auto& used : {amplitude.parameters(), phase.parameters()})
    for (const std::string& name : used)
      if (std::find(parameter_names.begin(), parameter_names.end(), name) ==
          parameter_names.end())
        throw ContractError("expression references undeclared parameter '" +
                            name + "'");
  auto evaluator = [amplitude, phase](const ParamPoint& at,
                                      const Grid2D& grid) {
    const RealField a = eval_on_grid(amplitude, grid, at);
    const RealField p = eval_on_grid(phase, grid, at);
    std::vector<Complex> s(grid.size());
    const auto as = a.samples(), ps = p.samples();
    for (std::size_t k = 0; k < s.size(); ++k)
      s[k] = as[k] * std::polar(1.0, ps[k]);
    return ComplexField(grid, std::move(s));
  };
  return StateFamily(std::move(parameter_names), std::move(evaluator), policy);
}

ComplexField param_derivative(const StateFamily& family, const ParamPoint& at,
                              std::string_view parameter, const Grid2D& grid,
                              const DerivativeScheme& scheme,
                              DerivativeInfo* info) {
  check_scheme(scheme);
  const auto& names = family.parameter_names();
  if (std::find(names.begin(), names.end(), parameter) == names.end())
    throw ContractError("derivative with respect to unknown parameter '" +
                        std::string(parameter) + "'");
  const double value = at.at(std::string(parameter));

  double h = scheme.h_rel * std::max(std::abs(value), 1.0);
  bool shrunk = false;
  if (const auto bound = family.open_lower_bound(parameter)) {
    if (!(value > *bound))
      throw ContractError("parameter '" + std::string(parameter) +
                          "' is at or below its open lower bound");
    if (value - h <= *bound) {
      h = (value - *bound) / 2.0;
      shrunk = true;
    }
  }
  if (info != nullptr) {
    info->step = h;
    info->step_shrunk = shrunk;
  }

  const auto central = [&](double step) {
    const ComplexField plus =
        family.evaluate(at.with(parameter, value + step), grid);
    const ComplexField minus =
        family.evaluate(at.with(parameter, value - step), grid);
    return Complex(1.0 / (2.0 * step), 0.0) * (plus - minus);
  };

  if (!scheme.richardson) return central(h);
  const ComplexField d_h = central(h);
  const ComplexField d_half = central(h / 2.0);
  return Complex(1.0 / 3.0, 0.0) *
         (Complex(4.0, 0.0) * d_half - d_h);
}

}  // namespace qmetric
