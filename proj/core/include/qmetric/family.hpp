#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmetric/expr.hpp"
#include "qmetric/field.hpp"
#include "qmetric/grid.hpp"
#include "qmetric/params.hpp"

namespace qmetric {

// Whether evaluated states are rescaled to unit quadrature norm at every
// parameter point, or taken as supplied.
enum class Normalization { enforce, trust };

// Central-difference settings for parameter derivatives. The relative step
// must sit in (0, 0.1). With richardson enabled the two-step extrapolation
// (4 D_{h/2} - D_h) / 3 is used, giving fourth-order accuracy.
struct DerivativeScheme {
  double h_rel = 1e-3;
  bool richardson = true;
};

struct DerivativeInfo {
  double step = 0.0;       // actual base step used
  bool step_shrunk = false;  // true when an open lower bound forced a smaller step
};

// A parametrized wavefunction: evaluates to a complex field on any grid at
// any admissible parameter point. Open lower bounds mark parameters whose
// domain is (bound, inf); derivative stencils never cross them.
class StateFamily {
 public:
  using Evaluator =
      std::function<ComplexField(const ParamPoint&, const Grid2D&)>;

  StateFamily(std::vector<std::string> parameter_names, Evaluator evaluate,
              Normalization policy = Normalization::enforce,
              std::map<std::string, double> open_lower_bounds = {});

  const std::vector<std::string>& parameter_names() const { return names_; }
  Normalization policy() const { return policy_; }
  std::optional<double> open_lower_bound(std::string_view name) const;
  const std::map<std::string, double>& open_lower_bounds() const {
    return bounds_;
  }

  // Evaluates the raw state, then normalizes when the policy says to. The
  // point must bind every declared parameter.
  ComplexField evaluate(const ParamPoint& at, const Grid2D& grid) const;

 private:
  std::vector<std::string> names_;
  Evaluator evaluate_;
  Normalization policy_;
  std::map<std::string, double> bounds_;
};

// Family A(x, y; params) * exp(i phi(x, y; params)) from two real
// expressions. Every parameter referenced by either expression must be
// declared in parameter_names.
StateFamily make_expr_family(const ExprAst& amplitude, const ExprAst& phase,
                             std::vector<std::string> parameter_names,
                             Normalization policy = Normalization::enforce);

// Central-difference derivative of the family with respect to one parameter.
// The step is h_rel * max(|value|, 1), halved toward an open lower bound if
// the stencil would cross it. Reports the step actually taken through info.
ComplexField param_derivative(const StateFamily& family, const ParamPoint& at,
                              std::string_view parameter, const Grid2D& grid,
                              const DerivativeScheme& scheme = {},
                              DerivativeInfo* info = nullptr);

}  // namespace qmetric
