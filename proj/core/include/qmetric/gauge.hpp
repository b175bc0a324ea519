#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qmetric/expr.hpp"
#include "qmetric/field.hpp"
#include "qmetric/grid.hpp"
#include "qmetric/params.hpp"

namespace qmetric {

// A real gauge phase alpha(x, y; params) together with optional analytic
// parameter derivatives. Supplied derivatives are cross-checked against
// finite differences on a small probe grid at construction; a disagreement
// is a contract violation, so a phase object that exists is trustworthy.
class GaugePhase {
 public:
  GaugePhase(ExprAst alpha, std::vector<std::string> parameter_names,
             std::map<std::string, ExprAst> analytic_derivatives = {});

  const std::vector<std::string>& parameter_names() const { return names_; }
  const ExprAst& alpha() const { return alpha_; }

  RealField phase_field(const ParamPoint& at, const Grid2D& grid) const;

  // d(alpha)/d(parameter) as a field: analytic when registered, finite
  // differences otherwise, exact zero when alpha does not mention the
  // parameter at all.
  RealField derivative_field(std::string_view parameter, const ParamPoint& at,
                             const Grid2D& grid) const;

  // Registered analytic derivative, or nullptr.
  const ExprAst* analytic_derivative(std::string_view parameter) const;

  // Phase multiplied by a constant factor, derivatives scaled along.
  GaugePhase scaled(double factor) const;

 private:
  ExprAst alpha_;
  std::vector<std::string> names_;
  std::map<std::string, ExprAst> analytic_;
};

// Per-parameter connection coefficients Gamma_i(x, y; params). Entries are
// either expression-backed (composable symbolically) or arbitrary sampled
// closures.
class Connection {
 public:
  using Sampler = std::function<RealField(const ParamPoint&, const Grid2D&)>;

  class Entry {
   public:
    static Entry expression(ExprAst e);
    static Entry sampled(Sampler s);

    bool is_expression() const { return !expr_.empty(); }
    // Backing expression, nullptr for sampled entries.
    const ExprAst* expression_ast() const;

    RealField field(const ParamPoint& at, const Grid2D& grid) const;

   private:
    Entry() = default;
    ExprAst expr_;
    Sampler sampler_;
  };

  Connection(std::vector<std::string> parameter_names,
             std::vector<Entry> entries);

  // All-zero connection over the given parameters.
  static Connection zero(std::vector<std::string> parameter_names);

  const std::vector<std::string>& parameter_names() const { return names_; }
  const Entry& entry(std::string_view parameter) const;
  RealField field(std::string_view parameter, const ParamPoint& at,
                  const Grid2D& grid) const;

 private:
  std::vector<std::string> names_;
  std::vector<Entry> entries_;
};

// Transport law Gamma'_i = Gamma_i + d(alpha)/d(lambda_i). Expression-backed
// entries stay expression-backed when the phase has an analytic derivative
// for that parameter; everything else degrades to a sampled entry. The
// connection and the phase must declare identical parameter lists.
Connection transform_connection(const Connection& gamma,
                                const GaugePhase& alpha);

}  // namespace qmetric
