#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmetric/field.hpp"
#include "qmetric/grid.hpp"
#include "qmetric/params.hpp"

namespace qmetric {

// Real-valued analytic expressions in x, y and named parameters. Complex
// states are assembled from an (amplitude, phase) pair of these, so the
// grammar itself never needs complex literals. ASTs are immutable values
// sharing their nodes; copying is cheap.
class ExprAst {
 public:
  enum class Func { exp, sqrt, sin, cos, abs };

  ExprAst() = default;  // empty AST; evaluating it is a contract violation

  static ExprAst constant(double value);
  static ExprAst x();
  static ExprAst y();
  static ExprAst parameter(std::string name);
  static ExprAst negate(ExprAst operand);
  static ExprAst add(ExprAst lhs, ExprAst rhs);
  static ExprAst subtract(ExprAst lhs, ExprAst rhs);
  static ExprAst multiply(ExprAst lhs, ExprAst rhs);
  static ExprAst divide(ExprAst lhs, ExprAst rhs);
  static ExprAst power(ExprAst base, ExprAst exponent);
  static ExprAst call(Func f, ExprAst arg);

  bool empty() const { return root_ == nullptr; }

  // Scalar evaluation with x, y bound to a point and parameters taken from
  // params. Unbound parameters are a contract violation.
  double eval(double x, double y, const ParamPoint& params) const;

  // Canonical fully parenthesized rendering; parsing it back yields a
  // structurally identical AST.
  std::string str() const;

  bool same_structure(const ExprAst& other) const;

  // Names of the parameters referenced anywhere in the tree, sorted, unique.
  std::vector<std::string> parameters() const;

  struct Node;

 private:
  explicit ExprAst(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

// Parses text against the declared parameter names. Identifiers resolve to
// x, y, pi, a function name, or a declared parameter; anything else is an
// error naming the offender. Precedence: ^ over unary minus over * / over
// + -, everything left associative except ^ (right). No implicit
// multiplication. Throws ParseError with a byte offset.
ExprAst parse_expression(std::string_view text,
                         std::span<const std::string> declared_params);

// Pointwise evaluation over the lattice. A non-finite value (pole, domain
// error) raises NumericalError naming the first offending lattice index in
// sample order.
RealField eval_on_grid(const ExprAst& ast, const Grid2D& grid,
                       const ParamPoint& params);

}  // namespace qmetric
