#pragma once

namespace qmetric {

// Closed-form Gaussian moment machinery for the lowest Landau level states
// psi_m proportional to (x + i y)^m exp(-B r^2 / 4). Everything here is
// assembled from factorials and double factorials only, with no quadrature,
// no finite differences and no shared code with the field pipeline, so these
// values can arbitrate grid results.

struct MomentSpec {
  int p = 0;  // power of x
  int q = 0;  // power of y
  int m = 0;  // angular momentum quantum number
  double B = 1.0;
};

// <x^p y^q> in the normalized state psi_m at field strength B. Zero when p
// or q is odd. Throws ContractError on negative powers, negative m or
// non-positive B, NumericalError when the factorial growth overflows.
double gaussian_moment(const MomentSpec& spec);

// The metric component G_BB of psi_m carrying the extra phase exp(i g B x y),
// assembled from moments of u = (m + 1) / (2B) - r^2 / 4 and of x y:
// Var(u) + g^2 Var(x y).
double oracle_qmt(double B, int m, double g);

// The connection-covariant G_BB, i.e. Var(u) alone; independent of g by
// construction.
double oracle_covariant_qmt(double B, int m);

}  // namespace qmetric
