#include "qmetric/oracle.hpp"

#include <cmath>
#include <string>

#include "qmetric/errors.hpp"

namespace qmetric {

namespace {

// (n)!! with (-1)!! = 0!! = 1.
double double_factorial(int n) {
  double out = 1.0;
  for (int k = n; k >= 2; k -= 2) out *= k;
  return out;
}

void check_spec(const MomentSpec& s) {
  if (s.p < 0 || s.q < 0)
    throw ContractError("moment powers must be non-negative");
  if (s.m < 0) throw ContractError("quantum number m must be non-negative");
  if (!(s.B > 0.0)) throw ContractError("field strength B must be positive");
}

}  // namespace

double gaussian_moment(const MomentSpec& spec) {
  check_spec(spec);
  if (spec.p % 2 != 0 || spec.q % 2 != 0) return 0.0;
  const int k = (spec.p + spec.q) / 2;

  // <r^2k> = (2/B)^k (m+1)(m+2)...(m+k), spread over the angular average
  // <cos^p sin^q> = (p-1)!! (q-1)!! / (p+q)!!.
  double radial = 1.0;
  for (int j = 1; j <= k; ++j) radial *= (2.0 / spec.B) * (spec.m + j);
  const double angular = double_factorial(spec.p - 1) *
                         double_factorial(spec.q - 1) /
                         double_factorial(spec.p + spec.q);
  const double out = radial * angular;
  if (!std::isfinite(out))
    throw NumericalError("moment <x^" + std::to_string(spec.p) + " y^" +
                         std::to_string(spec.q) + "> overflows");
  return out;
}

double oracle_qmt(double B, int m, double g) {
  const double var_u = oracle_covariant_qmt(B, m);
  const double xy = gaussian_moment({1, 1, m, B});
  const double x2y2 = gaussian_moment({2, 2, m, B});
  return var_u + g * g * (x2y2 - xy * xy);
}

double oracle_covariant_qmt(double B, int m) {
  if (m < 0) throw ContractError("quantum number m must be non-negative");
  if (!(B > 0.0)) throw ContractError("field strength B must be positive");
  const double r2 = gaussian_moment({2, 0, m, B}) + gaussian_moment({0, 2, m, B});
  const double r4 = gaussian_moment({4, 0, m, B}) +
                    2.0 * gaussian_moment({2, 2, m, B}) +
                    gaussian_moment({0, 4, m, B});
  const double mean_u = (m + 1) / (2.0 * B) - r2 / 4.0;
  const double mean_u2 = (m + 1) * (m + 1) / (4.0 * B * B) -
                         (m + 1) / (4.0 * B) * r2 + r4 / 16.0;
  return mean_u2 - mean_u * mean_u;
}

}  // namespace qmetric
