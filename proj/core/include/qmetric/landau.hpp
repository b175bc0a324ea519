#pragma once

#include "qmetric/family.hpp"
#include "qmetric/field.hpp"
#include "qmetric/gauge.hpp"
#include "qmetric/grid.hpp"
#include "qmetric/units.hpp"

namespace qmetric {

// Lowest Landau level machinery in natural units (hbar = c = |e| = 1). The
// symmetric-gauge ground states are
//   psi_m = sqrt(B^(m+1) / (pi m! 2^(m+1))) (x + i y)^m exp(-B r^2 / 4),
// analytically normalized, angular momentum eigenvalue m. The one-parameter
// family of interest multiplies psi_m by exp(i g B x y): g = 0 keeps the
// symmetric gauge, g = 1/2 lands in the Landau gauge.

// Analytically normalized psi_m sampled on the grid. Amplitudes are built in
// log space so large m and large B stay finite.
ComplexField landau_state(double B, int m, const Grid2D& grid);

// Exact d/dB of exp(i g B x y) psi_m:
//   [ (m+1)/(2B) - r^2/4 + i g x y ] exp(i g B x y) psi_m.
ComplexField landau_state_derivative(double B, int m, double g,
                                     const Grid2D& grid);

// L2 norm of (L_z - m) psi_m over interior lattice points, with L_z =
// -i (x d_y - y d_x) discretized by central differences. Scales as dx^2.
double lz_residual(double B, int m, const Grid2D& grid);

// One-parameter family B -> exp(i g B x y) psi_m(B) with open lower bound
// B > 0.
StateFamily landau_family(int m, double g,
                          Normalization policy = Normalization::enforce);

// Connection making the metric of landau_family(m, g) gauge independent:
// Gamma_B = g x y (the symmetric-gauge family carries Gamma_B = 0, and the
// phase exp(i g B x y) transports it by d/dB of g B x y).
Connection landau_connection(double g);

// The phase exp(i g B x y) as a gauge phase object over parameter B, with
// its analytic B derivative g x y registered.
GaugePhase landau_phase(double g);

// Textbook closed form (g^2 + 1/2) / B for G_BB of the g family. Kept as a
// reported reference column; the moment oracle is the arbiter for tests.
double reference_qmt_closed_form(double B, double g);

// Square grid sized to the state: half width n_sigma / sqrt(B), n samples
// per axis. n_sigma = 8 puts the boundary density below 1e-13 of the peak
// for small m.
Grid2D default_grid(double B, int n = 256, double n_sigma = 8.0);

}  // namespace qmetric
