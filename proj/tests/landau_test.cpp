#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qmetric/errors.hpp"
#include "qmetric/family.hpp"
#include "qmetric/field.hpp"
#include "qmetric/geometry.hpp"
#include "qmetric/landau.hpp"
#include "qmetric/oracle.hpp"

using namespace qmetric;

TEST_SUITE("landau") {

TEST_CASE("ground state peak and node values") {
  const Grid2D grid = Grid2D::square(8.0, 129);  // odd n: origin on lattice
  const ComplexField p0 = landau_state(1.0, 0, grid);
  // peak value sqrt(B / 2 pi) = 1 / sqrt(2 pi)
  CHECK(p0.value(64, 64).real() ==
        doctest::Approx(0.3989422804014327).epsilon(1e-12));
  CHECK(p0.value(64, 64).imag() == 0.0);
  // m >= 1 states vanish at the origin
  const ComplexField p1 = landau_state(2.0, 1, grid);
  CHECK(p1.value(64, 64) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("states arrive normalized") {
  CHECK(quadrature_norm(landau_state(1.0, 0, Grid2D::square(8.0, 129))) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(quadrature_norm(landau_state(2.0, 1, default_grid(2.0, 256))) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // higher m spreads toward the grid edge; truncation grows but stays tiny
  CHECK(quadrature_norm(landau_state(0.5, 5, default_grid(0.5, 256))) ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("contracts on B and m") {
  const Grid2D grid = Grid2D::square(2.0, 5);
  CHECK_THROWS_AS(landau_state(0.0, 0, grid), ContractError);
  CHECK_THROWS_AS(landau_state(-1.0, 0, grid), ContractError);
  CHECK_THROWS_AS(landau_state(1.0, -1, grid), ContractError);
  CHECK_THROWS_AS(landau_family(-2, 0.0), ContractError);
  CHECK_THROWS_AS(default_grid(0.0), ContractError);
  CHECK_THROWS_AS(default_grid(1.0, 256, 0.0), ContractError);
}

TEST_CASE("angular momentum residual shrinks as dx^2") {
  // central differences: residual ~ dx^2, so halving dx quarters it
  const Grid2D f0 = default_grid(1.0, 256);
  const double r0 = lz_residual(1.0, 0, f0);
  const double c0 = lz_residual(1.0, 0, Grid2D::square(f0.x_max(), 128));
  CHECK(r0 < 5e-4);
  CHECK(c0 / r0 > 3.5);
  CHECK(c0 / r0 < 4.5);

  const Grid2D f1 = default_grid(2.0, 256);
  const double r1 = lz_residual(2.0, 1, f1);
  const double c1 = lz_residual(2.0, 1, Grid2D::square(f1.x_max(), 128));
  CHECK(r1 < 1.5e-3);
  CHECK(c1 / r1 > 3.5);
  CHECK(c1 / r1 < 4.5);
}

TEST_CASE("gauge copies overlap by the analytic factor") {
  // |<psi_{g=0}, psi_{g=1/2}>| at B = 1 is 1/sqrt(1 + 1/4) = 2/sqrt(5)
  const Grid2D grid = default_grid(1.0, 256);
  const ParamPoint at{{"B", 1.0}};
  const ComplexField a =
      landau_family(0, 0.0, Normalization::trust).evaluate(at, grid);
  const ComplexField b =
      landau_family(0, 0.5, Normalization::trust).evaluate(at, grid);
  CHECK(std::abs(inner_product(a, b)) ==
        doctest::Approx(0.8944271909999159).epsilon(1e-12));
}

TEST_CASE("finite differences reproduce the exact B derivative") {
  for (const double g : {0.0, 0.5}) {
    for (const int m : {0, 1}) {
      const double B = 1.3;
      const StateFamily family = landau_family(m, g, Normalization::trust);
      const Grid2D grid = default_grid(B, 256);
      DerivativeInfo info;
      const ComplexField fd =
          param_derivative(family, ParamPoint{{"B", B}}, "B", grid, {}, &info);
      const ComplexField exact = landau_state_derivative(B, m, g, grid);
      CHECK(quadrature_norm(fd - exact) < 1e-11);
      CHECK(info.step == doctest::Approx(1.3e-3));
      CHECK_FALSE(info.step_shrunk);
    }
  }
}

TEST_CASE("family respects the open lower bound on B") {
  const StateFamily family = landau_family(0, 0.0);
  CHECK(family.parameter_names() == std::vector<std::string>{"B"});
  CHECK(family.open_lower_bound("B") == 0.0);
  const Grid2D grid = Grid2D::square(4.0, 17);
  CHECK_THROWS_AS(family.evaluate(ParamPoint{{"B", -1.0}}, grid),
                  ContractError);
  CHECK_THROWS_AS(family.evaluate(ParamPoint{{"B", 0.0}}, grid),
                  ContractError);
}

TEST_CASE("metric values against the moment oracle") {
  struct Case {
    double B;
    int m;
    double g;
  };
  for (const Case& c : std::vector<Case>{
           {1, 0, 0}, {1, 0, 0.5}, {2, 1, 0}, {0.5, 0, 2}}) {
    CAPTURE(c.B);
    CAPTURE(c.m);
    CAPTURE(c.g);
    const Grid2D grid = default_grid(c.B, 256);
    const ParamPoint at{{"B", c.B}};
    const StateFamily family = landau_family(c.m, c.g);
    const QMTResult naive = qmt(family, at, grid);
    const QMTResult cov =
        covariant_qmt(family, landau_connection(c.g), at, grid);
    CHECK(naive.metric_at(0, 0) ==
          doctest::Approx(oracle_qmt(c.B, c.m, c.g)).epsilon(1e-6));
    CHECK(cov.metric_at(0, 0) ==
          doctest::Approx(oracle_covariant_qmt(c.B, c.m)).epsilon(1e-6));
    CHECK(std::abs(naive.beta[0]) < 1e-8);
    CHECK(naive.diagnostics.herm_residuals[0] < 1e-8);
  }
}

TEST_CASE("covariant metric ignores the gauge parameter") {
  const Grid2D grid = default_grid(1.0, 256);
  const ParamPoint at{{"B", 1.0}};
  for (const double g : {0.0, 0.5, 1.0}) {
    const StateFamily family = landau_family(0, g);
    const double cov =
        covariant_qmt(family, landau_connection(g), at, grid).metric_at(0, 0);
    CHECK(cov == doctest::Approx(0.25).epsilon(1e-9));
    // while the standard metric picks up g^2 Var(xy) = g^2 at B = 1
    const double naive = qmt(family, at, grid).metric_at(0, 0);
    CHECK(naive == doctest::Approx(0.25 + g * g).epsilon(1e-9));
  }
}

TEST_CASE("phase object transports the zero connection to g x y") {
  const GaugePhase phase = landau_phase(0.5);
  CHECK(phase.analytic_derivative("B") != nullptr);
  const Connection moved =
      transform_connection(Connection::zero({"B"}), phase);
  CHECK(moved.entry("B").is_expression());
  const Grid2D grid(1, 2, 2, 3, 4, 4);
  CHECK(moved.field("B", ParamPoint{{"B", 7.0}}, grid).value(0, 0) ==
        doctest::Approx(0.5 * 1.0 * 2.0).epsilon(1e-14));

  // and the built-in connection agrees
  CHECK(landau_connection(0.5)
            .field("B", ParamPoint{{"B", 7.0}}, grid)
            .value(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(landau_connection(0.0).entry("B").is_expression());
}

TEST_CASE("closed-form reference column") {
  CHECK(reference_qmt_closed_form(1.0, 0.0) == doctest::Approx(0.5));
  CHECK(reference_qmt_closed_form(2.0, 0.0) == doctest::Approx(0.25));
  CHECK(reference_qmt_closed_form(2.0, 1.0) == doctest::Approx(0.75));
  CHECK(reference_qmt_closed_form(4.0, 1.0) == doctest::Approx(0.375));
}

TEST_CASE("default grid scales with the magnetic length") {
  const Grid2D grid = default_grid(4.0, 64);
  CHECK(grid.nx() == 64);
  CHECK(grid.ny() == 64);
  CHECK(grid.x_max() == doctest::Approx(4.0));   // 8 / sqrt(4)
  CHECK(grid.x_min() == doctest::Approx(-4.0));
  CHECK(grid.y_max() == doctest::Approx(4.0));
  const Grid2D wide = default_grid(1.0, 64, 10.0);
  CHECK(wide.x_max() == doctest::Approx(10.0));
}

}  // TEST_SUITE
