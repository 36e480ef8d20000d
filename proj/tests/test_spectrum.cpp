#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "zeropi/spectrum.hpp"

using namespace zeropi;

namespace {

CircuitParams base_params() {
  CircuitParams p;
  p.EC = 0.04;
  p.ECJ = 20.0;
  p.EJ = 10.0;
  p.EL = 0.04;
  p.dC = 0.05;
  p.dCJ = 0.05;
  p.dEJ = 0.05;
  p.dEL = 0.05;
  return p;
}

BasisSpec small_basis() {
  BasisSpec b;
  b.n_theta_max = 5;
  b.phi_points = 41;
  b.phi_max = 4.5;
  b.n_zeta_max = 3;
  return b;
}

}  // namespace

TEST_CASE("sweep parameter names round-trip") {
  for (auto p : {SweepParameter::flux, SweepParameter::ng_theta, SweepParameter::EJ,
                 SweepParameter::EL})
    CHECK(parse_sweep_parameter(sweep_parameter_name(p)) == p);
  CHECK_THROWS_AS(parse_sweep_parameter("bogus"), DomainError);
}

TEST_CASE("apply_parameter absolute and relative modes") {
  const CircuitParams p = base_params();
  CHECK(apply_parameter(p, SweepParameter::flux, 0.3).flux == 0.3);
  CHECK(apply_parameter(p, SweepParameter::ng_theta, 0.25).ng_theta == 0.25);
  CHECK(apply_parameter(p, SweepParameter::EJ, 12.0).EJ == 12.0);
  CHECK(apply_parameter(p, SweepParameter::EJ, 0.01, true).EJ ==
        doctest::Approx(10.0 * 1.01));
  CHECK(apply_parameter(p, SweepParameter::EL, -0.02, true).EL ==
        doctest::Approx(0.04 * 0.98));
}

TEST_CASE("Richardson differentiation nails an analytic frequency") {
  auto omega = [](double x) { return std::sin(3.0 * x) + 0.5 * x * x; };
  const double x0 = 0.3;
  const auto d = differentiate(omega, x0, 1e-3);
  CHECK(d.d1 == doctest::Approx(3.0 * std::cos(3.0 * x0) + x0).epsilon(1e-9));
  CHECK(d.d2 == doctest::Approx(-9.0 * std::sin(3.0 * x0) + 1.0).epsilon(1e-6));
  CHECK(d.err1 < 1e-6);
  CHECK_THROWS_AS(differentiate(omega, x0, 0.0), DomainError);
}

TEST_CASE("flux and charge sweet spots have vanishing first derivatives") {
  const CircuitParams p = base_params();
  BasisSpec b = small_basis();
  b.n_zeta_max = 0;

  const auto dflux = energy_derivatives(p, b, SweepParameter::flux);
  const auto dng = energy_derivatives(p, b, SweepParameter::ng_theta);
  // omega_ge is even around both points, so d1 must vanish to stencil accuracy
  CHECK(std::abs(dflux.d1) < std::max(1e3, 10.0 * dflux.err1));
  CHECK(std::abs(dng.d1) < std::max(1e3, 10.0 * dng.err1));
  // curvatures are nonzero away from a flat direction
  CHECK(std::abs(dflux.d2) > 0.0);
}

TEST_CASE("sweep tracks levels continuously and flags no failures") {
  const CircuitParams p = base_params();
  BasisSpec b = small_basis();
  b.n_zeta_max = 0;
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.05 * i);

  const DispersionCurve c = sweep(p, b, SweepParameter::flux, grid, 3);
  REQUIRE(c.energies.size() == grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    CHECK_FALSE(c.point_failed[i]);
    REQUIRE(c.energies[i].size() == 3);
    CHECK(c.energies[i][0] <= c.energies[i][1] + 1e-12);
  }
  // interior derivative of omega_ge is filled and finite
  CHECK(std::isfinite(c.d1_omega_ge[5]));
  CHECK(std::abs(c.d2_omega_ge[5]) >= 0.0);
}

TEST_CASE("sweep is deterministic across worker counts") {
  const CircuitParams p = base_params();
  BasisSpec b = small_basis();
  b.n_zeta_max = 0;
  std::vector<double> grid;
  for (int i = 0; i <= 8; ++i) grid.push_back(0.03 * i);

  SweepOptions one;
  one.workers = 1;
  SweepOptions four;
  four.workers = 4;
  const DispersionCurve a = sweep(p, b, SweepParameter::flux, grid, 4, one);
  const DispersionCurve c = sweep(p, b, SweepParameter::flux, grid, 4, four);
  for (size_t i = 0; i < grid.size(); ++i)
    for (int l = 0; l < 4; ++l)
      CHECK(a.energies[i][l] == c.energies[i][l]);  // bitwise
}

TEST_CASE("sweep validates its grid") {
  const CircuitParams p = base_params();
  BasisSpec b = small_basis();
  b.n_zeta_max = 0;
  CHECK_THROWS_AS(sweep(p, b, SweepParameter::flux, {}, 2), DomainError);
  CHECK_THROWS_AS(sweep(p, b, SweepParameter::flux, {0.2, 0.1}, 2), DomainError);
}

TEST_CASE("dressed-state labels recover the product structure") {
  const CircuitParams p = base_params();
  const BasisSpec b = small_basis();
  const auto sol2 = lowest_eigenpairs(build_h_2d(p, b), 3);
  const auto sol3 = lowest_eigenpairs(build_h_3d(p, b), 8);
  const LabeledSpectrum labels = label_dressed(sol3, sol2, b);

  REQUIRE(labels.states.size() == 8);
  CHECK(labels.states[0].l == 0);
  CHECK(labels.states[0].n == 0);
  CHECK(labels.states[0].overlap > 0.99);
  // zeta ladder on the ground qubit state comes out in order
  const int i01 = labels.find(0, 1);
  REQUIRE(i01 >= 0);
  const DerivedEnergies de = derive_energies(p);
  CHECK(labels.states[i01].energy - labels.states[0].energy ==
        doctest::Approx(de.Omega_zeta).epsilon(0.02));
  // every retained state got a defined label
  for (const auto& s : labels.states) {
    CHECK(s.l >= 0);
    CHECK(s.n >= 0);
    CHECK(s.overlap > 0.5);
  }
}

TEST_CASE("label conflicts raise an error naming both states") {
  const CircuitParams p = base_params();
  const BasisSpec b = small_basis();
  // offering only one 2d level forces distinct 3d states onto the same label
  const auto sol2 = lowest_eigenpairs(build_h_2d(p, b), 1);
  const auto sol3 = lowest_eigenpairs(build_h_3d(p, b), 12);
  CHECK_THROWS_AS(label_dressed(sol3, sol2, b, 0.0), LabelingError);
}
