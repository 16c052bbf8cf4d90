#include <doctest.h>

#include <cmath>

#include <lanemden/reduced_energy.hpp>

using namespace lanemden;

// Stationarity of c4 (d/2t)^{n-2} + c5 t - c6 ln d gives t = c6/c5 and
// d = 2t (c6/((n-2) c4))^{1/(n-2)}.
static void expect_minimum(int n, double c4, double c5, double c6) {
  EnergyExpansion e = EnergyExpansion::unit(n);
  e.c[3] = c4;
  e.c[4] = c5;
  e.c[5] = c6;
  const double t = c6 / c5;
  const double d = 2.0 * t * std::pow(c6 / ((n - 2) * c4), 1.0 / (n - 2));
  const CriticalPoint cp = minimize_phi(PhiCase::single, e);
  CHECK(cp.d[0] == doctest::Approx(d).epsilon(1e-8));
  CHECK(cp.t[0] == doctest::Approx(t).epsilon(1e-8));
  CHECK(cp.hessian_spectrum.front() > 0.0);
}

TEST_CASE("single-bubble minimiser with unit coefficients") {
  expect_minimum(3, 1, 1, 1);  // (2, 1)
  expect_minimum(4, 1, 1, 1);  // (sqrt 2, 1)
}

TEST_CASE("single-bubble minimiser with general coefficients") {
  expect_minimum(3, 2.0, 3.0, 1.5);
  expect_minimum(5, 0.7, 1.3, 2.1);
}

TEST_CASE("phi_single closed form") {
  const EnergyExpansion e = EnergyExpansion::unit(3);
  CHECK(phi_single(2.0, 1.0, e) == doctest::Approx(2.0 - std::log(2.0)).epsilon(1e-15));
  CHECK(phi_value(PhiCase::single, Eigen::Vector2d(2.0, 1.0), e) == doctest::Approx(2.0 - std::log(2.0)));
}

TEST_CASE("pair landscape has a stationary interior minimum") {
  const EnergyExpansion e = EnergyExpansion::unit(3);
  const CriticalPoint cp = minimize_phi(PhiCase::pair, e);
  REQUIRE(cp.d.size() == 2);
  CHECK(cp.t[0] < cp.t[1]);
  CHECK(cp.scaled_gradient < 1e-8);
  CHECK(cp.hessian_spectrum.front() > 0.0);
  const Eigen::VectorXd g = phi_gradient(PhiCase::pair, cp.params(), e);
  CHECK(g.cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("grid search lands next to the Newton minimum") {
  const EnergyExpansion e = EnergyExpansion::unit(3);
  const GridSearchResult g = grid_search_phi(PhiCase::single, e, SearchBox{});
  CHECK_FALSE(g.on_boundary);
  CHECK(std::abs(std::log(g.params[0] / 2.0)) <= g.log_step);
  CHECK(std::abs(std::log(g.params[1] / 1.0)) <= g.log_step);
}
