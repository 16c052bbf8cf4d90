#include <doctest.h>

#include <lanemden/bubble.hpp>
#include <lanemden/error.hpp>
#include <lanemden/gamma_constants.hpp>
#include <lanemden/green.hpp>

using namespace lanemden;

// Frozen values from 30-digit mpmath radial quadrature of the defining
// integrals, independent of the library's quadrature and closed forms.
struct GammaOracle {
  int n;
  double g1, g2, g3;
};
static const GammaOracle kOracles[] = {
    {3, 12.820992204969127, 21.765592370810614, -5.681586547613105},
    {4, 105.27578027828649, 315.82734083485948, -87.729816898572077},
    {5, 844.36026476273856, 4586.9776174889415, -1016.9825790240273},
};

TEST_CASE("gamma constants by quadrature match the mpmath oracle") {
  for (const auto& o : kOracles) {
    CAPTURE(o.n);
    const GammaConstants g = gamma_constants(o.n);
    CHECK(g.gamma1 == doctest::Approx(o.g1).epsilon(1e-9));
    CHECK(g.gamma2 == doctest::Approx(o.g2).epsilon(1e-9));
    CHECK(g.gamma3 == doctest::Approx(o.g3).epsilon(1e-9));
  }
}

TEST_CASE("gamma closed forms match the mpmath oracle") {
  for (const auto& o : kOracles) {
    CAPTURE(o.n);
    const GammaConstants g = gamma_constants_closed_form(o.n);
    CHECK(g.gamma1 == doctest::Approx(o.g1).epsilon(1e-12));
    CHECK(g.gamma2 == doctest::Approx(o.g2).epsilon(1e-12));
    CHECK(g.gamma3 == doctest::Approx(o.g3).epsilon(1e-12));
  }
}

TEST_CASE("n = 4 gamma1 is 32 pi^2 / 3") {
  const double pi = 3.14159265358979323846;
  CHECK(gamma_constants_closed_form(4).gamma1 == doctest::Approx(32.0 * pi * pi / 3.0).epsilon(1e-14));
}

TEST_CASE("dimensions below 3 are rejected") {
  CHECK_THROWS_AS(gamma_constants(2), ValidationError);
  CHECK_THROWS_AS(gamma_constants_closed_form(2), ValidationError);
}

TEST_CASE("bubble normalisation constants") {
  CHECK(bubble_alpha(3) == doctest::Approx(1.3160740129524925).epsilon(1e-15));
  CHECK(bubble_alpha(4) == doctest::Approx(2.8284271247461901).epsilon(1e-15));
  CHECK(critical_exponent(3) == 5.0);
  CHECK(critical_exponent(4) == 3.0);
  CHECK(green_constant(3) == doctest::Approx(0.079577471545947668).epsilon(1e-15));
  CHECK(green_constant(4) == doctest::Approx(0.025330295910584443).epsilon(1e-15));
}

TEST_CASE("bubble peak and reduced scaling") {
  const Bubble b = Bubble::on_axis(3, 0.01, 1.2);
  Point xi(3);
  xi << 0.0, 0.0, 1.2;
  CHECK(eval_bubble(b, xi) == doctest::Approx(bubble_alpha(3) / std::sqrt(0.01)).epsilon(1e-14));
  const Bubble r = bubble_from_reduced(3, 0.1, 0.5, 2.0);
  CHECK(r.delta == doctest::Approx(0.5 * 0.01).epsilon(1e-14));
  double z = 0;
  REQUIRE(r.axis_position(z));
  CHECK(z == doctest::Approx(1.2).epsilon(1e-14));
  CHECK(delta_to_d(3, 0.1, r.delta) == doctest::Approx(0.5).epsilon(1e-14));
}
