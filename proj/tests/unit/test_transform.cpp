#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <lanemden/error.hpp>
#include <lanemden/transform.hpp>

using namespace lanemden;

TEST_CASE("meridian map on the coordinate axes and the diagonal") {
  const double pi = std::numbers::pi;
  MeridianPoint p = meridian_map(1.0, 0.0);
  CHECK(p.rho == doctest::Approx(0.5));
  CHECK(p.phi == doctest::Approx(0.0));
  p = meridian_map(0.0, 2.0);
  CHECK(p.rho == doctest::Approx(2.0));
  CHECK(p.phi == doctest::Approx(pi));
  p = meridian_map(1.0, 1.0);
  CHECK(p.rho == doctest::Approx(1.0));
  CHECK(p.phi == doctest::Approx(pi / 2));
  // cos phi = (s^2 - t^2) / (s^2 + t^2)
  p = meridian_map(2.0, 1.0);
  CHECK(std::cos(p.phi) == doctest::Approx(3.0 / 5.0));
}

TEST_CASE("meridian inverse round trip") {
  for (double s : {0.3, 1.0, 1.7})
    for (double t : {0.0, 0.4, 2.2}) {
      const MeridianPoint p = meridian_map(s, t);
      const BiradialPoint q = meridian_inverse(p.rho, p.phi);
      CHECK(q.s == doctest::Approx(s).epsilon(1e-14));
      CHECK(q.t == doctest::Approx(t).epsilon(1e-14));
    }
}

TEST_CASE("lift geometry radii") {
  const LiftGeometry g = lift_geometry(AnnulusGeometry{3, 1.0, 3.0});
  CHECK(g.m == 2);
  CHECK(g.a == doctest::Approx(std::sqrt(2.0)));
  CHECK(g.b == doctest::Approx(std::sqrt(6.0)));
}

TEST_CASE("Laplacian correspondence for x_n converges at second order") {
  // u = rho cos phi = x_n is harmonic below, and (s^2 - t^2)/2 is harmonic above;
  // what remains is finite-difference truncation.
  CorrespondenceOptions opts;
  const CorrespondenceCase c = check_correspondence(
      "axial", [](double rho, double phi) { return rho * std::cos(phi); }, AnnulusGeometry{3, 1.0, 3.0}, opts,
      opts.h0);
  CHECK(c.pass);
  CHECK(c.order >= 1.8);
  for (std::size_t k = 1; k < c.discrepancy.size(); ++k)
    CHECK(c.discrepancy[k - 1] / c.discrepancy[k] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("correspondence report passes for m = 2 and m = 3") {
  for (int m : {2, 3}) {
    CAPTURE(m);
    CorrespondenceOptions opts;
    opts.random_fields = 3;
    opts.include_bubble = false;
    const CorrespondenceReport r = verify_correspondence(m, AnnulusGeometry{m + 1, 1.0, 3.0}, opts);
    CHECK(r.all_pass);
    for (const auto& c : r.cases)
      if (!c.exact) CHECK(c.order >= 1.8);
  }
}
