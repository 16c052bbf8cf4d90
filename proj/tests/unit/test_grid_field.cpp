#include <doctest.h>

#include <cmath>
#include <numbers>

#include <lanemden/error.hpp>
#include <lanemden/green.hpp>
#include <lanemden/laplacian.hpp>
#include <lanemden/poisson.hpp>
#include <lanemden/solver.hpp>
#include <lanemden/spline.hpp>

using namespace lanemden;

namespace {
const AnnulusGeometry kGeo{3, 1.0, 3.0};
}

TEST_CASE("uniform grid nodes and mirror symmetry") {
  const GridPtr g = MeridianGrid::uniform(kGeo, 17, 9);
  CHECK(g->r(0) == 1.0);
  CHECK(g->r(16) == 3.0);
  CHECK(g->phi(0) == 0.0);
  CHECK(g->phi(8) == doctest::Approx(std::numbers::pi));
  for (int j = 0; j < 9; ++j) CHECK(g->phi(j) + g->phi(g->mirror(j)) == doctest::Approx(std::numbers::pi));
}

TEST_CASE("graded nodes cluster at the focus") {
  const auto x = graded_nodes(1.0, 3.0, 64, {RadialFocus{1.2, 1e-3}});
  REQUIRE(x.size() == 65);
  CHECK(x.front() == 1.0);
  CHECK(x.back() == 3.0);
  double smallest = 1e9, where = 0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k)
    if (x[k + 1] - x[k] < smallest) {
      smallest = x[k + 1] - x[k];
      where = x[k];
    }
  CHECK(std::abs(where - 1.2) < 0.01);
  CHECK(smallest < 2e-3);
}

TEST_CASE("discrete Laplacian of |x|^2 and of x_n") {
  // -Delta |x|^2 = -2n, Delta x_n = 0
  const GridPtr g = MeridianGrid::uniform(kGeo, 65, 33);
  const auto lap = AxisymmetricLaplacian::for_grid(g);
  const MeridianField sq = MeridianField::sample(g, [](double r, double) { return r * r; });
  const MeridianField xn = MeridianField::sample(g, [](double r, double phi) { return r * std::cos(phi); });
  const MeridianField a = lap->apply(sq), b = lap->apply(xn);
  double err_sq = 0, err_xn = 0;
  for (int i = 1; i < g->nr() - 1; ++i)
    for (int j = 0; j < g->nphi(); ++j) {
      err_sq = std::max(err_sq, std::abs(a(i, j) + 6.0));
      err_xn = std::max(err_xn, std::abs(b(i, j)));
    }
  CHECK(err_sq < 5e-2);
  CHECK(err_xn < 5e-2);
}

TEST_CASE("Poisson solve converges at second order") {
  // v = |x|^2 + x_n solves -Delta v = -6
  double prev = 0;
  for (int k = 0; k < 3; ++k) {
    const int nr = (16 << k) + 1, nphi = (8 << k) + 1;
    const GridPtr g = MeridianGrid::uniform(kGeo, nr, nphi);
    const MeridianField src = MeridianField::sample(g, [](double, double) { return -6.0; });
    const auto bc = BoundaryData::from_function(*g, [](double r, double phi) { return r * r + r * std::cos(phi); });
    const MeridianField v = poisson_solve(g, src, bc);
    double err = 0;
    for (int i = 0; i < g->nr(); ++i)
      for (int j = 0; j < g->nphi(); ++j)
        err = std::max(err, std::abs(v(i, j) - g->r(i) * g->r(i) - g->r(i) * std::cos(g->phi(j))));
    if (k > 0 && prev > 1e-12) CHECK(prev / err > 3.0);
    prev = err;
  }
}

TEST_CASE("symmetry projection is exact") {
  const GridPtr g = MeridianGrid::uniform(kGeo, 17, 9);
  MeridianField u = MeridianField::sample(g, [](double r, double phi) { return r + std::cos(phi) + std::sin(3 * phi); });
  MeridianField even = u, odd = u;
  even.project(Symmetry::even);
  odd.project(Symmetry::odd);
  CHECK(even.symmetry_defect(Symmetry::even) == 0.0);
  CHECK(odd.symmetry_defect(Symmetry::odd) == 0.0);
  const MeridianField sum = even + odd;
  for (std::size_t k = 0; k < u.values().size(); ++k) CHECK(sum.values()[k] == doctest::Approx(u.values()[k]));
}

TEST_CASE("spline reproduces cubics in r and is exact at nodes") {
  const GridPtr g = MeridianGrid::uniform(kGeo, 9, 17);
  const MeridianField u = MeridianField::sample(g, [](double r, double phi) { return r * r * r * (2.0 + std::cos(phi)); });
  const MeridianSpline s(u);
  CHECK(s(g->r(3), g->phi(5)) == doctest::Approx(u(3, 5)).epsilon(1e-14));
  const MeridianField w = MeridianField::sample(g, [](double r, double) { return r * r * r - 2 * r; });
  const MeridianSpline sw(w);
  for (double r : {1.1, 1.77, 2.5, 2.99}) {
    const SplineJet jet = sw.jet(r, 0.4);
    CHECK(jet.v == doctest::Approx(r * r * r - 2 * r).epsilon(1e-12));
    CHECK(jet.r == doctest::Approx(3 * r * r - 2).epsilon(1e-10));
    CHECK(jet.rr == doctest::Approx(6 * r).epsilon(1e-9));
    CHECK(std::abs(jet.phi) < 1e-10);
  }
  CHECK_THROWS_AS(s(3.5, 0.1), GuardBandError);
}

TEST_CASE("reflection across the nearest sphere") {
  Point x(3);
  x << 0.0, 0.0, 1.5;
  Point y = reflection_point(kGeo, x);
  CHECK(y(2) == doctest::Approx(0.5));
  x << 0.0, 2.5, 0.0;
  y = reflection_point(kGeo, x);
  CHECK(y(1) == doctest::Approx(3.5));
  x << 0.0, 0.0, 2.0;
  CHECK_THROWS_AS(reflection_point(kGeo, x), ValidationError);
}

TEST_CASE("nodal domains count sign components") {
  const GridPtr g = MeridianGrid::uniform(kGeo, 17, 33);
  auto bump = [](double r) { return (r - 1.0) * (3.0 - r); };
  CHECK(nodal_domains(MeridianField::sample(g, [&](double r, double) { return bump(r); })) == 1);
  CHECK(nodal_domains(MeridianField::sample(g, [&](double r, double phi) { return bump(r) * std::cos(phi); })) == 2);
  CHECK(nodal_domains(MeridianField::sample(g, [&](double r, double phi) { return bump(r) * std::cos(3 * phi); })) == 4);
  CHECK(nodal_domains(MeridianField::sample(g, [&](double r, double) { return bump(r) * std::sin(std::numbers::pi * r); })) == 2);
}

TEST_CASE("blowup fit locates a sharp axis peak") {
  const GridPtr g = MeridianGrid::uniform(kGeo, 401, 33);
  const Bubble b = Bubble::on_axis(3, 0.05, 2.0);
  const MeridianField u = sample_bubble(g, b);
  const BlowupFit fit = blowup_fit(u, 0.05);
  REQUIRE(fit.peaks.size() == 1);
  CHECK(fit.peaks[0].z == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(fit.peaks[0].amplitude == doctest::Approx(bubble_alpha(3) / std::sqrt(0.05)).epsilon(1e-3));
}
