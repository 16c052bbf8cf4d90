#include "lanemden/bubble_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "lanemden/bubble.hpp"
#include "lanemden/error.hpp"
#include "lanemden/quadrature.hpp"

namespace lanemden {

namespace {

constexpr double kPi = std::numbers::pi;

// Radial intervals of the ray {z e_n + rho w(theta)} inside Omega, capped at rho_cap.
int ray_intervals(const AnnulusGeometry& geo, double z, double theta, double rho_cap,
                  double out[4]) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double zs = z * s;
  const double rho_out = -z * c + std::sqrt(std::max(0.0, geo.r_outer * geo.r_outer - zs * zs));
  double end = std::min(rho_out, rho_cap);
  const double disc = geo.r_inner * geo.r_inner - zs * zs;
  int k = 0;
  if (disc > 0.0 && z * c < 0.0) {
    const double sq = std::sqrt(disc);
    const double r1 = -z * c - sq, r2 = -z * c + sq;
    out[k++] = 0.0;
    out[k++] = std::min(r1, end);
    if (r2 < end) {
      out[k++] = r2;
      out[k++] = end;
    }
  } else {
    out[k++] = 0.0;
    out[k++] = end;
  }
  return k;
}

double polar_integral(const AnnulusGeometry& geo, const PolarCentre& c, double rho_cap,
                      const AxisIntegrand& f, const PolarOptions& opts) {
  geo.validate();
  const double az = std::abs(c.z);
  if (!(az > geo.r_inner && az < geo.r_outer))
    throw ValidationError("polar quadrature centre must lie inside the annulus");
  if (!(c.delta > 0.0)) throw ValidationError("polar quadrature needs a positive delta");
  const int n = geo.n;
  const double tau = std::min(az - geo.r_inner, geo.r_outer - az);

  QuadratureOptions inner;
  inner.rel_tol = 0.1 * opts.rel_tol;
  inner.max_subintervals = opts.max_subintervals;
  inner.throw_on_failure = false;

  std::vector<double> bp;
  auto ray = [&](double theta) {
    double seg[4];
    const int k = ray_intervals(geo, c.z, theta, rho_cap, seg);
    const double ct = std::cos(theta), st = std::sin(theta);
    auto g = [&](double rho) {
      return f(rho * st, c.z + rho * ct) * std::pow(rho, n - 1);
    };
    double total = 0.0;
    for (int m = 0; m + 1 < k; m += 2) {
      const double a = seg[m], b = seg[m + 1];
      if (!(b > a)) continue;
      bp.clear();
      bp.push_back(a);
      for (double h = c.delta; h < b; h *= 2.0)
        if (h > a) bp.push_back(h);
      for (double h : {0.5 * tau, tau, 2.0 * tau})
        if (h > a && h < b) bp.push_back(h);
      bp.push_back(b);
      std::sort(bp.begin(), bp.end());
      total += integrate(g, bp, inner).value;
    }
    return total * std::pow(st, n - 2);
  };

  std::vector<double> tb{0.0, kPi};
  if (geo.r_inner < az) {
    const double a = std::asin(geo.r_inner / az);
    const double tt = c.z > 0.0 ? kPi - a : a;
    tb.push_back(tt);
  }
  // Angular scale of the nearby boundary as seen from the centre.
  const double ta = std::min(0.5, 4.0 * tau);
  for (double t : {ta, kPi - ta}) tb.push_back(t);
  std::sort(tb.begin(), tb.end());
  tb.erase(std::unique(tb.begin(), tb.end()), tb.end());

  QuadratureOptions outer;
  outer.rel_tol = opts.rel_tol;
  outer.abs_tol = opts.abs_tol;
  outer.max_subintervals = opts.max_subintervals;
  return sphere_area(n - 2) * integrate(ray, tb, outer).value;
}

}  // namespace

double integrate_about(const AnnulusGeometry& geo, const PolarCentre& c, const AxisIntegrand& f,
                       const PolarOptions& opts) {
  return polar_integral(geo, c, std::numeric_limits<double>::infinity(), f, opts);
}

double integrate_ball(const AnnulusGeometry& geo, const PolarCentre& c, double radius,
                      const AxisIntegrand& f, const PolarOptions& opts) {
  if (!(radius > 0.0)) throw ValidationError("ball radius must be positive");
  return polar_integral(geo, c, radius, f, opts);
}

double integrate_partitioned(const AnnulusGeometry& geo, std::span<const PolarCentre> centres,
                             const AxisIntegrand& f, const PolarOptions& opts) {
  if (centres.empty()) throw ValidationError("partitioned quadrature needs at least one centre");
  if (centres.size() == 1) return integrate_about(geo, centres[0], f, opts);
  const int n = geo.n;
  double total = 0.0;
  for (std::size_t k = 0; k < centres.size(); ++k) {
    auto weighted = [&, k](double xp, double xn) {
      // Weights relative to centre k avoid overflow of (delta^2 + d^2)^{-n}.
      const auto w = [&](std::size_t l) {
        const double dz = xn - centres[l].z;
        return centres[l].delta * centres[l].delta + xp * xp + dz * dz;
      };
      const double wk = w(k);
      double denom = 1.0;
      for (std::size_t l = 0; l < centres.size(); ++l)
        if (l != k) denom += std::pow(wk / w(l), n);
      return f(xp, xn) / denom;
    };
    total += integrate_about(geo, centres[k], weighted, opts);
  }
  return total;
}

}  // namespace lanemden
