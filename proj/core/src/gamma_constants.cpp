#include "lanemden/gamma_constants.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "lanemden/bubble.hpp"
#include "lanemden/error.hpp"
#include "lanemden/quadrature.hpp"

namespace lanemden {

void GammaConstants::validate() const {
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0) || !(gamma3 < 0.0))
    throw ValidationError("gamma constants must satisfy gamma1 > 0, gamma2 > 0, gamma3 < 0");
}

namespace {

double scale_factor(int n) { return std::pow(bubble_alpha(n), critical_exponent(n) + 1.0); }

double radial_integral(int n, double rel_tol, double (*g)(int, double)) {
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  opts.max_subintervals = 5000;
  // Split at rho = 1 so both the core and the algebraic tail get their own
  // partition before the map to [0, 1).
  const auto f = [n, g](double rho) { return g(n, rho) * std::pow(rho, n - 1); };
  const double core = integrate(f, 0.0, 1.0, opts).value;
  const double tail = integrate_to_infinity(f, 1.0, opts).value;
  return sphere_area(n - 1) * (core + tail);
}

double g1(int n, double rho) { return std::pow(1.0 + rho * rho, -n); }
double g2(int n, double rho) { return std::pow(1.0 + rho * rho, -0.5 * (n + 2)); }
double g3(int n, double rho) {
  const double s = 1.0 + rho * rho;
  return std::pow(s, -n) * (-0.5 * (n - 2)) * std::log1p(rho * rho);
}

double power_moment(int n, double s) {
  return std::pow(std::numbers::pi, 0.5 * n) * std::tgamma(s - 0.5 * n) / std::tgamma(s);
}

}  // namespace

GammaConstants gamma_constants(int n, double rel_tol) {
  if (n < 3) throw ValidationError("gamma_constants needs n >= 3, got " + std::to_string(n));
  if (!(rel_tol > 0.0)) throw ValidationError("quadrature tolerance must be positive");
  const double a = scale_factor(n);
  // Aim a little below the requested tolerance so the sum of the two pieces meets it.
  const double tol = 0.25 * rel_tol;
  GammaConstants g;
  g.n = n;
  g.gamma1 = a * radial_integral(n, tol, g1);
  g.gamma2 = a * radial_integral(n, tol, g2);
  g.gamma3 = a * radial_integral(n, tol, g3);
  return g;
}

GammaConstants gamma_constants_closed_form(int n) {
  if (n < 3) throw ValidationError("gamma_constants needs n >= 3, got " + std::to_string(n));
  const double a = scale_factor(n);
  const double m1 = power_moment(n, n);
  GammaConstants g;
  g.n = n;
  g.gamma1 = a * m1;
  g.gamma2 = a * power_moment(n, 0.5 * (n + 2));
  g.gamma3 = -0.5 * (n - 2) * g.gamma1 *
             (boost::math::digamma(static_cast<double>(n)) - boost::math::digamma(0.5 * n));
  return g;
}

}  // namespace lanemden
