#pragma once

#include <functional>
#include <span>

namespace lanemden {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_subintervals = 2000;
  bool throw_on_failure = true;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

// Globally adaptive 15-point Gauss-Kronrod quadrature.  Breakpoints split the
// initial partition; the worst subinterval is bisected until the summed error
// estimate meets max(abs_tol, rel_tol * |value|).  On failure a
// QuadratureError carrying the achieved error is thrown unless
// throw_on_failure is false.
QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureOptions& opts = {});
QuadratureResult integrate(const Integrand& f, std::span<const double> breakpoints,
                           const QuadratureOptions& opts = {});
// Integral over [a, inf) through x = a + s/(1-s).
QuadratureResult integrate_to_infinity(const Integrand& f, double a,
                                       const QuadratureOptions& opts = {});

// Fixed 15-point Kronrod rule on [a, b]; cheap inner rule for nested integrals.
double kronrod15(const Integrand& f, double a, double b);

}  // namespace lanemden
