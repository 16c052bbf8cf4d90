#pragma once

#include <functional>
#include <span>

#include "lanemden/grid.hpp"

namespace lanemden {

// A concentration point z e_n with bubble scale delta; delta sets the
// innermost radial breakpoints of the polar quadrature.
struct PolarCentre {
  double z = 1.0;
  double delta = 1.0;
};

struct PolarOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  int max_subintervals = 2000;
};

// Axisymmetric integrand F(x) written in terms of the lateral distance
// xp = |(x_1, ..., x_{n-1})| and the axial coordinate xn.
using AxisIntegrand = std::function<double(double xp, double xn)>;

// int_Omega F dx in polar coordinates about the centre.  Radial breakpoints
// at delta 2^k resolve the bubble scale; the tangency angle of the inner
// sphere is an angular breakpoint.
double integrate_about(const AnnulusGeometry& geo, const PolarCentre& c, const AxisIntegrand& f,
                       const PolarOptions& opts = {});

// int over B(z e_n, radius) intersected with Omega.
double integrate_ball(const AnnulusGeometry& geo, const PolarCentre& c, double radius,
                      const AxisIntegrand& f, const PolarOptions& opts = {});

// int_Omega F dx split by the partition of unity
// chi_k ~ (delta_k^2 + |x - c_k|^2)^{-n}, each piece integrated about its centre.
double integrate_partitioned(const AnnulusGeometry& geo, std::span<const PolarCentre> centres,
                             const AxisIntegrand& f, const PolarOptions& opts = {});

}  // namespace lanemden
