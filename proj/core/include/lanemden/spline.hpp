#pragma once

#include <vector>

#include "lanemden/field.hpp"

namespace lanemden {

struct SplineJet {
  double v = 0, r = 0, phi = 0, rr = 0, rphi = 0, phiphi = 0;
};

// Slopes of the C^2 cubic spline through (x_k, y_k).  Ends are not-a-knot
// unless a clamped end slope is supplied.
std::vector<double> spline_slopes(const std::vector<double>& x, const std::vector<double>& y,
                                  const double* left_slope = nullptr,
                                  const double* right_slope = nullptr);

// Tensor-product cubic spline of a meridian field: not-a-knot in r, zero
// slope at phi = 0 and phi = pi (axis regularity).  Stored as bicubic Hermite
// patches.  Queries outside the grid raise GuardBandError.
class MeridianSpline {
 public:
  explicit MeridianSpline(const MeridianField& u);

  double operator()(double r, double phi) const { return eval(r, phi, nullptr, nullptr); }
  double eval(double r, double phi, double* d_r, double* d_phi) const;
  // Value and derivatives up to second order; the second derivatives are
  // those of the bicubic patch containing the point.
  SplineJet jet(double r, double phi) const;

  const MeridianGrid& grid() const { return *grid_; }

 private:
  GridPtr grid_;
  std::vector<double> f_, fr_, fp_, frp_;
};

}  // namespace lanemden
