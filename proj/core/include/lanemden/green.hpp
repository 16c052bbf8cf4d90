#pragma once

#include <vector>

#include "lanemden/bubble.hpp"
#include "lanemden/field.hpp"
#include "lanemden/poisson.hpp"

namespace lanemden {

// gamma_n = 1 / ((n-2) |S^{n-1}|), so G = gamma_n (|x-y|^{2-n} - H).
double green_constant(int n);

// H(., y) for the axis point y = y_axis e_n: discrete harmonic with boundary
// values |x-y|^{2-n}.  Refuses points closer to the boundary than two local
// mesh widths.
MeridianField regular_part(const GridPtr& grid, double y_axis);

// Boundary values of the bubble and its kernel functions.
BoundaryData bubble_boundary(const MeridianGrid& grid, const Bubble& b);
BoundaryData kernel_boundary(const MeridianGrid& grid, const Bubble& b, KernelIndex j);

// U sampled at the grid nodes (b on the axis).
MeridianField sample_bubble(const GridPtr& grid, const Bubble& b);
MeridianField sample_kernel(const GridPtr& grid, const Bubble& b, KernelIndex j);

// PU = U - (harmonic extension of U on the boundary).
MeridianField project_bubble(const GridPtr& grid, const Bubble& b);
// P psi^j for j = 0 (scale) or j = n (axial translation).
MeridianField project_kernel(const GridPtr& grid, const Bubble& b, KernelIndex j);

// max |PU - U + alpha_n delta^{(n-2)/2} H(., xi)| over the middle half of
// the annulus for a bubble at xi = z e_n, on a uniform nr x nphi grid, for
// each delta; the slope of its logarithm against log delta is expected to be
// (n+2)/2.
struct ProjectionExpansionCheck {
  std::vector<double> delta;
  std::vector<double> remainder;
  double slope = 0.0;
  double expected = 0.0;
  double relative_error = 0.0;
};

ProjectionExpansionCheck projection_expansion_check(const AnnulusGeometry& geo, double z,
                                                    const std::vector<double>& deltas, int nr = 257,
                                                    int nphi = 129);

// Reflection across the nearest boundary sphere along the ray through x.
Point reflection_point(const AnnulusGeometry& geometry, const Point& x);

}  // namespace lanemden
