#pragma once

#include <functional>
#include <vector>

#include "lanemden/field.hpp"

namespace lanemden {

// Values on the two Dirichlet rows, indexed by the phi node.
struct BoundaryData {
  std::vector<double> inner, outer;

  static BoundaryData zero(const MeridianGrid& grid);
  static BoundaryData from_function(const MeridianGrid& grid,
                                    const std::function<double(double r, double phi)>& g);
};

// Solves -Delta_h v = source on interior nodes with v = dirichlet on the r
// boundaries.  The result carries the source's symmetry tag when the boundary
// data shares it; the symmetric part is then exact.
MeridianField poisson_solve(const GridPtr& grid, const MeridianField& source,
                            const BoundaryData& dirichlet);

// Discrete harmonic extension of boundary data.
MeridianField harmonic_extension(const GridPtr& grid, const BoundaryData& dirichlet,
                                 Symmetry symmetry = Symmetry::none);

}  // namespace lanemden
