#include "lanemden/poisson.hpp"

#include <cmath>

#include "lanemden/error.hpp"
#include "lanemden/laplacian.hpp"

namespace lanemden {

BoundaryData BoundaryData::zero(const MeridianGrid& grid) {
  BoundaryData b;
  b.inner.assign(grid.nphi(), 0.0);
  b.outer.assign(grid.nphi(), 0.0);
  return b;
}

BoundaryData BoundaryData::from_function(const MeridianGrid& grid,
                                         const std::function<double(double, double)>& g) {
  BoundaryData b = zero(grid);
  for (int j = 0; j < grid.nphi(); ++j) {
    b.inner[j] = g(grid.r(0), grid.phi(j));
    b.outer[j] = g(grid.r(grid.nr() - 1), grid.phi(j));
  }
  return b;
}

namespace {

bool boundary_has(const BoundaryData& b, Symmetry s) {
  if (s == Symmetry::none) return false;
  const double sg = s == Symmetry::even ? 1.0 : -1.0;
  const std::size_t np = b.inner.size();
  for (std::size_t j = 0; j < np; ++j) {
    const std::size_t m = np - 1 - j;
    if (b.inner[j] != sg * b.inner[m] || b.outer[j] != sg * b.outer[m]) return false;
  }
  return true;
}

}  // namespace

MeridianField poisson_solve(const GridPtr& grid, const MeridianField& source,
                            const BoundaryData& dirichlet) {
  if (source.grid_ptr() != grid) throw ValidationError("source lives on a different grid");
  const int nr = grid->nr(), np = grid->nphi();
  if (static_cast<int>(dirichlet.inner.size()) != np || static_cast<int>(dirichlet.outer.size()) != np)
    throw ValidationError("boundary data size does not match the phi nodes");
  for (double v : source.values())
    if (!std::isfinite(v)) throw ValidationError("Poisson source must be finite");

  auto op = AxisymmetricLaplacian::for_grid(grid);
  MeridianField bnd(grid, Symmetry::none);
  for (int j = 0; j < np; ++j) {
    bnd.at(0, j) = dirichlet.inner[j];
    bnd.at(nr - 1, j) = dirichlet.outer[j];
  }
  Eigen::Map<const Eigen::VectorXd> g(bnd.values().data(), static_cast<Eigen::Index>(grid->size()));
  const Eigen::VectorXd kg = op->stiffness() * g;

  Eigen::VectorXd rhs(op->interior_size());
  for (int i = 1; i + 1 < nr; ++i)
    for (int j = 0; j < np; ++j) {
      const auto k = static_cast<Eigen::Index>(grid->index(i, j));
      rhs(op->interior_index(i, j)) = op->mass()(k) * source(i, j) - kg(k);
    }
  MeridianField out = bnd;
  op->scatter_interior(op->solve_interior(rhs), out);

  if (boundary_has(dirichlet, source.symmetry())) out.project(source.symmetry());
  return out;
}

MeridianField harmonic_extension(const GridPtr& grid, const BoundaryData& dirichlet,
                                 Symmetry symmetry) {
  MeridianField zero(grid, symmetry);
  MeridianField h = poisson_solve(grid, zero, dirichlet);
  if (symmetry != Symmetry::none) h.project(symmetry);
  return h;
}

}  // namespace lanemden
