#pragma once

#include <Eigen/Sparse>
#include <memory>
#include <mutex>

#include "lanemden/field.hpp"

namespace lanemden {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Vertex-centred finite-volume discretisation of -Delta for axisymmetric
// functions: (K u)_k / M_k approximates -Delta u at node k.  K is symmetric
// positive semidefinite and u^T K u approximates the Dirichlet integral over
// the annulus.  Faces on the axis have zero area, which encodes u_phi = 0
// there without ghost nodes.
class AxisymmetricLaplacian {
 public:
  explicit AxisymmetricLaplacian(GridPtr grid);

  // Shared instance per grid; thread safe, bounded cache.
  static std::shared_ptr<const AxisymmetricLaplacian> for_grid(const GridPtr& grid);

  const GridPtr& grid() const { return grid_; }
  const SparseMatrix& stiffness() const { return k_; }
  const SparseMatrix& interior_stiffness() const { return kii_; }
  const Eigen::VectorXd& mass() const { return m_; }

  int interior_size() const { return static_cast<int>(kii_.rows()); }
  // Index of grid node (i, j), 1 <= i <= nr-2, among interior unknowns.
  int interior_index(int i, int j) const { return (i - 1) * grid_->nphi() + j; }

  // -Delta_h u on interior rows, zero on the Dirichlet rows.
  MeridianField apply(const MeridianField& u) const;
  // u^T K v
  double form(const MeridianField& u, const MeridianField& v) const;

  // Solves K_II x = rhs with a cached sparse Cholesky factorisation.
  Eigen::VectorXd solve_interior(const Eigen::VectorXd& rhs) const;

  Eigen::VectorXd interior_values(const MeridianField& u) const;
  void scatter_interior(const Eigen::VectorXd& x, MeridianField& u) const;

 private:
  struct Factor;
  GridPtr grid_;
  SparseMatrix k_, kii_;
  Eigen::VectorXd m_;
  mutable std::once_flag factor_once_;
  mutable std::shared_ptr<Factor> factor_;
};

}  // namespace lanemden
