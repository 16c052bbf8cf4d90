#include "lanemden/laplacian.hpp"

#include <Eigen/SparseCholesky>
#include <list>
#include <sstream>
#include <utility>
#include <vector>

#include "lanemden/error.hpp"

namespace lanemden {

struct AxisymmetricLaplacian::Factor {
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
};

AxisymmetricLaplacian::AxisymmetricLaplacian(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw ValidationError("Laplacian needs a grid");
  const MeridianGrid& g = *grid_;
  const int nr = g.nr(), np = g.nphi();
  const auto total = static_cast<Eigen::Index>(g.size());

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(total) * 5);
  auto edge = [&](std::size_t a, std::size_t b, double c) {
    const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
    trip.emplace_back(ia, ia, c);
    trip.emplace_back(ib, ib, c);
    trip.emplace_back(ia, ib, -c);
    trip.emplace_back(ib, ia, -c);
  };
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < np; ++j) {
      if (i + 1 < nr) edge(g.index(i, j), g.index(i + 1, j), g.radial_conductance(i, j));
      if (j + 1 < np) edge(g.index(i, j), g.index(i, j + 1), g.angular_conductance(i, j));
    }
  }
  k_.resize(total, total);
  k_.setFromTriplets(trip.begin(), trip.end());
  k_.makeCompressed();

  m_.resize(total);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < np; ++j) m_(static_cast<Eigen::Index>(g.index(i, j))) = g.mass(i, j);

  // Interior block: nodes with 1 <= i <= nr-2 are contiguous in row-major order.
  const Eigen::Index first = np, count = static_cast<Eigen::Index>(nr - 2) * np;
  kii_ = k_.block(first, first, count, count);
  kii_.makeCompressed();
}

std::shared_ptr<const AxisymmetricLaplacian> AxisymmetricLaplacian::for_grid(const GridPtr& grid) {
  static std::mutex mu;
  static std::list<std::pair<std::uint64_t, std::shared_ptr<const AxisymmetricLaplacian>>> cache;
  constexpr std::size_t capacity = 8;
  {
    std::lock_guard<std::mutex> lock(mu);
    for (auto it = cache.begin(); it != cache.end(); ++it) {
      if (it->first == grid->id()) {
        cache.splice(cache.begin(), cache, it);
        return cache.front().second;
      }
    }
  }
  auto op = std::make_shared<const AxisymmetricLaplacian>(grid);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace_front(grid->id(), op);
  if (cache.size() > capacity) cache.pop_back();
  return op;
}

MeridianField AxisymmetricLaplacian::apply(const MeridianField& u) const {
  if (u.grid_ptr() != grid_) throw ValidationError("field lives on a different grid");
  Eigen::Map<const Eigen::VectorXd> x(u.values().data(), static_cast<Eigen::Index>(u.values().size()));
  Eigen::VectorXd y = k_ * x;
  MeridianField out(grid_, Symmetry::none);
  const int np = grid_->nphi();
  for (int i = 1; i + 1 < grid_->nr(); ++i)
    for (int j = 0; j < np; ++j) {
      const auto k = static_cast<Eigen::Index>(grid_->index(i, j));
      out.at(i, j) = y(k) / m_(k);
    }
  out.project(u.symmetry());
  return out;
}

double AxisymmetricLaplacian::form(const MeridianField& u, const MeridianField& v) const {
  Eigen::Map<const Eigen::VectorXd> x(u.values().data(), static_cast<Eigen::Index>(u.values().size()));
  Eigen::Map<const Eigen::VectorXd> y(v.values().data(), static_cast<Eigen::Index>(v.values().size()));
  return x.dot(k_ * y);
}

Eigen::VectorXd AxisymmetricLaplacian::solve_interior(const Eigen::VectorXd& rhs) const {
  std::call_once(factor_once_, [this] {
    auto f = std::make_shared<Factor>();
    f->ldlt.compute(kii_);
    if (f->ldlt.info() != Eigen::Success) {
      std::ostringstream os;
      os << "sparse Cholesky factorisation failed on grid " << grid_->nr() << "x" << grid_->nphi()
         << " (min dr " << grid_->min_dr() << ", max dr " << grid_->max_dr() << ", max dphi "
         << grid_->max_dphi() << ")";
      throw LinearSolveError(os.str());
    }
    factor_ = std::move(f);
  });
  Eigen::VectorXd x = factor_->ldlt.solve(rhs);
  if (!x.allFinite()) throw LinearSolveError("Poisson solve produced non-finite values");
  return x;
}

Eigen::VectorXd AxisymmetricLaplacian::interior_values(const MeridianField& u) const {
  const int np = grid_->nphi();
  Eigen::VectorXd x(interior_size());
  for (int i = 1; i + 1 < grid_->nr(); ++i)
    for (int j = 0; j < np; ++j) x(interior_index(i, j)) = u(i, j);
  return x;
}

void AxisymmetricLaplacian::scatter_interior(const Eigen::VectorXd& x, MeridianField& u) const {
  const int np = grid_->nphi();
  for (int i = 1; i + 1 < grid_->nr(); ++i)
    for (int j = 0; j < np; ++j) u.at(i, j) = x(interior_index(i, j));
}

}  // namespace lanemden
