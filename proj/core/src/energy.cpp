#include "lanemden/energy.hpp"

#include <cmath>

#include "lanemden/bubble.hpp"
#include "lanemden/error.hpp"
#include "lanemden/laplacian.hpp"

namespace lanemden {

double nonlinearity(double s, double exponent) {
  if (s == 0.0) return 0.0;
  return std::pow(std::abs(s), exponent - 1.0) * s;
}

double nonlinearity_derivative(double s, double exponent) {
  if (s == 0.0) return 0.0;
  return exponent * std::pow(std::abs(s), exponent - 1.0);
}

EnergyParts energy_parts(const MeridianField& u, double eps) {
  if (u.empty()) throw ValidationError("energy of an empty field");
  if (!(eps >= 0.0)) throw ValidationError("eps must be >= 0");
  const double scale = std::max(1.0, u.max_abs());
  if (u.dirichlet_defect() > 1e-12 * scale)
    throw ValidationError("energy needs a field vanishing on the Dirichlet rows");
  const MeridianGrid& g = u.grid();
  const double q = critical_exponent(g.n()) + 1.0 - eps;
  auto op = AxisymmetricLaplacian::for_grid(u.grid_ptr());
  EnergyParts e;
  e.gradient = op->form(u, u);
  double pot = 0.0;
  for (int i = 1; i + 1 < g.nr(); ++i) {
    double row = 0.0;
    for (int j = 0; j < g.nphi(); ++j) {
      const double v = u(i, j);
      if (v != 0.0) row += g.mass(i, j) * std::pow(std::abs(v), q);
    }
    pot += row / (2.0 * g.r(i));
  }
  e.potential = pot;
  e.total = 0.5 * e.gradient - pot / q;
  return e;
}

double energy(const MeridianField& u, double eps) { return energy_parts(u, eps).total; }

}  // namespace lanemden
