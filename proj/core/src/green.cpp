#include "lanemden/green.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lanemden/error.hpp"

namespace lanemden {

namespace {

// |x - z e_n|^2 for x = r (sin phi, ..., cos phi), written without cancellation.
double axis_dist2(double r, double phi, double z) {
  if (z >= 0.0) {
    const double s = std::sin(0.5 * phi);
    return (r - z) * (r - z) + 4.0 * r * z * s * s;
  }
  const double c = std::cos(0.5 * phi);
  return (r + z) * (r + z) - 4.0 * r * z * c * c;
}

double axis_of(const Bubble& b) {
  double z = 0.0;
  if (!b.axis_position(z)) throw ValidationError("bubble centre must lie on the x_n axis");
  return z;
}

double kernel_at(const Bubble& b, double z, KernelIndex j, double r, double phi) {
  const double d2 = axis_dist2(r, phi, z);
  if (j.value() == 0) return kernel0_profile(b.n, b.delta, d2);
  if (j.value() != b.n)
    throw ValidationError("only the scale (j=0) and axial (j=n) kernels are axisymmetric");
  return kernel_axial_factor(b.n, b.delta, d2) * (r * std::cos(phi) - z);
}

}  // namespace

double green_constant(int n) { return 1.0 / ((n - 2) * sphere_area(n - 1)); }

MeridianField regular_part(const GridPtr& grid, double y_axis) {
  const AnnulusGeometry& geo = grid->geometry();
  const double ry = std::abs(y_axis);
  const double dist = std::min(ry - geo.r_inner, geo.r_outer - ry);
  const double h = grid->local_axis_spacing(ry);
  if (!(dist >= 2.0 * h)) {
    std::ostringstream os;
    os << "regular_part: pole at |y|=" << ry << " is " << dist
       << " from the boundary, less than two local mesh widths (" << 2.0 * h
       << "); refine the radial grid near the pole or move it inward";
    throw ValidationError(os.str());
  }
  const int n = geo.n;
  auto g = [&](double r, double phi) { return std::pow(axis_dist2(r, phi, y_axis), 0.5 * (2 - n)); };
  return harmonic_extension(grid, BoundaryData::from_function(*grid, g));
}

BoundaryData bubble_boundary(const MeridianGrid& grid, const Bubble& b) {
  const double z = axis_of(b);
  return BoundaryData::from_function(
      grid, [&](double r, double phi) { return bubble_profile(b.n, b.delta, axis_dist2(r, phi, z)); });
}

BoundaryData kernel_boundary(const MeridianGrid& grid, const Bubble& b, KernelIndex j) {
  const double z = axis_of(b);
  return BoundaryData::from_function(grid,
                                     [&](double r, double phi) { return kernel_at(b, z, j, r, phi); });
}

MeridianField sample_bubble(const GridPtr& grid, const Bubble& b) {
  if (b.n != grid->n()) throw ValidationError("bubble dimension differs from grid dimension");
  const double z = axis_of(b);
  return MeridianField::sample(
      grid, [&](double r, double phi) { return bubble_profile(b.n, b.delta, axis_dist2(r, phi, z)); });
}

MeridianField sample_kernel(const GridPtr& grid, const Bubble& b, KernelIndex j) {
  if (b.n != grid->n()) throw ValidationError("bubble dimension differs from grid dimension");
  const double z = axis_of(b);
  return MeridianField::sample(grid, [&](double r, double phi) { return kernel_at(b, z, j, r, phi); });
}

MeridianField project_bubble(const GridPtr& grid, const Bubble& b) {
  MeridianField u = sample_bubble(grid, b);
  u -= harmonic_extension(grid, bubble_boundary(*grid, b));
  u.zero_dirichlet_rows();
  return u;
}

MeridianField project_kernel(const GridPtr& grid, const Bubble& b, KernelIndex j) {
  MeridianField u = sample_kernel(grid, b, j);
  u -= harmonic_extension(grid, kernel_boundary(*grid, b, j));
  u.zero_dirichlet_rows();
  return u;
}

Point reflection_point(const AnnulusGeometry& geometry, const Point& x) {
  geometry.validate();
  if (x.size() != geometry.n) throw ValidationError("point dimension does not match geometry");
  const double rho = x.norm();
  const double a = geometry.r_inner, b = geometry.r_outer;
  if (rho < a || rho > b) throw ValidationError("reflection_point: x lies outside the closed annulus");
  const double din = rho - a, dout = b - rho;
  if (std::abs(din - dout) <= 1e-14 * b) {
    std::ostringstream os;
    os << "reflection_point: |x|=" << rho << " is equidistant from both spheres (radii " << a
       << " and " << b << "); the nearest sphere is ambiguous";
    throw ValidationError(os.str());
  }
  const double target = din < dout ? 2.0 * a - rho : 2.0 * b - rho;
  return x * (target / rho);
}

ProjectionExpansionCheck projection_expansion_check(const AnnulusGeometry& geo, double z,
                                                    const std::vector<double>& deltas, int nr, int nphi) {
  geo.validate();
  if (deltas.size() < 2) throw ValidationError("need at least two delta values");
  if (!(z > geo.r_inner && z < geo.r_outer)) throw ValidationError("bubble centre outside the annulus");
  const GridPtr grid = MeridianGrid::uniform(geo, nr, nphi);
  const MeridianGrid& g = *grid;
  const int n = geo.n;
  const MeridianField h = regular_part(grid, z);
  const double lo = geo.r_inner + 0.25 * geo.width(), hi = geo.r_outer - 0.25 * geo.width();

  ProjectionExpansionCheck out;
  out.expected = 0.5 * (n + 2);
  std::vector<double> lx, ly;
  for (double delta : deltas) {
    if (!(delta > 0.0)) throw ValidationError("delta must be positive");
    const Bubble b = Bubble::on_axis(n, delta, z);
    const MeridianField pu = project_bubble(grid, b);
    const MeridianField u = sample_bubble(grid, b);
    const double c = bubble_alpha(n) * std::pow(delta, 0.5 * (n - 2));
    double worst = 0.0;
    for (int i = 0; i < g.nr(); ++i) {
      if (g.r(i) < lo || g.r(i) > hi) continue;
      for (int j = 0; j < g.nphi(); ++j) worst = std::max(worst, std::abs(pu(i, j) - u(i, j) + c * h(i, j)));
    }
    out.delta.push_back(delta);
    out.remainder.push_back(worst);
    lx.push_back(std::log(delta));
    ly.push_back(std::log(worst));
  }
  const double m = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sx += lx[k];
    sy += ly[k];
    sxx += lx[k] * lx[k];
    sxy += lx[k] * ly[k];
  }
  out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  out.relative_error = std::abs(out.slope - out.expected) / out.expected;
  return out;
}

}  // namespace lanemden
