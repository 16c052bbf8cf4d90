#include "lanemden/grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>

#include "lanemden/bubble.hpp"
#include "lanemden/error.hpp"
#include "lanemden/quadrature.hpp"

namespace lanemden {

namespace {

std::atomic<std::uint64_t> next_grid_id{1};

constexpr double kPi = std::numbers::pi;

// 8-point Gauss-Legendre on [-1, 1].
constexpr double kGL8x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                             0.9602898564975363};
constexpr double kGL8w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                             0.1012285362903763};

double integrate_sin_power(double a, double b, int k) {
  if (k == 0) return b - a;
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int q = 0; q < 4; ++q) {
    s += kGL8w[q] * (std::pow(std::sin(c - h * kGL8x[q]), k) + std::pow(std::sin(c + h * kGL8x[q]), k));
  }
  return s * h;
}

// (b^k - a^k)/k without cancellation for nearby a, b.
double power_difference(double a, double b, int k) {
  if (k == 0) return std::log(b / a);
  // b^k - a^k = (b - a) * sum_{m<k} b^m a^{k-1-m}
  double s = 0.0;
  for (int m = 0; m < k; ++m) s += std::pow(b, m) * std::pow(a, k - 1 - m);
  return (b - a) * s / k;
}

double spacing_function(double x, double eta, const std::vector<RadialFocus>& foci) {
  double acc = 0.0;
  for (const auto& f : foci) {
    const double d = x - f.center;
    const double g2 = f.spacing * f.spacing + eta * eta * d * d;
    acc += 1.0 / (g2 * g2);
  }
  return std::pow(acc, -0.25);
}

double node_count_integral(double a, double b, double eta, const std::vector<RadialFocus>& foci) {
  std::vector<double> breaks{a};
  for (const auto& f : foci)
    if (f.center > a && f.center < b) breaks.push_back(f.center);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  QuadratureOptions opts;
  opts.rel_tol = 1e-10;
  opts.max_subintervals = 4000;
  return integrate(
             [&](double x) { return 1.0 / spacing_function(x, eta, foci); }, breaks, opts)
      .value;
}

void check_nodes(const std::vector<double>& v, double lo, double hi, const char* what) {
  if (v.size() < 8) throw ValidationError(std::string(what) + ": need at least 8 nodes");
  if (v.front() != lo || v.back() != hi)
    throw ValidationError(std::string(what) + ": nodes must span the full interval");
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] > v[k - 1])) throw ValidationError(std::string(what) + ": nodes must increase");
}

}  // namespace

void AnnulusGeometry::validate() const {
  if (n < 3) throw ValidationError("dimension n must be >= 3, got " + std::to_string(n));
  if (!(r_inner > 0.0) || !(r_outer > r_inner) || !std::isfinite(r_outer))
    throw ValidationError("annulus radii must satisfy 0 < r_inner < r_outer");
}

void GridSpec::validate() const {
  if (nr < 8 || nphi < 8) throw ValidationError("grid needs nr >= 8 and nphi >= 8");
  if (nr > 4097 || nphi > 4097) throw ValidationError("grid size exceeds 4097 nodes per direction");
  for (const auto& f : radial_foci)
    if (!(f.spacing > 0.0) || !std::isfinite(f.center))
      throw ValidationError("radial focus needs a positive spacing and finite centre");
}

std::vector<double> graded_nodes(double a, double b, int intervals,
                                 const std::vector<RadialFocus>& foci) {
  std::vector<double> x(static_cast<std::size_t>(intervals) + 1);
  auto uniform = [&] {
    for (int k = 0; k <= intervals; ++k) x[k] = a + (b - a) * k / intervals;
    x.back() = b;
    return x;
  };
  if (foci.empty()) return uniform();
  const double target = static_cast<double>(intervals);
  if (node_count_integral(a, b, 0.0, foci) <= target) return uniform();

  double lo = 0.0, hi = 1.0;
  while (node_count_integral(a, b, hi, foci) > target) {
    hi *= 2.0;
    if (hi > 1e6) throw ValidationError("grid focus spacing too small for the node budget");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (node_count_integral(a, b, mid, foci) > target ? lo : hi) = mid;
  }
  const double eta = hi;
  const double scale = node_count_integral(a, b, eta, foci) / target;

  // Integrate dx/dsigma = g(x) with RK4, then stretch so the last node is b.
  constexpr int sub = 32;
  const double hs = scale / sub;
  double xc = a;
  x[0] = a;
  for (int k = 1; k <= intervals; ++k) {
    for (int s = 0; s < sub; ++s) {
      const double k1 = spacing_function(xc, eta, foci);
      const double k2 = spacing_function(xc + 0.5 * hs * k1, eta, foci);
      const double k3 = spacing_function(xc + 0.5 * hs * k2, eta, foci);
      const double k4 = spacing_function(xc + hs * k3, eta, foci);
      xc += hs * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
    }
    x[k] = xc;
  }
  const double stretch = (b - a) / (x.back() - a);
  for (auto& v : x) v = a + (v - a) * stretch;
  x.front() = a;
  x.back() = b;
  return x;
}

MeridianGrid::MeridianGrid(const AnnulusGeometry& g, std::vector<double> r,
                           std::vector<double> phi)
    : geometry_(g), r_(std::move(r)), phi_(std::move(phi)), id_(next_grid_id.fetch_add(1)) {
  build_metric();
}

std::shared_ptr<const MeridianGrid> MeridianGrid::from_nodes(const AnnulusGeometry& geometry,
                                                             std::vector<double> r,
                                                             std::vector<double> phi) {
  geometry.validate();
  check_nodes(r, geometry.r_inner, geometry.r_outer, "radial nodes");
  check_nodes(phi, 0.0, kPi, "angular nodes");
  const std::size_t np = phi.size();
  for (std::size_t j = 0; j < np; ++j) {
    if (std::abs(phi[j] + phi[np - 1 - j] - kPi) > 1e-12)
      throw ValidationError("angular nodes must be symmetric about pi/2");
  }
  for (std::size_t j = 0; j < np / 2; ++j) phi[np - 1 - j] = kPi - phi[j];
  if (np % 2 == 1) phi[np / 2] = 0.5 * kPi;
  phi.front() = 0.0;
  phi.back() = kPi;
  return std::shared_ptr<const MeridianGrid>(
      new MeridianGrid(geometry, std::move(r), std::move(phi)));
}

std::shared_ptr<const MeridianGrid> MeridianGrid::make(const AnnulusGeometry& geometry,
                                                       const GridSpec& spec) {
  geometry.validate();
  spec.validate();
  auto r = graded_nodes(geometry.r_inner, geometry.r_outer, spec.nr - 1, spec.radial_foci);
  std::vector<RadialFocus> poles;
  if (spec.pole_spacing > 0.0) poles = {{0.0, spec.pole_spacing}, {kPi, spec.pole_spacing}};
  auto phi = graded_nodes(0.0, kPi, spec.nphi - 1, poles);
  const std::size_t np = phi.size();
  for (std::size_t j = 0; j < np / 2; ++j) {
    const double v = 0.5 * (phi[j] + (kPi - phi[np - 1 - j]));
    phi[j] = v;
    phi[np - 1 - j] = kPi - v;
  }
  if (np % 2 == 1) phi[np / 2] = 0.5 * kPi;
  phi.front() = 0.0;
  phi.back() = kPi;
  return from_nodes(geometry, std::move(r), std::move(phi));
}

std::shared_ptr<const MeridianGrid> MeridianGrid::uniform(const AnnulusGeometry& geometry, int nr,
                                                          int nphi) {
  GridSpec spec;
  spec.nr = nr;
  spec.nphi = nphi;
  return make(geometry, spec);
}

void MeridianGrid::build_metric() {
  const int n = geometry_.n;
  const int nr_ = nr(), np = nphi();
  sphere_factor_ = sphere_area(n - 2);

  vol_r_.assign(nr_, 0.0);
  arc_r_.assign(nr_, 0.0);
  for (int i = 0; i < nr_; ++i) {
    const double lo = i == 0 ? r_[0] : 0.5 * (r_[i - 1] + r_[i]);
    const double hi = i == nr_ - 1 ? r_[i] : 0.5 * (r_[i] + r_[i + 1]);
    vol_r_[i] = power_difference(lo, hi, n);
    arc_r_[i] = power_difference(lo, hi, n - 2);
  }

  // Angular weights are computed on the lower half and mirrored.
  vol_phi_.assign(np, 0.0);
  face_phi_.assign(np - 1, 0.0);
  for (int j = 0; j < np; ++j) {
    const int jm = std::min(j, np - 1 - j);
    const double lo = jm == 0 ? 0.0 : 0.5 * (phi_[jm - 1] + phi_[jm]);
    const double hi = 0.5 * (phi_[jm] + phi_[jm + 1]);
    double w;
    if (np % 2 == 1 && jm == np / 2) {
      w = 2.0 * integrate_sin_power(lo, 0.5 * kPi, n - 2);
    } else {
      w = integrate_sin_power(lo, hi, n - 2);
    }
    vol_phi_[j] = w;
  }
  if (np % 2 == 0) {
    // Middle cells are split at pi/2.
    const int j = np / 2 - 1;
    const double lo = j == 0 ? 0.0 : 0.5 * (phi_[j - 1] + phi_[j]);
    vol_phi_[j] = vol_phi_[j + 1] = integrate_sin_power(lo, 0.5 * kPi, n - 2);
  }
  for (int j = 0; j + 1 < np; ++j) {
    const int jm = std::min(j, np - 2 - j);
    const double mid = 0.5 * (phi_[jm] + phi_[jm + 1]);
    face_phi_[j] = std::pow(std::sin(mid), n - 2) / (phi_[jm + 1] - phi_[jm]);
  }
}

double MeridianGrid::radial_conductance(int i, int j) const {
  const double face = 0.5 * (r_[i] + r_[i + 1]);
  return sphere_factor_ * std::pow(face, geometry_.n - 1) * vol_phi_[j] / (r_[i + 1] - r_[i]);
}

double MeridianGrid::angular_conductance(int i, int j) const {
  return sphere_factor_ * arc_r_[i] * face_phi_[j];
}

double MeridianGrid::max_dr() const {
  double h = 0.0;
  for (std::size_t k = 1; k < r_.size(); ++k) h = std::max(h, r_[k] - r_[k - 1]);
  return h;
}

double MeridianGrid::min_dr() const {
  double h = r_.back() - r_.front();
  for (std::size_t k = 1; k < r_.size(); ++k) h = std::min(h, r_[k] - r_[k - 1]);
  return h;
}

double MeridianGrid::max_dphi() const {
  double h = 0.0;
  for (std::size_t k = 1; k < phi_.size(); ++k) h = std::max(h, phi_[k] - phi_[k - 1]);
  return h;
}

int MeridianGrid::radial_interval(double r) const {
  auto it = std::upper_bound(r_.begin(), r_.end(), r);
  int k = static_cast<int>(it - r_.begin()) - 1;
  return std::clamp(k, 0, nr() - 2);
}

int MeridianGrid::angular_interval(double p) const {
  auto it = std::upper_bound(phi_.begin(), phi_.end(), p);
  int k = static_cast<int>(it - phi_.begin()) - 1;
  return std::clamp(k, 0, nphi() - 2);
}

double MeridianGrid::local_axis_spacing(double r) const {
  const int k = radial_interval(r);
  double h = r_[k + 1] - r_[k];
  if (k > 0) h = std::max(h, r_[k] - r_[k - 1]);
  if (k + 2 < nr()) h = std::max(h, r_[k + 2] - r_[k + 1]);
  return std::max(h, r * phi_[1]);
}

}  // namespace lanemden
