#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace lanemden {

struct AnnulusGeometry {
  int n = 3;
  double r_inner = 1.0;
  double r_outer = 3.0;

  void validate() const;
  double width() const { return r_outer - r_inner; }
};

// Radial clustering around `center` with node spacing `spacing` there.
struct RadialFocus {
  double center = 1.0;
  double spacing = 1e-3;
};

struct GridSpec {
  int nr = 257;
  int nphi = 129;
  std::vector<RadialFocus> radial_foci;  // empty: uniform in r
  double pole_spacing = 0.0;             // <= 0: uniform in phi

  void validate() const;
};

// Tensor grid on the meridian half plane {(r, phi): r_inner <= r <= r_outer,
// 0 <= phi <= pi}.  The phi nodes are mirror images of each other about pi/2
// bit for bit, so even/odd symmetry under phi -> pi - phi is a grid identity.
//
// The grid also carries the finite-volume metric of the axisymmetric
// Laplacian in R^n: volume element |S^{n-2}| r^{n-1} sin^{n-2}(phi).
class MeridianGrid {
 public:
  static std::shared_ptr<const MeridianGrid> make(const AnnulusGeometry& geometry,
                                                  const GridSpec& spec);
  static std::shared_ptr<const MeridianGrid> uniform(const AnnulusGeometry& geometry, int nr,
                                                     int nphi);
  static std::shared_ptr<const MeridianGrid> from_nodes(const AnnulusGeometry& geometry,
                                                        std::vector<double> r,
                                                        std::vector<double> phi);

  const AnnulusGeometry& geometry() const { return geometry_; }
  int n() const { return geometry_.n; }
  int nr() const { return static_cast<int>(r_.size()); }
  int nphi() const { return static_cast<int>(phi_.size()); }
  std::size_t size() const { return r_.size() * phi_.size(); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * phi_.size() + static_cast<std::size_t>(j);
  }
  int mirror(int j) const { return nphi() - 1 - j; }

  std::span<const double> r() const { return r_; }
  std::span<const double> phi() const { return phi_; }
  double r(int i) const { return r_[i]; }
  double phi(int j) const { return phi_[j]; }

  double max_dr() const;
  double max_dphi() const;
  double min_dr() const;
  // Largest local mesh width (radial or arc length) of the cells touching the
  // axis point at radius r.
  double local_axis_spacing(double r) const;
  // Index of the interval [r_i, r_{i+1}] containing r (clamped).
  int radial_interval(double r) const;
  int angular_interval(double phi) const;

  // Finite-volume metric.
  double mass(int i, int j) const { return vol_r_[i] * vol_phi_[j] * sphere_factor_; }
  double radial_conductance(int i, int j) const;   // between (i,j) and (i+1,j)
  double angular_conductance(int i, int j) const;  // between (i,j) and (i,j+1)

  // Unique identity used to key cached factorizations.
  std::uint64_t id() const { return id_; }

 private:
  MeridianGrid(const AnnulusGeometry& g, std::vector<double> r, std::vector<double> phi);
  void build_metric();

  AnnulusGeometry geometry_;
  std::vector<double> r_, phi_;
  std::vector<double> vol_r_, arc_r_, vol_phi_, face_phi_;
  double sphere_factor_ = 0.0;
  std::uint64_t id_ = 0;
};

using GridPtr = std::shared_ptr<const MeridianGrid>;

// Node placement on [a, b] from a spacing function g: nodes follow
// dx/dsigma = g(x) scaled so that exactly `intervals` unit steps span [a, b].
std::vector<double> graded_nodes(double a, double b, int intervals,
                                 const std::vector<RadialFocus>& foci);

}  // namespace lanemden
