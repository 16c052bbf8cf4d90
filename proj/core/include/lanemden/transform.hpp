#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lanemden/field.hpp"
#include "lanemden/solver.hpp"
#include "lanemden/spline.hpp"

namespace lanemden {

// A biradial function on A in R^{2m} is a function of (s, t) = (|y1|, |y2|),
// y1, y2 in R^m.  The square map z -> z^2 / 2 of the quarter plane onto the
// meridian half plane carries it to an axisymmetric function on D in R^{m+1}:
//   rho = (s^2 + t^2) / 2,  cos phi = (s^2 - t^2) / (s^2 + t^2).
struct MeridianPoint {
  double rho = 0.0;
  double phi = 0.0;
};

struct BiradialPoint {
  double s = 0.0;
  double t = 0.0;
};

MeridianPoint meridian_map(double s, double t);
BiradialPoint meridian_inverse(double rho, double phi);

// Radii of A for a lower annulus D = {r_inner < |x| < r_outer} in R^{m+1}.
struct LiftGeometry {
  int m = 2;
  double a = 0.0;
  double b = 0.0;
};

LiftGeometry lift_geometry(const AnnulusGeometry& lower);

// v(s, t) = u(meridian_map(s, t)) through the cubic spline of u.
class Lift {
 public:
  explicit Lift(const MeridianField& u);

  const LiftGeometry& geometry() const { return geo_; }
  int m() const { return geo_.m; }
  double operator()(double s, double t) const;
  const MeridianSpline& spline() const { return spline_; }

 private:
  LiftGeometry geo_;
  MeridianSpline spline_;
};

// v sampled on a tensor (s, t) patch; NaN outside A.
struct LiftedField {
  LiftGeometry geometry;
  std::vector<double> s, t;
  std::vector<double> value;  // s-major: value[i * t.size() + j]

  double at(std::size_t i, std::size_t j) const { return value[i * t.size() + j]; }
};

LiftedField lift(const MeridianField& u, const std::vector<double>& s_nodes, const std::vector<double>& t_nodes);

// {0}, `uniform` equispaced nodes on [0, b] and the images sqrt(2 r_i) of the
// radial grid nodes, sorted.
std::vector<double> default_lift_nodes(const MeridianGrid& grid, int uniform = 129);

struct LiftMaximum {
  double s = 0.0, t = 0.0;
  double value = 0.0;  // signed value at the maximum of |v|
};

LiftMaximum lift_maximum(const LiftedField& v);

// Residuals of the lifted field against -Delta v = |v|^{p-1-eps} v in R^{2m}
// (finite differences of v in (s, t)) and of u against the weighted equation
// in R^{m+1} (spline derivatives), sampled at the images of the cell centres.
// The two must agree after weighting the lower residual by 2 |x|.
struct LiftedResidual {
  int samples = 0;
  double max_upper = 0.0;           // max |upper residual|
  double max_lower_weighted = 0.0;  // max |2 rho * lower residual|
  double max_discrepancy = 0.0;     // max |upper - 2 rho * lower|
  double scale = 0.0;               // max |v|^{p-eps}
  double relative = 0.0;            // max_discrepancy / scale
};

LiftedResidual lifted_residual_check(const MeridianField& u, double eps);

// Operator identity Delta_{2m}(u o T) = 2 rho (Delta_{m+1} u) o T checked by
// central differences at step h on both sides, for a ladder of h.
using AxisymmetricFunction = std::function<double(double rho, double phi)>;

struct CorrespondenceCase {
  std::string name;
  std::vector<double> h;
  std::vector<double> discrepancy;  // max over samples, relative to the field scale
  double order = 0.0;               // least-squares slope of log discrepancy vs log h
  bool exact = false;               // discrepancy at rounding level for every h
  bool pass = false;
};

struct CorrespondenceOptions {
  double h0 = 0.02;
  int levels = 4;  // h0, h0/2, ...
  int radial_samples = 9;
  int angular_samples = 9;
  int random_fields = 10;
  std::uint64_t seed = 1;
  double min_order = 1.8;
  double exact_floor = 1e-10;
  bool include_bubble = true;
};

struct CorrespondenceReport {
  int m = 2;
  AnnulusGeometry lower{};
  LiftGeometry upper{};
  std::vector<CorrespondenceCase> cases;
  double max_discrepancy = 0.0;  // over all cases at their finest h
  bool all_pass = false;
};

CorrespondenceCase check_correspondence(const std::string& name, const AxisymmetricFunction& u,
                                        const AnnulusGeometry& lower, const CorrespondenceOptions& opts,
                                        double h0);

// Polynomial fields x_{m+1}, |x|^2 and a constant; `random_fields` bandlimited
// fields; optionally a bubble centred inside D.
CorrespondenceReport verify_correspondence(int m, const AnnulusGeometry& lower, const CorrespondenceOptions& opts = {});

// Concentration spheres of the lift of an axisymmetric solution.  A peak at
// (rho*, 0) becomes {|y1| = sqrt(2 rho*), y2 = 0}, factor 1; a peak at
// (rho*, pi) becomes {y1 = 0, |y2| = sqrt(2 rho*)}, factor 2.
struct ConcentrationSphere {
  int factor = 1;
  double radius = 0.0;
  double rho = 0.0;
  int sign = 1;
  double amplitude = 0.0;
};

struct SphereConcentration {
  LiftGeometry geometry;
  std::vector<ConcentrationSphere> spheres;  // in blow-up fit order
};

SphereConcentration sphere_extract(const SolveResult& result, int m);

}  // namespace lanemden
