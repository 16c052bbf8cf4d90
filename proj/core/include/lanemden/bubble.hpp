#pragma once

#include <Eigen/Core>

namespace lanemden {

using Point = Eigen::VectorXd;

double critical_exponent(int n);  // (n+2)/(n-2)
double bubble_alpha(int n);       // [n(n-2)]^{(n-2)/4}
double sphere_area(int k);        // surface measure of the unit k-sphere S^k

// U_{delta,xi}(x) = alpha_n delta^{(n-2)/2} / (delta^2 + |x-xi|^2)^{(n-2)/2}
struct Bubble {
  int n = 3;
  double delta = 1.0;
  Point xi;

  Bubble() = default;
  Bubble(int n, double delta, Point xi);

  // Centre on the x_n axis, xi = z e_n.
  static Bubble on_axis(int n, double delta, double z);

  // Returns true and sets z when xi = z e_n.
  bool axis_position(double& z) const;
};

// Index j of psi^j: j = 0 is d/d delta, j >= 1 is d/d xi_j.
class KernelIndex {
 public:
  KernelIndex(int j, int n);
  int value() const { return j_; }

 private:
  int j_;
};

double eval_bubble(const Bubble& b, const Point& x);
double eval_kernel(const Bubble& b, KernelIndex j, const Point& x);

// Radial profiles in terms of the squared distance to the centre; used by the
// axisymmetric code paths where building a Point per node would be wasteful.
double bubble_profile(int n, double delta, double dist2);
double kernel0_profile(int n, double delta, double dist2);
// psi^j divided by (x_j - xi_j)
double kernel_axial_factor(int n, double delta, double dist2);

// delta = eps^{(n-1)/(n-2)} d, xi = (1 + eps t) e_n
Bubble bubble_from_reduced(int n, double eps, double d, double t);
double reduced_delta(int n, double eps, double d);
double delta_to_d(int n, double eps, double delta);

}  // namespace lanemden
