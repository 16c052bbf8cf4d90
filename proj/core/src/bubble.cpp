#include "lanemden/bubble.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lanemden/error.hpp"

namespace lanemden {

namespace {

void check_dimension(int n) {
  if (n < 3) throw ValidationError("dimension n must be >= 3, got " + std::to_string(n));
}

}  // namespace

double critical_exponent(int n) {
  check_dimension(n);
  return static_cast<double>(n + 2) / static_cast<double>(n - 2);
}

double bubble_alpha(int n) {
  check_dimension(n);
  return std::pow(static_cast<double>(n * (n - 2)), (n - 2) / 4.0);
}

double sphere_area(int k) {
  if (k < 0) throw ValidationError("sphere dimension must be >= 0");
  const double h = (k + 1) / 2.0;
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

Bubble::Bubble(int n_, double delta_, Point xi_) : n(n_), delta(delta_), xi(std::move(xi_)) {
  check_dimension(n);
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw ValidationError("bubble scale delta must be positive and finite");
  if (xi.size() != n)
    throw ValidationError("bubble centre has dimension " + std::to_string(xi.size()) +
                          ", expected " + std::to_string(n));
}

Bubble Bubble::on_axis(int n, double delta, double z) {
  check_dimension(n);
  Point xi = Point::Zero(n);
  xi(n - 1) = z;
  return Bubble(n, delta, std::move(xi));
}

bool Bubble::axis_position(double& z) const {
  for (int k = 0; k + 1 < n; ++k)
    if (xi(k) != 0.0) return false;
  z = xi(n - 1);
  return true;
}

KernelIndex::KernelIndex(int j, int n) : j_(j) {
  if (j < 0 || j > n)
    throw ValidationError("kernel index " + std::to_string(j) + " outside [0, " +
                          std::to_string(n) + "]");
}

double bubble_profile(int n, double delta, double dist2) {
  const double h = 0.5 * (n - 2);
  return bubble_alpha(n) * std::pow(delta, h) * std::pow(delta * delta + dist2, -h);
}

double kernel0_profile(int n, double delta, double dist2) {
  const double d2 = delta * delta;
  return bubble_alpha(n) * 0.5 * (n - 2) * std::pow(delta, 0.5 * (n - 4)) * (dist2 - d2) *
         std::pow(d2 + dist2, -0.5 * n);
}

double kernel_axial_factor(int n, double delta, double dist2) {
  return bubble_alpha(n) * (n - 2) * std::pow(delta, 0.5 * (n - 2)) *
         std::pow(delta * delta + dist2, -0.5 * n);
}

double eval_bubble(const Bubble& b, const Point& x) {
  if (x.size() != b.n) throw ValidationError("point dimension does not match bubble");
  return bubble_profile(b.n, b.delta, (x - b.xi).squaredNorm());
}

double eval_kernel(const Bubble& b, KernelIndex j, const Point& x) {
  if (x.size() != b.n) throw ValidationError("point dimension does not match bubble");
  const double r2 = (x - b.xi).squaredNorm();
  if (j.value() == 0) return kernel0_profile(b.n, b.delta, r2);
  const int k = j.value() - 1;
  return kernel_axial_factor(b.n, b.delta, r2) * (x(k) - b.xi(k));
}

double reduced_delta(int n, double eps, double d) {
  check_dimension(n);
  return std::pow(eps, static_cast<double>(n - 1) / (n - 2)) * d;
}

double delta_to_d(int n, double eps, double delta) {
  check_dimension(n);
  return delta * std::pow(eps, -static_cast<double>(n - 1) / (n - 2));
}

Bubble bubble_from_reduced(int n, double eps, double d, double t) {
  check_dimension(n);
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  if (!(d > 0.0)) throw ValidationError("d must be positive");
  if (!(t > 0.0)) throw ValidationError("t must be positive");
  return Bubble::on_axis(n, reduced_delta(n, eps, d), 1.0 + eps * t);
}

}  // namespace lanemden
