#pragma once

#include <Eigen/Core>
#include <array>
#include <string>
#include <vector>

#include "lanemden/error.hpp"
#include "lanemden/gamma_constants.hpp"

namespace lanemden {

enum class Provenance { unit, fitted, assembled, supplied };
std::string to_string(Provenance p);

// Coefficients of
//   J(d, t) = c1 + c2 eps + c3 eps log eps + eps (1 + |lambda|) Phi(d, t) + o(eps)
// with Phi built from c4, c5, c6.
struct EnergyExpansion {
  int n = 3;
  std::array<double, 6> c{};  // c[0] = c1, ..., c[5] = c6
  GammaConstants gammas;
  int lambda_abs = 0;
  Provenance provenance = Provenance::unit;

  double c4() const { return c[3]; }
  double c5() const { return c[4]; }
  double c6() const { return c[5]; }

  // c4 = c5 = c6 = 1 and c1 = c2 = c3 = 0.
  static EnergyExpansion unit(int n);
  bool phi_coefficients_positive() const { return c[3] > 0 && c[4] > 0 && c[5] > 0; }
};

// Phi(d, t) = c4 (d/2t)^{n-2} + c5 t - c6 ln d
double phi_single(double d, double t, const EnergyExpansion& e);
// Phi(d1, d2, t1, t2) = c4 [(d1/2t1)^{n-2} + (d2/2t2)^{n-2}
//     + 2 (d1 d2)^{(n-2)/2} (|t1-t2|^{2-n} - |t1+t2|^{2-n})]
//   + c5 (t1 + t2) - c6 (ln d1 + ln d2)
double phi_double(double d1, double d2, double t1, double t2, const EnergyExpansion& e);

enum class PhiCase { single, pair };
std::string to_string(PhiCase c);
PhiCase phi_case_from_string(const std::string& s);

// Parameters are (d, t) for single and (d1, d2, t1, t2) for pair.
double phi_value(PhiCase c, const Eigen::VectorXd& x, const EnergyExpansion& e);
Eigen::VectorXd phi_gradient(PhiCase c, const Eigen::VectorXd& x, const EnergyExpansion& e);
Eigen::MatrixXd phi_hessian(PhiCase c, const Eigen::VectorXd& x, const EnergyExpansion& e);

struct SearchBox {
  double d_min = 1e-3, d_max = 1e3;
  double t_min = 1e-3, t_max = 1e3;
  int points_per_dim = 0;  // 0: 81 for single, 21 for pair

  void validate() const;
  int resolved_points(PhiCase c) const;
};

struct CriticalPoint {
  PhiCase kase = PhiCase::single;
  std::vector<double> d, t;
  double value = 0.0;
  std::vector<double> hessian_spectrum;  // ascending
  double scaled_gradient = 0.0;          // max_i |x_i dPhi/dx_i| / max(c4, c5, c6)
  int newton_iterations = 0;

  Eigen::VectorXd params() const;
};

struct GridSearchResult {
  Eigen::VectorXd params;
  double value = 0.0;
  double log_step = 0.0;  // spacing of the log-uniform scan grid
  bool on_boundary = false;
};

// Log-uniform scan; ties go to the lexicographically smallest tuple.
GridSearchResult grid_search_phi(PhiCase c, const EnergyExpansion& e, const SearchBox& box);

class NoInteriorMinimum : public NumericalError {
 public:
  NoInteriorMinimum(const std::string& what, double best_value, std::vector<double> best)
      : NumericalError(what), best_value_(best_value), best_(std::move(best)) {}
  double best_value() const { return best_value_; }
  const std::vector<double>& best_params() const { return best_; }

 private:
  double best_value_;
  std::vector<double> best_;
};

// Coarse scan followed by damped Newton in log coordinates.  Returns an
// interior minimum with positive definite Hessian or throws NoInteriorMinimum.
CriticalPoint minimize_phi(PhiCase c, const EnergyExpansion& e, const SearchBox& box = {});

}  // namespace lanemden
