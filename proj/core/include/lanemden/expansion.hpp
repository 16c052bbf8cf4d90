#pragma once

#include <array>
#include <vector>

#include "lanemden/ansatz.hpp"
#include "lanemden/bubble_integrals.hpp"
#include "lanemden/reduced_energy.hpp"
#include "lanemden/spline.hpp"

namespace lanemden {

// Coefficients obtained by combining the single-bubble expansions by hand,
// for the given amplitude convention.  Unit amplitude has c4 = 0 at this
// order because the boundary interaction cancels between the gradient and
// potential terms.
EnergyExpansion assembled_coefficients(int n, AmplitudeMode mode, int lambda_abs);

struct EnergyQuadratureOptions {
  PolarOptions polar{};
  int nr = 257;
  int nphi = 129;
  double core_fraction = 1.0 / 40.0;  // mesh width near the poles as a fraction of tau
};

// Quadrature machinery for one ansatz configuration: the bubbles in closed
// form, the harmonic corrections U_k - PU_k from grid solves on a mesh
// focused at the centres, interpolated with the tensor spline.
class AnsatzIntegrator {
 public:
  AnsatzIntegrator(const AnsatzConfig& cfg, const AnnulusGeometry& geo,
                   const EnergyQuadratureOptions& opts = {});

  const AnsatzConfig& config() const { return cfg_; }
  const AnnulusGeometry& geometry() const { return geo_; }
  const std::vector<AnsatzTerm>& terms() const { return terms_; }
  const GridPtr& grid() const { return grid_; }
  const PolarOptions& polar() const { return opts_.polar; }
  // min over centres of the boundary distance and half the same-side separation
  double tau() const { return tau_; }
  PolarCentre centre(std::size_t k) const { return {z_[k], delta_[k]}; }

  double bubble(std::size_t k, double xp, double xn) const;
  double correction(std::size_t k, double xp, double xn) const;
  double projected(std::size_t k, double xp, double xn) const {
    return bubble(k, xp, xn) - correction(k, xp, xn);
  }
  double value(double xp, double xn) const;  // V

  // int_Omega U_k^p PU_l  (= int grad PU_k . grad PU_l)
  double gradient_pair(std::size_t k, std::size_t l) const;
  // int_Omega |grad V|^2
  double dirichlet_integral() const;
  // int_Omega |V|^exponent / |x|
  double weighted_potential(double exponent) const;

 private:
  AnsatzConfig cfg_;
  AnnulusGeometry geo_;
  EnergyQuadratureOptions opts_;
  std::vector<AnsatzTerm> terms_;
  std::vector<double> z_, delta_;
  double tau_ = 0.0;
  GridPtr grid_;
  std::vector<MeridianSpline> corr_;
};

struct AnsatzEnergy {
  double gradient = 0.0;   // int |grad V|^2
  double potential = 0.0;  // int |V|^{p+1-eps} / (2|x|)
  double total = 0.0;      // J_eps(V)
};

// J_eps(V) by polar quadrature about the bubble centres.  The harmonic
// corrections PU - U come from grid solves on a mesh focused at the
// centres and are interpolated with the tensor spline.
AnsatzEnergy ansatz_energy(const AnsatzConfig& cfg, const AnnulusGeometry& geo,
                           const EnergyQuadratureOptions& opts = {});

struct FitSample {
  double eps = 0.0;
  std::vector<BubblePair> pairs;
  double energy = 0.0;
};

struct RungResidual {
  double eps = 0.0;
  double max_abs_residual = 0.0;
  double residual_over_eps = 0.0;
};

struct FitReport {
  EnergyExpansion fitted;
  EnergyExpansion assembled;
  std::array<double, 6> relative_disagreement{};  // |fitted - assembled| / max(|assembled|, 1e-12)
  std::vector<FitSample> samples;
  std::vector<RungResidual> rungs;  // ascending eps order as supplied
  bool remainder_decreasing = false;  // residual/eps decreases over the three smallest eps
  double condition_number = 0.0;
};

// Template columns for one sample: 1, eps, eps log eps and eps (1+|lambda|)
// times the three Phi building blocks.
std::array<double, 6> template_row(int n, int lambda_abs, double eps,
                                   const std::vector<BubblePair>& pairs);
double template_value(const EnergyExpansion& e, double eps, const std::vector<BubblePair>& pairs);

// Least-squares fit of c1..c6.  Equations are scaled by 1/eps^2, i.e. the
// normalised remainder (J - T)/eps is matched with relative weight 1/eps.
FitReport fit_template(int n, int lambda_abs, const std::vector<FitSample>& samples);

struct AnsatzFamily {
  int n = 3;
  int lambda = 0;
  std::vector<int> signs{1};
  AmplitudeMode amplitude = AmplitudeMode::weighted;
  std::vector<std::vector<BubblePair>> parameter_sets;  // signs are taken from `signs`

  // d in {0.05, 0.1, 0.2} x t in {0.25, 0.5, 1}, one positive bubble.
  static AnsatzFamily case_i_default(int n);
  void validate() const;
};

struct FitOptions {
  EnergyQuadratureOptions quadrature{};
  int threads = 1;
};

// eps = 0.1 * 2^{-k}, k = 0..5
std::vector<double> default_fit_ladder();

FitReport fit_expansion(const AnsatzFamily& family, const std::vector<double>& eps_ladder,
                        const AnnulusGeometry& geo, const FitOptions& opts = {});

}  // namespace lanemden
