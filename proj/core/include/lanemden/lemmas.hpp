#pragma once

#include <string>
#include <vector>

#include "lanemden/expansion.hpp"

namespace lanemden {

// One identity evaluated at one eps.  `rhs` is the closed asymptotic form
// the toolkit stands behind; `rhs_printed` is the form as usually quoted,
// kept alongside when the two differ.  For items whose leading term is
// O(1) the ratio compares first-order parts, (lhs - lead) / (rhs - lead).
struct LemmaEntry {
  std::string id;
  double eps = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double rhs_printed = 0.0;
  double ratio_printed = 0.0;
  double tolerance = 0.0;  // |ratio - 1| <= tolerance at the smallest eps
  bool pass = false;
  std::string note;
};

struct LemmaOptions {
  EnergyQuadratureOptions quadrature{};
  double d1 = 1.0, d2 = 1.0;
  double t1 = 1.0, t2 = 2.0;
  int lambda = 1;  // the two-pair items assume |lambda| = 1
  int threads = 1;
};

struct LemmaReport {
  int n = 3;
  AnnulusGeometry geometry{};
  std::vector<LemmaEntry> entries;  // every item at every rung, rung-major in ladder order
  std::vector<LemmaEntry> summary;  // every item at the smallest eps
  bool all_pass = false;
};

LemmaReport verify_lemmas(int n, const std::vector<double>& eps_ladder, const AnnulusGeometry& geo,
                          const LemmaOptions& opts = {});

struct SlopeCheck {
  double slope = 0.0;
  double expected = 0.0;
  double relative_error = 0.0;
  std::vector<double> tau, value;
};

// d/dtau int_Omega U^{p+1}/|x| for a bubble at (1 + tau) e_n with fixed
// delta, from a quadratic through three tau samples extrapolated to tau = 0.
// Expected slope -gamma1.
SlopeCheck weighted_mass_slope(int n, const AnnulusGeometry& geo, double delta,
                               const std::vector<double>& tau = {0.005, 0.01, 0.015},
                               const PolarOptions& polar = {});

}  // namespace lanemden
