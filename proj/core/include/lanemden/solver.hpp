#pragma once

#include <string>
#include <vector>

#include "lanemden/ansatz.hpp"
#include "lanemden/error.hpp"
#include "lanemden/field.hpp"

namespace lanemden {

// The five solution families: i one positive bubble; ii, iii a bubble and
// its mirror image with equal or opposite sign; iv a positive and a negative
// bubble on the same side; v+ and v- the mirrored versions of iv.
enum class TheoremCase { i, ii, iii, iv, v_plus, v_minus };

std::string to_string(TheoremCase c);
TheoremCase theorem_case_from_string(const std::string& s);  // accepts "v+", "v_plus", ...

struct BranchSpec {
  TheoremCase theorem_case = TheoremCase::i;
  int lambda = 0;
  int pairs = 1;
  Symmetry symmetry = Symmetry::none;
  std::vector<int> signs{1};  // sign of each pair on the x_n > 0 side

  static BranchSpec make(TheoremCase c);
  void validate() const;
};

// -Delta_h u - |u|^{p-1-eps} u / (2r) on interior nodes, zero on the
// Dirichlet rows.
MeridianField residual(const MeridianField& u, double eps);

// max |residual| / max |u|^{p-eps} / (2r); plain max |residual| for u = 0.
double residual_inf(const MeridianField& u, double eps);

struct Peak {
  double z = 0.0;          // signed axial position
  double amplitude = 0.0;  // signed value of u at the refined peak
  double delta_fit = 0.0;        // (kappa alpha_n / |amplitude|)^{2/(n-2)}
  double delta_fit_plain = 0.0;  // (alpha_n / |amplitude|)^{2/(n-2)}
  double d_fit = 0.0;            // delta_fit eps^{-(n-1)/(n-2)}
  double t_fit = 0.0;            // (|z| - r_inner) / eps
};

struct BlowupFit {
  std::vector<Peak> peaks;  // ascending z
};

// Local maxima of |u| along the two axis rows, refined by a parabola through
// the three nodes around each maximum.  Maxima below `floor` times max |u|
// are ignored.
BlowupFit blowup_fit(const MeridianField& u, double eps, double floor = 0.05);

// Connected components, under grid adjacency, of {u > f} and {u < -f} with
// f = floor * max |u|.
int nodal_domains(const MeridianField& u, double floor = 1e-10);

struct SolveResult {
  MeridianField field;
  double eps = 0.0;
  double residual_inf = 0.0;
  int newton_iters = 0;
  std::vector<double> history;  // relative residual per iterate, starting with the initial one
  BlowupFit diagnostics;
};

struct NewtonOptions {
  double tol = 1e-8;
  int max_iterations = 60;
  double min_step = 1.0 / 1024.0;
  int divergence_window = 5;
};

class NewtonDivergence : public NumericalError {
 public:
  NewtonDivergence(const std::string& what, SolveResult last) : NumericalError(what), last_(std::move(last)) {}
  const SolveResult& last() const { return last_; }

 private:
  SolveResult last_;
};

class JacobianSingular : public NumericalError {
 public:
  JacobianSingular(const std::string& what, double sigma_min) : NumericalError(what), sigma_min_(sigma_min) {}
  double smallest_singular_value() const { return sigma_min_; }

 private:
  double sigma_min_;
};

// Damped Newton with Armijo backtracking on the residual maximum norm.
// Iterates are projected onto the branch's symmetry class after every step.
SolveResult newton_solve(const MeridianField& initial, double eps, const BranchSpec& spec,
                         const NewtonOptions& opts = {});

struct PresolveOptions {
  int nr = 257;
  int nphi = 129;
  double cells_per_delta = 32.0;  // mesh width delta / cells at each core
  double tol = 1e-9;             // target size of the scaled multipliers
  int max_outer = 40;
  int max_inner = 40;
  double inner_tol = 1e-11;  // relative residual of the projected problem
  double fd_step = 1e-5;     // finite-difference step in (log d, t)
  double polish_below = 1e-3;  // multiplier size at which plain Newton is tried
  int polish_iterations = 12;
  int threads = 1;  // finite-difference columns evaluated concurrently
  NewtonOptions newton{};
};

struct PresolveResult {
  MeridianField field;               // on the final focused grid
  std::vector<BubblePair> pairs;
  std::vector<double> multipliers;   // scaled Lagrange multipliers at the final (d, t)
  double residual = 0.0;             // relative residual of the full problem at `field`
  bool solved = false;               // field already satisfies newton.tol
  int outer_iterations = 0;
  int inner_iterations = 0;
  int evaluations = 0;  // projected problems solved, one grid each
};

// Mesh focused at the bubble cores (spacing delta / cells) and at the inner
// sphere (spacing tau / 8).
GridPtr focused_grid(const AnnulusGeometry& geo, const AnsatzConfig& cfg, int nr, int nphi, double cells_per_delta);

// Discrete Lyapunov-Schmidt reduction.  For fixed (d, t) the equation is
// solved, on a grid focused at the cores, up to a combination of the
// projected kernel elements P psi^0, P psi^n of every independent bubble, with
// u - V(d, t) orthogonal to them in the Dirichlet form.  (d, t) then follow a
// finite-difference Newton iteration that drives the multipliers to zero.
// Once the multipliers are small a short plain Newton run is attempted and,
// if it converges, ends the iteration.
PresolveResult reduced_presolve(const AnnulusGeometry& geo, const BranchSpec& spec, double eps,
                                std::vector<BubblePair> pairs, AmplitudeMode amplitude = AmplitudeMode::weighted,
                                const PresolveOptions& opts = {});

// Scaled multipliers of the projected problem at fixed (d, t) on a grid
// focused there.
std::vector<double> reduced_multipliers(const AnnulusGeometry& geo, const BranchSpec& spec, double eps,
                                        const std::vector<BubblePair>& pairs,
                                        AmplitudeMode amplitude = AmplitudeMode::weighted,
                                        const PresolveOptions& opts = {});

// Reduced parameters for the ansatz of a branch; `pairs` lists the x_n > 0
// side in ascending t.
AnsatzConfig branch_ansatz(const BranchSpec& spec, int n, double eps, const std::vector<BubblePair>& pairs,
                           AmplitudeMode amplitude = AmplitudeMode::weighted);

// Reduced parameters read off a blow-up fit, x_n > 0 side for mirrored branches.
std::vector<BubblePair> fitted_pairs(const BlowupFit& fit, const BranchSpec& spec);

// Cosines between u - V(d_fit, t_fit) and the projected kernel elements P psi^0,
// P psi^n of every fitted bubble in the H^1_0 inner product.  Kernel elements
// are projected onto `elements` (default: the branch symmetry) first.
std::vector<double> kernel_projection_diagnostic(const SolveResult& result, const BranchSpec& spec,
                                                 Symmetry elements);
std::vector<double> kernel_projection_diagnostic(const SolveResult& result, const BranchSpec& spec);

}  // namespace lanemden
