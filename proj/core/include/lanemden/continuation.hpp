#pragma once

#include <vector>

#include "lanemden/reduced_energy.hpp"
#include "lanemden/solver.hpp"

namespace lanemden {

struct ContinuationOptions {
  int nr = 257;
  int nphi = 129;
  double cells_per_delta = 32.0;  // target mesh width delta / cells at each core
  NewtonOptions newton{};
  PresolveOptions presolve{};  // grid and Newton fields are taken from this struct
  AmplitudeMode amplitude = AmplitudeMode::weighted;
  int max_bisections = 4;
  int max_regrids = 2;
};

struct Rung {
  SolveResult result;
  bool inserted = false;  // produced by step bisection, not on the requested ladder
  int regrids = 0;
  double core_spacing = 0.0;  // axis mesh width at the largest peak
};

class ContinuationAborted : public NumericalError {
 public:
  ContinuationAborted(const std::string& what, std::vector<Rung> good)
      : NumericalError(what), good_(std::move(good)) {}
  const std::vector<Rung>& good() const { return good_; }

 private:
  std::vector<Rung> good_;
};

// eps_k = start (end/start)^{k/(steps-1)}; a single step gives {start}.
std::vector<double> geometric_ladder(double eps_start, double eps_end, int steps);

// Reduced parameters of a branch from the minimum of Phi, with the branch's
// pair signs attached.
std::vector<BubblePair> critical_pairs(const BranchSpec& spec, const EnergyExpansion& coefficients);

// One solve: focused grid, ansatz initial guess, Newton; regrids around the
// fitted cores when they are under-resolved.
Rung solve_branch(const BranchSpec& spec, const AnnulusGeometry& geo, double eps,
                  const std::vector<BubblePair>& pairs, const ContinuationOptions& opts = {});

// Geometric ladder; each rung starts from the ansatz at the previous rung's
// fitted (d, t).  A failed step is bisected geometrically up to
// max_bisections times before ContinuationAborted is thrown.
std::vector<Rung> continue_in_eps(const BranchSpec& spec, const AnnulusGeometry& geo, double eps_start,
                                  double eps_end, int steps, const std::vector<BubblePair>& initial_pairs,
                                  const ContinuationOptions& opts = {});

}  // namespace lanemden
