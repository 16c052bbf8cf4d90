#pragma once

#include <functional>
#include <vector>

#include "lanemden/bubble.hpp"
#include "lanemden/field.hpp"

namespace lanemden {

enum class AmplitudeMode { unit, weighted };

struct BubblePair {
  int sign = 1;  // +1 or -1
  double d = 1.0;
  double t = 1.0;
};

// V = sum_i s_i PU_{delta_i, xi_i} + lambda sum_i s_i PU_{delta_i, -xi_i}
// with delta_i = eps^{(n-1)/(n-2)} d_i and xi_i = (1 + eps t_i) e_n.
struct AnsatzConfig {
  int n = 3;
  double eps = 0.05;
  int lambda = 0;
  std::vector<BubblePair> pairs;
  AmplitudeMode amplitude = AmplitudeMode::weighted;

  void validate() const;
};

struct AnsatzTerm {
  double coefficient;  // sign, lambda and amplitude combined
  Bubble bubble;
};

// kappa = (2|xi|)^{1/(p-1-eps)} in weighted mode, 1 otherwise.
double amplitude_factor(int n, double eps, double centre_norm, AmplitudeMode mode);

std::vector<AnsatzTerm> ansatz_terms(const AnsatzConfig& cfg);

using BubbleProjector = std::function<MeridianField(const Bubble&)>;

// Projector backed by discrete harmonic extension on a fixed grid.
BubbleProjector grid_projector(const GridPtr& grid);

// Sum of the projected terms; tagged even/odd for lambda = +1/-1, and the
// parity is exact at every node.
MeridianField assemble_ansatz(const AnsatzConfig& cfg, const BubbleProjector& projector);

Symmetry symmetry_for_lambda(int lambda);

}  // namespace lanemden
