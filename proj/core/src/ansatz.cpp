#include "lanemden/ansatz.hpp"

#include <cmath>
#include <string>

#include "lanemden/error.hpp"
#include "lanemden/green.hpp"

namespace lanemden {

void AnsatzConfig::validate() const {
  if (n < 3) throw ValidationError("dimension n must be >= 3");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ValidationError("eps must be >= 0");
  if (lambda < -1 || lambda > 1) throw ValidationError("lambda must be -1, 0 or +1");
  if (pairs.empty() || pairs.size() > 2) throw ValidationError("ansatz needs one or two bubble pairs");
  for (const auto& p : pairs) {
    if (p.sign != 1 && p.sign != -1) throw ValidationError("bubble sign must be +1 or -1");
    if (!(p.d > 0.0) || !(p.t > 0.0)) throw ValidationError("ansatz parameters d and t must be positive");
  }
  if (pairs.size() == 2 && !(pairs[0].t < pairs[1].t))
    throw ValidationError("two-pair configurations require t1 < t2");
}

Symmetry symmetry_for_lambda(int lambda) {
  if (lambda == 1) return Symmetry::even;
  if (lambda == -1) return Symmetry::odd;
  return Symmetry::none;
}

double amplitude_factor(int n, double eps, double centre_norm, AmplitudeMode mode) {
  if (mode == AmplitudeMode::unit) return 1.0;
  const double p = critical_exponent(n);
  return std::pow(2.0 * centre_norm, 1.0 / (p - 1.0 - eps));
}

std::vector<AnsatzTerm> ansatz_terms(const AnsatzConfig& cfg) {
  cfg.validate();
  if (!(cfg.eps > 0.0)) throw ValidationError("ansatz assembly needs eps > 0");
  std::vector<AnsatzTerm> terms;
  for (const auto& p : cfg.pairs) {
    const Bubble b = bubble_from_reduced(cfg.n, cfg.eps, p.d, p.t);
    const double z = 1.0 + cfg.eps * p.t;
    const double kappa = amplitude_factor(cfg.n, cfg.eps, z, cfg.amplitude);
    terms.push_back({p.sign * kappa, b});
    if (cfg.lambda != 0) terms.push_back({cfg.lambda * p.sign * kappa, Bubble::on_axis(cfg.n, b.delta, -z)});
  }
  return terms;
}

BubbleProjector grid_projector(const GridPtr& grid) {
  return [grid](const Bubble& b) { return project_bubble(grid, b); };
}

MeridianField assemble_ansatz(const AnsatzConfig& cfg, const BubbleProjector& projector) {
  const auto terms = ansatz_terms(cfg);
  MeridianField v;
  for (const auto& term : terms) {
    MeridianField pu = projector(term.bubble);
    pu *= term.coefficient;
    if (v.empty()) {
      v = std::move(pu);
    } else {
      v += pu;
    }
  }
  v.project(symmetry_for_lambda(cfg.lambda));
  return v;
}

}  // namespace lanemden
