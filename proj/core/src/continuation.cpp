#include "lanemden/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lanemden/bubble.hpp"

namespace lanemden {

std::vector<double> geometric_ladder(double eps_start, double eps_end, int steps) {
  if (steps < 1) throw ValidationError("ladder needs at least one step");
  if (!(eps_start > 0.0 && eps_start < 1.0)) throw ValidationError("eps_start must lie in (0, 1)");
  if (steps == 1) return {eps_start};
  if (!(eps_end > 0.0 && eps_end < eps_start)) throw ValidationError("need eps_start > eps_end > 0");
  std::vector<double> out(steps);
  for (int k = 0; k < steps; ++k)
    out[k] = eps_start * std::pow(eps_end / eps_start, static_cast<double>(k) / (steps - 1));
  out.back() = eps_end;
  return out;
}

std::vector<BubblePair> critical_pairs(const BranchSpec& spec, const EnergyExpansion& coefficients) {
  spec.validate();
  const CriticalPoint cp = minimize_phi(spec.pairs == 1 ? PhiCase::single : PhiCase::pair, coefficients);
  std::vector<BubblePair> out;
  for (int k = 0; k < spec.pairs; ++k) out.push_back({spec.signs[k], cp.d[k], cp.t[k]});
  return out;
}

namespace {

double peak_spacing(const SolveResult& r) {
  double best = 0.0, h = 0.0;
  for (const Peak& p : r.diagnostics.peaks)
    if (std::abs(p.amplitude) > best) {
      best = std::abs(p.amplitude);
      h = r.field.grid().local_axis_spacing(std::abs(p.z));
    }
  return h;
}

bool under_resolved(const SolveResult& r, double cells) {
  for (const Peak& p : r.diagnostics.peaks)
    if (r.field.grid().local_axis_spacing(std::abs(p.z)) > 2.0 * p.delta_fit / cells) return true;
  return false;
}

}  // namespace

Rung solve_branch(const BranchSpec& spec, const AnnulusGeometry& geo, double eps,
                  const std::vector<BubblePair>& pairs, const ContinuationOptions& opts) {
  std::vector<BubblePair> current = pairs;
  Rung rung;
  for (int attempt = 0;; ++attempt) {
    PresolveOptions po = opts.presolve;
    po.nr = opts.nr;
    po.nphi = opts.nphi;
    po.cells_per_delta = opts.cells_per_delta;
    po.newton = opts.newton;
    const PresolveResult pre = reduced_presolve(geo, spec, eps, current, opts.amplitude, po);
    rung.result = newton_solve(pre.field, eps, spec, opts.newton);
    rung.regrids = attempt;
    rung.core_spacing = peak_spacing(rung.result);
    if (attempt >= opts.max_regrids || !under_resolved(rung.result, opts.cells_per_delta)) break;
    current = fitted_pairs(rung.result.diagnostics, spec);
  }
  return rung;
}

std::vector<Rung> continue_in_eps(const BranchSpec& spec, const AnnulusGeometry& geo, double eps_start,
                                  double eps_end, int steps, const std::vector<BubblePair>& initial_pairs,
                                  const ContinuationOptions& opts) {
  const std::vector<double> ladder = geometric_ladder(eps_start, eps_end, steps);
  std::vector<Rung> good;
  std::vector<BubblePair> pairs = initial_pairs;
  double last = 0.0;
  for (double target : ladder) {
    int bisections = 0;
    double trial = target;
    for (;;) {
      try {
        Rung r = solve_branch(spec, geo, trial, pairs, opts);
        r.inserted = trial != target;
        pairs = fitted_pairs(r.result.diagnostics, spec);
        last = trial;
        good.push_back(std::move(r));
        if (trial == target) break;
        trial = target;
      } catch (const NumericalError& e) {
        if (good.empty() || bisections >= opts.max_bisections) {
          std::ostringstream os;
          os << "continuation stopped at eps " << trial << " after " << bisections << " bisection(s): " << e.what();
          throw ContinuationAborted(os.str(), good);
        }
        ++bisections;
        trial = std::sqrt(last * trial);
      }
    }
  }
  return good;
}

}  // namespace lanemden
