// Acceptance checks for the toolkit.  One PASS/FAIL line per criterion;
// nonzero exit when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <lanemden/continuation.hpp>
#include <lanemden/expansion.hpp>
#include <lanemden/gamma_constants.hpp>
#include <lanemden/green.hpp>
#include <lanemden/lemmas.hpp>
#include <lanemden/reduced_energy.hpp>
#include <lanemden/transform.hpp>

using namespace lanemden;

namespace {

// Pinned tolerances.
constexpr double kGammaRel = 1e-8;
constexpr double kMinimizerAbs = 1e-6;
constexpr double kProjectionSlopeRel = 0.20;
constexpr double kMinOrder = 1.8;
constexpr double kNewtonTol = 1e-8;
constexpr double kSlopeTarget = -1.0, kSlopeBand = 0.15;
constexpr double kDFitVariation = 0.10;
constexpr double kSphereRadiusRel = 0.02;
constexpr double kLiftResidualRel = 1e-3;
constexpr double kSymmetryDefect = 0.0;

// Runtime budgets in seconds.
constexpr double kBudget1 = 1, kBudget2 = 1, kBudget3 = 120, kBudget4 = 60, kBudget5 = 600, kBudget56 = 900,
                 kBudget7 = 600, kBudget8 = 600, kBudget9 = 120;

const AnnulusGeometry kGeo{3, 1.0, 3.0};

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o, double seconds, double budget) {
  const bool ok = o.pass && seconds < budget;
  if (!ok) ++failures;
  std::printf("%s criterion %d (%s): %s [%.2f s, budget %.0f s]\n", ok ? "PASS" : "FAIL", id, name.c_str(),
              o.detail.c_str(), seconds, budget);
  std::fflush(stdout);
}

template <class F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome criterion1() {
  double worst = 0;
  for (int n = 3; n <= 7; ++n) {
    const GammaConstants q = gamma_constants(n), c = gamma_constants_closed_form(n);
    worst = std::max({worst, std::abs(q.gamma1 / c.gamma1 - 1), std::abs(q.gamma2 / c.gamma2 - 1),
                      std::abs(q.gamma3 / c.gamma3 - 1)});
  }
  const double g4 = gamma_constants(4).gamma1;
  const bool anchor = std::abs(g4 / (32 * std::numbers::pi * std::numbers::pi / 3) - 1) <= kGammaRel;
  return {worst <= kGammaRel && anchor, fmt("max rel err %.2e over n = 3..7", worst) + fmt(", n=4 gamma1 %.8f", g4)};
}

Outcome criterion2() {
  bool pass = true;
  std::ostringstream os;
  for (int n : {3, 4}) {
    const EnergyExpansion e = EnergyExpansion::unit(n);
    const CriticalPoint cp = minimize_phi(PhiCase::single, e);
    const double d_ref = n == 3 ? 2.0 : std::sqrt(2.0);
    const double err = std::max(std::abs(cp.d[0] - d_ref), std::abs(cp.t[0] - 1.0));
    const GridSearchResult gs = grid_search_phi(PhiCase::single, e, SearchBox{});
    const bool cell = std::abs(std::log(gs.params[0] / cp.d[0])) <= gs.log_step &&
                      std::abs(std::log(gs.params[1] / cp.t[0])) <= gs.log_step;
    pass = pass && err <= kMinimizerAbs && cp.hessian_spectrum.front() > 0 && cell && !gs.on_boundary;
    os << "n=" << n << " (d,t)=(" << cp.d[0] << "," << cp.t[0] << ") err " << err << " lambda_min "
       << cp.hessian_spectrum.front() << " grid " << (cell ? "within" : "outside") << " one cell; ";
  }
  return {pass, os.str()};
}

Outcome criterion3() {
  const ProjectionExpansionCheck pe = projection_expansion_check(kGeo, 2.0, {0.2, 0.1, 0.05, 0.025}, 257, 129);
  return {pe.relative_error <= kProjectionSlopeRel,
          fmt("slope %.4f", pe.slope) + fmt(" vs %.1f", pe.expected) + fmt(", rel err %.3f", pe.relative_error)};
}

Outcome criterion4() {
  const CorrespondenceReport r = verify_correspondence(2, kGeo);
  bool pass = true;
  double worst_order = 1e9;
  int random = 0, poly = 0;
  for (const auto& c : r.cases) {
    if (c.name.rfind("random_", 0) == 0) ++random;
    if (c.name == "axial_coordinate" || c.name == "squared_radius" || c.name == "constant") ++poly;
    if (!c.exact) {
      worst_order = std::min(worst_order, c.order);
      pass = pass && c.order >= kMinOrder;
    }
    pass = pass && c.pass;
  }
  pass = pass && random == 10 && poly == 3;
  return {pass, std::to_string(random) + " random + " + std::to_string(poly) + " polynomial fields, " +
                    fmt("min order %.3f", worst_order) + fmt(", max discrepancy %.2e", r.max_discrepancy)};
}

ContinuationOptions ladder_options() {
  ContinuationOptions co;
  co.newton.tol = kNewtonTol;
  return co;
}

const Peak& largest(const std::vector<Peak>& peaks) {
  return *std::max_element(peaks.begin(), peaks.end(),
                           [](const Peak& a, const Peak& b) { return std::abs(a.amplitude) < std::abs(b.amplitude); });
}

Outcome criterion5(std::vector<Rung>& rungs) {
  const BranchSpec spec = BranchSpec::make(TheoremCase::i);
  const auto pairs = critical_pairs(spec, assembled_coefficients(3, AmplitudeMode::weighted, 0));
  rungs = continue_in_eps(spec, kGeo, 0.2, 0.0125, 5, pairs, ladder_options());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, worst_res = 0;
  for (const Rung& r : rungs) {
    const double x = std::log(r.result.eps), y = std::log(r.result.field.max_abs());
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    worst_res = std::max(worst_res, r.result.history.empty() ? r.result.residual_inf : r.result.history.back());
  }
  const double k = static_cast<double>(rungs.size());
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  std::vector<double> d;
  for (std::size_t i = rungs.size() - 3; i < rungs.size(); ++i) d.push_back(largest(rungs[i].result.diagnostics.peaks).d_fit);
  const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  const double variation = (*hi - *lo) / ((d[0] + d[1] + d[2]) / 3);
  const bool pass = std::abs(slope - kSlopeTarget) <= kSlopeBand && variation < kDFitVariation &&
                    worst_res <= kNewtonTol && rungs.back().result.eps <= 0.0125 * (1 + 1e-12);
  return {pass, std::to_string(rungs.size()) + " rungs, " + fmt("slope %.4f, ", slope) +
                    fmt("d_fit variation %.2f%%, ", 100 * variation) + fmt("max rel residual %.1e", worst_res)};
}

Outcome criterion6() {
  std::ostringstream os;
  bool pass = true;
  for (TheoremCase tc : {TheoremCase::ii, TheoremCase::iii, TheoremCase::iv}) {
    const BranchSpec spec = BranchSpec::make(tc);
    const auto pairs = critical_pairs(spec, assembled_coefficients(3, AmplitudeMode::weighted, std::abs(spec.lambda)));
    const Rung r = solve_branch(spec, kGeo, 0.05, pairs, ladder_options());
    const auto& u = r.result.field;
    const auto& peaks = r.result.diagnostics.peaks;
    bool ok = r.result.history.empty() || r.result.history.back() <= kNewtonTol;
    if (tc == TheoremCase::ii) {
      const double defect = u.symmetry_defect(Symmetry::even);
      ok = ok && defect <= kSymmetryDefect && peaks.size() == 2 && peaks[0].z < 0 && peaks[1].z > 0 &&
           peaks[0].amplitude > 0 && peaks[1].amplitude > 0;
      os << "ii: even defect " << defect << ", " << peaks.size() << " positive peaks; ";
    } else if (tc == TheoremCase::iii) {
      const double defect = u.symmetry_defect(Symmetry::odd);
      const int domains = nodal_domains(u);
      ok = ok && defect <= kSymmetryDefect && domains == 2;
      os << "iii: odd defect " << defect << ", " << domains << " nodal regions; ";
    } else {
      ok = ok && peaks.size() == 2 && peaks[0].z > 0 && peaks[1].z > 0 &&
           peaks[0].amplitude * peaks[1].amplitude < 0;
      os << "iv: peaks at z=";
      for (const Peak& p : peaks) os << p.z << "(" << (p.amplitude > 0 ? "+" : "-") << ") ";
    }
    pass = pass && ok;
  }
  return {pass, os.str()};
}

Outcome criterion7() {
  const FitReport rep = fit_expansion(AnsatzFamily::case_i_default(3), default_fit_ladder(), kGeo);
  const auto& c = rep.fitted.c;
  return {rep.fitted.phi_coefficients_positive() && rep.remainder_decreasing,
          fmt("c4 %.4f", c[3]) + fmt(", c5 %.4f", c[4]) + fmt(", c6 %.4f", c[5]) +
              (rep.remainder_decreasing ? ", residual/eps decreasing" : ", residual/eps NOT decreasing")};
}

Outcome criterion8() {
  const LemmaReport rep = verify_lemmas(3, default_fit_ladder(), kGeo);
  std::ostringstream os;
  double worst10 = 0, worst25 = 0;
  bool pass = rep.all_pass;
  for (const LemmaEntry& e : rep.summary) {
    const double dev = std::abs(e.ratio - 1);
    double& worst = e.tolerance <= 0.1 ? worst10 : worst25;
    worst = std::max(worst, dev);
    pass = pass && dev <= e.tolerance && e.tolerance <= 0.25;
  }
  os << rep.summary.size() << " items, worst |ratio-1| " << worst10 << " (10% items), " << worst25 << " (25% items)";
  return {pass, os.str()};
}

Outcome criterion9(const SolveResult& r) {
  const SphereConcentration sc = sphere_extract(r, 2);
  const LiftedField v = lift(r.field, default_lift_nodes(r.field.grid()), default_lift_nodes(r.field.grid()));
  const LiftMaximum mx = lift_maximum(v);
  const double rho = largest(r.diagnostics.peaks).z;
  const double target = std::sqrt(2 * rho);
  const double rel = std::abs(mx.s - target) / target;
  const LiftedResidual res = lifted_residual_check(r.field, r.eps);
  const bool pass = mx.t == 0.0 && rel <= kSphereRadiusRel && sc.spheres.size() == 1 && sc.spheres[0].factor == 1 &&
                    res.relative <= kLiftResidualRel;
  return {pass, fmt("max at t=%.3g", mx.t) + fmt(", s=%.5f", mx.s) + fmt(" vs sqrt(2 rho*)=%.5f", target) +
                    fmt(" (rel %.2e)", rel) + fmt(", residual mismatch rel %.2e", res.relative)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome criterion10() {
  const std::filesystem::path root = std::filesystem::path(LANEMDEN_ACCEPT_DIR) / "determinism";
  std::filesystem::remove_all(root);
  const std::vector<std::pair<std::string, std::string>> jobs = {
      {"constants_n3", "constants --n 3"}, {"constants_n4", "constants --n 4"},
      {"minimize_n3", "minimize --case single --n 3 --coeffs unit"},
      {"minimize_n4", "minimize --case single --n 4 --coeffs unit"}};
  int files = 0;
  bool pass = true;
  for (const auto& [name, args] : jobs)
    for (const char* run : {"a", "b"}) {
      const auto out = root / run / name;
      const std::string cmd = std::string("\"") + LANEMDEN_CLI_PATH + "\" " + args + " --out \"" + out.string() + "\"";
      if (std::system(cmd.c_str()) != 0) pass = false;
    }
  for (const auto& [name, args] : jobs)
    for (const auto& entry : std::filesystem::directory_iterator(root / "a" / name)) {
      if (entry.path().filename() == "manifest.json") continue;  // carries wall time and output path
      const auto twin = root / "b" / name / entry.path().filename();
      pass = pass && std::filesystem::exists(twin) && slurp(entry.path()) == slurp(twin);
      ++files;
    }
  return {pass && files == 4, std::to_string(files) + " artifact files byte-identical across two runs"};
}

}  // namespace

int main() {
  std::vector<Rung> rungs;
  Outcome o;
  double s = 0;

  auto guarded = [](const std::function<Outcome()>& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      return Outcome{false, std::string("exception: ") + e.what()};
    }
  };

  s = timed([&] { o = guarded(criterion1); });
  report(1, "gamma constants", o, s, kBudget1);
  s = timed([&] { o = guarded(criterion2); });
  report(2, "Phi critical point", o, s, kBudget2);
  s = timed([&] { o = guarded(criterion3); });
  report(3, "projection expansion", o, s, kBudget3);
  s = timed([&] { o = guarded(criterion4); });
  report(4, "transform identity", o, s, kBudget4);
  double s5 = timed([&] { o = guarded([&] { return criterion5(rungs); }); });
  report(5, "blow-up scaling", o, s5, kBudget5);
  s = timed([&] { o = guarded(criterion6); });
  report(6, "branch symmetry", o, s5 + s, kBudget56);
  s = timed([&] { o = guarded(criterion7); });
  report(7, "reduced-energy expansion", o, s, kBudget7);
  s = timed([&] { o = guarded(criterion8); });
  report(8, "lemma suite", o, s, kBudget8);
  s = timed([&] {
    o = guarded([&] {
      // the eps = 0.05 rung of the case-i ladder
      for (const Rung& r : rungs)
        if (std::abs(r.result.eps - 0.05) < 1e-12) return criterion9(r.result);
      return Outcome{false, "no eps = 0.05 rung available"};
    });
  });
  report(9, "sphere lift", o, s, kBudget9);
  s = timed([&] { o = guarded(criterion10); });
  report(10, "determinism", o, s, 60);

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
