#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

namespace lanemden::cli {

namespace {

PhiCase phi_case_for(const std::string& kase) {
  if (kase == "single" || kase == "pair") return phi_case_from_string(kase);
  const BranchSpec spec = BranchSpec::make(theorem_case_from_string(kase));
  return spec.pairs == 1 ? PhiCase::single : PhiCase::pair;
}

int lambda_abs_for(const std::string& kase) {
  if (kase == "single" || kase == "pair") return 0;
  return std::abs(BranchSpec::make(theorem_case_from_string(kase)).lambda);
}

EnergyExpansion coefficients(const JobConfig& cfg, const std::string& fallback, int lambda_abs) {
  const std::string src = cfg.coeffs.empty() ? fallback : cfg.coeffs;
  if (src == "unit") return EnergyExpansion::unit(cfg.n);
  if (src == "assembled") return assembled_coefficients(cfg.n, AmplitudeMode::weighted, lambda_abs);
  if (src == "fitted") {
    AnsatzFamily family = AnsatzFamily::case_i_default(cfg.n);
    family.lambda = lambda_abs;
    FitOptions fo;
    fo.threads = cfg.threads;
    return fit_expansion(family, default_fit_ladder(), cfg.geometry(), fo).fitted;
  }
  EnergyExpansion e = expansion_from_json(read_json(src));
  if (e.n != cfg.n) throw ValidationError("coefficient file is for n = " + std::to_string(e.n));
  return e;
}

ContinuationOptions continuation_options(const JobConfig& cfg) {
  ContinuationOptions co;
  co.nr = cfg.nr;
  co.nphi = cfg.nphi;
  co.cells_per_delta = cfg.cells_per_delta;
  co.newton.tol = cfg.tol;
  co.presolve.threads = cfg.threads;
  return co;
}

Json pairs_json(const std::vector<BubblePair>& pairs) {
  Json a = Json::array();
  for (const BubblePair& p : pairs) a.push_back({{"sign", p.sign}, {"d", p.d}, {"t", p.t}});
  return a;
}

Json solve_json(const SolveResult& r, const BranchSpec& spec) {
  Json j = to_json(r);
  j["case"] = to_string(spec.theorem_case);
  j["kernel_cosines"] = kernel_projection_diagnostic(r, spec);
  return j;
}

void write_rung(Artifacts& art, const std::string& stem, const SolveResult& r, const BranchSpec& spec) {
  write_field(art.path(stem + "_field.csv"), art.path(stem + "_field.json"), r.field);
  art.add(stem + "_field.csv");
  art.add(stem + "_field.json");
  write_json(art.path(stem + ".json"), solve_json(r, spec));
  art.add(stem + ".json");
}

std::vector<double> log_grid(double lo, double hi, int k) {
  std::vector<double> v(k);
  for (int i = 0; i < k; ++i) v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (k - 1));
  return v;
}

std::filesystem::path sidecar_for(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_extension(".json");
  return p;
}

}  // namespace

void precheck(const JobConfig& cfg) {
  cfg.validate();
  const std::string& c = cfg.command;
  if (c == "landscape" || c == "minimize") phi_case_for(cfg.kase);
  if (c == "solve" || c == "continue") BranchSpec::make(theorem_case_from_string(cfg.kase));
  if (!cfg.coeffs.empty() && cfg.coeffs != "unit" && cfg.coeffs != "assembled" && cfg.coeffs != "fitted")
    expansion_from_json(read_json(cfg.coeffs));
  if (c == "lift") {
    if (cfg.field.empty()) throw ValidationError("lift needs --field");
    if (!std::filesystem::exists(cfg.field)) throw ValidationError("no such field file: " + cfg.field);
    if (!std::filesystem::exists(sidecar_for(cfg.field)))
      throw ValidationError("missing sidecar " + sidecar_for(cfg.field).string());
  }
  if (c == "verify" && cfg.what != "all" && cfg.what != "lemmas" && cfg.what != "expansion" &&
      cfg.what != "transform" && cfg.what != "projection")
    throw ValidationError("--what must be one of lemmas, expansion, transform, projection, all");
}

int cmd_constants(const JobConfig& cfg, Artifacts& art) {
  const GammaConstants q = gamma_constants(cfg.n);
  const GammaConstants c = gamma_constants_closed_form(cfg.n);
  write_json(art.path("constants.json"), gamma_report(q, c));
  art.add("constants.json");
  return ok;
}

int cmd_landscape(const JobConfig& cfg, Artifacts& art) {
  const PhiCase pc = phi_case_for(cfg.kase);
  const EnergyExpansion e = coefficients(cfg, "unit", lambda_abs_for(cfg.kase));
  const auto d = log_grid(cfg.d_min, cfg.d_max, cfg.points);
  const auto t = log_grid(cfg.t_min, cfg.t_max, cfg.points);
  std::vector<std::vector<double>> params;
  std::vector<double> values;
  if (pc == PhiCase::single) {
    for (double dd : d)
      for (double tt : t) {
        Eigen::VectorXd x(2);
        x << dd, tt;
        params.push_back({dd, tt});
        values.push_back(phi_value(pc, x, e));
      }
  } else {
    for (double d1 : d)
      for (double t1 : t)
        for (double d2 : d)
          for (double t2 : t) {
            if (!(t1 < t2)) continue;
            Eigen::VectorXd x(4);
            x << d1, d2, t1, t2;
            params.push_back({d1, d2, t1, t2});
            values.push_back(phi_value(pc, x, e));
          }
  }
  write_landscape(art.path("landscape.csv"), pc, params, values);
  art.add("landscape.csv");
  return ok;
}

int cmd_minimize(const JobConfig& cfg, Artifacts& art) {
  const PhiCase pc = phi_case_for(cfg.kase);
  const EnergyExpansion e = coefficients(cfg, "unit", lambda_abs_for(cfg.kase));
  const CriticalPoint cp = minimize_phi(pc, e);
  SearchBox box;
  const GridSearchResult gs = grid_search_phi(pc, e, box);
  Json j = to_json(cp);
  j["grid_search"] = to_json(gs);
  j["coefficients"] = to_json(e);
  write_json(art.path("critical_point.json"), j);
  art.add("critical_point.json");
  return ok;
}

int cmd_solve(const JobConfig& cfg, Artifacts& art) {
  const BranchSpec spec = BranchSpec::make(theorem_case_from_string(cfg.kase));
  const EnergyExpansion e = coefficients(cfg, "assembled", std::abs(spec.lambda));
  const auto pairs = critical_pairs(spec, e);
  const Rung rung = solve_branch(spec, cfg.geometry(), cfg.eps, pairs, continuation_options(cfg));
  write_rung(art, "solve", rung.result, spec);
  Json summary;
  summary["initial_pairs"] = pairs_json(pairs);
  summary["coefficients"] = to_json(e);
  summary["regrids"] = rung.regrids;
  summary["core_spacing"] = rung.core_spacing;
  if (cfg.n >= 3) summary["spheres"] = to_json(sphere_extract(rung.result, cfg.n - 1));
  write_json(art.path("solve_summary.json"), summary);
  art.add("solve_summary.json");
  return ok;
}

int cmd_continue(const JobConfig& cfg, Artifacts& art) {
  const BranchSpec spec = BranchSpec::make(theorem_case_from_string(cfg.kase));
  const EnergyExpansion e = coefficients(cfg, "assembled", std::abs(spec.lambda));
  const auto pairs = critical_pairs(spec, e);
  std::vector<Rung> rungs;
  auto dump = [&](const std::vector<Rung>& rs) {
    Json list = Json::array();
    for (std::size_t k = 0; k < rs.size(); ++k) {
      char stem[32];
      std::snprintf(stem, sizeof stem, "rung_%02zu", k);
      write_rung(art, stem, rs[k].result, spec);
      list.push_back({{"eps", rs[k].result.eps},
                      {"stem", stem},
                      {"inserted", rs[k].inserted},
                      {"residual_inf", rs[k].result.residual_inf},
                      {"max_abs", rs[k].result.field.max_abs()}});
    }
    return list;
  };
  try {
    rungs = continue_in_eps(spec, cfg.geometry(), cfg.eps_start, cfg.eps_end, cfg.rungs, pairs,
                            continuation_options(cfg));
  } catch (const ContinuationAborted& ex) {
    Json s;
    s["rungs"] = dump(ex.good());
    s["aborted"] = ex.what();
    write_json(art.path("continue.json"), s);
    art.add("continue.json");
    throw;
  }
  Json s;
  s["case"] = to_string(spec.theorem_case);
  s["initial_pairs"] = pairs_json(pairs);
  s["rungs"] = dump(rungs);
  if (rungs.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const Rung& r : rungs) {
      const double x = std::log(r.result.eps), y = std::log(r.result.field.max_abs());
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double k = static_cast<double>(rungs.size());
    s["amplitude_slope"] = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  }
  if (rungs.size() >= 3) {
    // spread of the largest peak's d over the three smallest eps
    std::vector<double> d;
    for (std::size_t k = rungs.size() - 3; k < rungs.size(); ++k) {
      const auto& peaks = rungs[k].result.diagnostics.peaks;
      if (peaks.empty()) break;
      const Peak* top = &peaks.front();
      for (const Peak& p : peaks)
        if (p.amplitude > top->amplitude) top = &p;
      d.push_back(top->d_fit);
    }
    if (d.size() == 3) {
      const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
      s["d_fit_variation"] = (*hi - *lo) / (std::abs(d[0] + d[1] + d[2]) / 3.0);
    }
  }
  write_json(art.path("continue.json"), s);
  art.add("continue.json");
  return ok;
}

int cmd_lift(const JobConfig& cfg, Artifacts& art) {
  const MeridianField u = read_field(cfg.field, sidecar_for(cfg.field));
  if (u.grid().n() != cfg.m + 1)
    throw ValidationError("field lives in R^" + std::to_string(u.grid().n()) + ", not R^{m+1} for m = " +
                          std::to_string(cfg.m));
  const auto nodes = default_lift_nodes(u.grid());
  const LiftedField v = lift(u, nodes, nodes);
  write_lifted(art.path("lifted.csv"), v);
  art.add("lifted.csv");

  SolveResult r;
  r.field = u;
  r.eps = cfg.eps;
  r.diagnostics = blowup_fit(u, cfg.eps);
  const LiftMaximum mx = lift_maximum(v);
  Json j;
  j["m"] = v.geometry.m;
  j["a"] = v.geometry.a;
  j["b"] = v.geometry.b;
  j["source"] = Json{{"file", std::filesystem::path(cfg.field).filename().string()},
                     {"sha256", sha256_file(cfg.field)}};
  j["maximum"] = Json{{"s", mx.s}, {"t", mx.t}, {"value", mx.value}};
  j["spheres"] = to_json(sphere_extract(r, cfg.m));
  j["residual"] = to_json(lifted_residual_check(u, cfg.eps));
  write_json(art.path("lift.json"), j);
  art.add("lift.json");
  return ok;
}

int cmd_verify(const JobConfig& cfg, Artifacts& art) {
  const bool all = cfg.what == "all";
  bool pass = true;
  if (all || cfg.what == "transform") {
    CorrespondenceOptions co;
    co.seed = cfg.seed;
    const AnnulusGeometry lower{cfg.m + 1, cfg.inner, cfg.outer};
    const CorrespondenceReport rep = verify_correspondence(cfg.m, lower, co);
    write_json(art.path("transform.json"), to_json(rep));
    art.add("transform.json");
    pass = pass && rep.all_pass;
  }
  if (all || cfg.what == "projection") {
    const ProjectionExpansionCheck pe = projection_expansion_check(
        cfg.geometry(), 0.5 * (cfg.inner + cfg.outer), {0.2, 0.1, 0.05, 0.025}, cfg.nr, cfg.nphi);
    Json j = to_json(pe);
    j["pass"] = pe.relative_error <= 0.2;
    write_json(art.path("projection.json"), j);
    art.add("projection.json");
    pass = pass && pe.relative_error <= 0.2;
  }
  if (all || cfg.what == "lemmas") {
    LemmaOptions lo;
    lo.threads = cfg.threads;
    const LemmaReport rep = verify_lemmas(cfg.n, default_fit_ladder(), cfg.geometry(), lo);
    const SlopeCheck sc = weighted_mass_slope(cfg.n, cfg.geometry(), 1e-6);
    Json j = to_json(rep);
    j["weighted_mass_slope"] = to_json(sc);
    write_json(art.path("lemmas.json"), j);
    art.add("lemmas.json");
    pass = pass && rep.all_pass;
  }
  if (all || cfg.what == "expansion") {
    FitOptions fo;
    fo.threads = cfg.threads;
    const FitReport rep = fit_expansion(AnsatzFamily::case_i_default(cfg.n), default_fit_ladder(), cfg.geometry(), fo);
    Json j = to_json(rep);
    const bool ok_fit = rep.fitted.phi_coefficients_positive() && rep.remainder_decreasing;
    j["pass"] = ok_fit;
    write_json(art.path("expansion.json"), j);
    art.add("expansion.json");
    pass = pass && ok_fit;
  }
  return pass ? ok : verification_failed;
}

}  // namespace lanemden::cli
