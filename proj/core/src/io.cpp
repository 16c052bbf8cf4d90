#include "lanemden/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lanemden {

namespace fs = std::filesystem;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  return in;
}

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "unit") return Provenance::unit;
  if (s == "fitted") return Provenance::fitted;
  if (s == "assembled") return Provenance::assembled;
  if (s == "supplied") return Provenance::supplied;
  throw ValidationError("unknown coefficient provenance '" + s + "'");
}

}  // namespace

void write_json(const fs::path& path, const Json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw ValidationError("failed writing " + path.string());
}

Json read_json(const fs::path& path) {
  auto in = open_in(path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_field(const fs::path& csv, const fs::path& sidecar, const MeridianField& u) {
  if (u.empty()) throw ValidationError("cannot write an empty field");
  const MeridianGrid& g = u.grid();
  {
    auto out = open_out(csv);
    out << "r,phi,value\n";
    for (int i = 0; i < g.nr(); ++i)
      for (int j = 0; j < g.nphi(); ++j)
        out << format_double(g.r(i)) << ',' << format_double(g.phi(j)) << ',' << format_double(u(i, j)) << '\n';
    if (!out) throw ValidationError("failed writing " + csv.string());
  }
  Json meta;
  meta["geometry"] = to_json(g.geometry());
  meta["nr"] = g.nr();
  meta["nphi"] = g.nphi();
  meta["symmetry"] = to_string(u.symmetry());
  meta["csv"] = csv.filename().string();
  meta["r"] = numbers({g.r().begin(), g.r().end()});
  meta["phi"] = numbers({g.phi().begin(), g.phi().end()});
  write_json(sidecar, meta);
}

MeridianField read_field(const fs::path& csv, const fs::path& sidecar) {
  const Json meta = read_json(sidecar);
  try {
    AnnulusGeometry geo;
    geo.n = meta.at("geometry").at("n").get<int>();
    geo.r_inner = meta.at("geometry").at("r_inner").get<double>();
    geo.r_outer = meta.at("geometry").at("r_outer").get<double>();
    auto r = meta.at("r").get<std::vector<double>>();
    auto phi = meta.at("phi").get<std::vector<double>>();
    const Symmetry sym = symmetry_from_string(meta.at("symmetry").get<std::string>());
    const GridPtr grid = MeridianGrid::from_nodes(geo, r, phi);

    auto in = open_in(csv);
    std::string line;
    if (!std::getline(in, line) || line != "r,phi,value") throw ValidationError(csv.string() + ": bad header");
    std::vector<double> values;
    values.reserve(grid->size());
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto c2 = line.rfind(',');
      if (c2 == std::string::npos) throw ValidationError(csv.string() + ": malformed row");
      values.push_back(std::stod(line.substr(c2 + 1)));
    }
    if (values.size() != grid->size()) throw ValidationError(csv.string() + ": row count does not match the grid");
    return MeridianField(grid, std::move(values), sym);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(sidecar.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(csv.string() + ": " + e.what());
  }
}

void write_lifted(const fs::path& csv, const LiftedField& v) {
  auto out = open_out(csv);
  out << "s,t,value\n";
  for (std::size_t i = 0; i < v.s.size(); ++i)
    for (std::size_t j = 0; j < v.t.size(); ++j) {
      const double x = v.at(i, j);
      if (!std::isfinite(x)) continue;
      out << format_double(v.s[i]) << ',' << format_double(v.t[j]) << ',' << format_double(x) << '\n';
    }
  if (!out) throw ValidationError("failed writing " + csv.string());
}

void write_landscape(const fs::path& csv, PhiCase c, const std::vector<std::vector<double>>& params,
                     const std::vector<double>& values) {
  if (params.size() != values.size()) throw ValidationError("landscape parameter and value counts differ");
  const std::size_t width = c == PhiCase::single ? 2 : 4;
  auto out = open_out(csv);
  out << (c == PhiCase::single ? "d,t,phi\n" : "d1,t1,d2,t2,phi\n");
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (params[k].size() != width) throw ValidationError("landscape row has the wrong width");
    // parameters are stored (d..., t...) and written pairwise
    if (c == PhiCase::single) {
      out << format_double(params[k][0]) << ',' << format_double(params[k][1]);
    } else {
      out << format_double(params[k][0]) << ',' << format_double(params[k][2]) << ',' << format_double(params[k][1])
          << ',' << format_double(params[k][3]);
    }
    out << ',' << format_double(values[k]) << '\n';
  }
  if (!out) throw ValidationError("failed writing " + csv.string());
}

Json to_json(const AnnulusGeometry& g) { return Json{{"n", g.n}, {"r_inner", g.r_inner}, {"r_outer", g.r_outer}}; }

Json to_json(const GammaConstants& g) {
  return Json{{"n", g.n}, {"gamma1", g.gamma1}, {"gamma2", g.gamma2}, {"gamma3", g.gamma3}};
}

Json gamma_report(const GammaConstants& q, const GammaConstants& c) {
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  Json j;
  j["n"] = q.n;
  j["quadrature"] = to_json(q);
  j["closed_form"] = to_json(c);
  j["rel_err"] = Json{{"gamma1", rel(q.gamma1, c.gamma1)},
                      {"gamma2", rel(q.gamma2, c.gamma2)},
                      {"gamma3", rel(q.gamma3, c.gamma3)}};
  return j;
}

Json to_json(const EnergyExpansion& e) {
  Json j;
  j["n"] = e.n;
  j["lambda_abs"] = e.lambda_abs;
  j["provenance"] = to_string(e.provenance);
  j["c"] = Json{{"c1", e.c[0]}, {"c2", e.c[1]}, {"c3", e.c[2]}, {"c4", e.c[3]}, {"c5", e.c[4]}, {"c6", e.c[5]}};
  j["gammas"] = to_json(e.gammas);
  j["phi_coefficients_positive"] = e.phi_coefficients_positive();
  return j;
}

EnergyExpansion expansion_from_json(const Json& j) {
  try {
    EnergyExpansion e;
    e.n = j.at("n").get<int>();
    const Json& c = j.at("c");
    for (int k = 0; k < 6; ++k) e.c[k] = c.value("c" + std::to_string(k + 1), 0.0);
    e.lambda_abs = j.value("lambda_abs", 0);
    e.provenance = j.contains("provenance") ? provenance_from_string(j.at("provenance").get<std::string>())
                                            : Provenance::supplied;
    e.gammas = gamma_constants_closed_form(e.n);
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("coefficient file: ") + ex.what());
  }
}

Json to_json(const CriticalPoint& cp) {
  Json j;
  j["case"] = to_string(cp.kase);
  j["d"] = numbers(cp.d);
  j["t"] = numbers(cp.t);
  j["value"] = cp.value;
  j["hessian_spectrum"] = numbers(cp.hessian_spectrum);
  j["scaled_gradient"] = cp.scaled_gradient;
  j["newton_iterations"] = cp.newton_iterations;
  return j;
}

Json to_json(const GridSearchResult& g) {
  return Json{{"params", numbers({g.params.data(), g.params.data() + g.params.size()})},
              {"value", g.value},
              {"log_step", g.log_step},
              {"on_boundary", g.on_boundary}};
}

Json to_json(const FitReport& r) {
  Json j;
  j["fitted"] = to_json(r.fitted);
  j["assembled"] = to_json(r.assembled);
  j["relative_disagreement"] = numbers({r.relative_disagreement.begin(), r.relative_disagreement.end()});
  j["condition_number"] = r.condition_number;
  j["remainder_decreasing"] = r.remainder_decreasing;
  Json rungs = Json::array();
  for (const RungResidual& x : r.rungs)
    rungs.push_back({{"eps", x.eps}, {"max_abs_residual", x.max_abs_residual}, {"residual_over_eps", x.residual_over_eps}});
  j["rungs"] = rungs;
  Json samples = Json::array();
  for (const FitSample& s : r.samples) {
    Json ps = Json::array();
    for (const BubblePair& p : s.pairs) ps.push_back({{"sign", p.sign}, {"d", p.d}, {"t", p.t}});
    samples.push_back({{"eps", s.eps}, {"pairs", ps}, {"energy", s.energy}});
  }
  j["samples"] = samples;
  return j;
}

namespace {

Json lemma_entry(const LemmaEntry& e) {
  Json j{{"id", e.id}, {"eps", e.eps}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"ratio", e.ratio}};
  if (e.rhs_printed != 0.0) {
    j["rhs_printed"] = e.rhs_printed;
    j["ratio_printed"] = e.ratio_printed;
  }
  j["tolerance"] = e.tolerance;
  j["pass"] = e.pass;
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

}  // namespace

Json to_json(const LemmaReport& r) {
  Json j;
  j["n"] = r.n;
  j["geometry"] = to_json(r.geometry);
  j["all_pass"] = r.all_pass;
  Json s = Json::array(), e = Json::array();
  for (const LemmaEntry& x : r.summary) s.push_back(lemma_entry(x));
  for (const LemmaEntry& x : r.entries) e.push_back(lemma_entry(x));
  j["summary"] = s;
  j["entries"] = e;
  return j;
}

Json to_json(const SlopeCheck& s) {
  return Json{{"slope", s.slope},       {"expected", s.expected}, {"relative_error", s.relative_error},
              {"tau", numbers(s.tau)}, {"value", numbers(s.value)}};
}

Json to_json(const ProjectionExpansionCheck& p) {
  return Json{{"delta", numbers(p.delta)},
              {"remainder", numbers(p.remainder)},
              {"slope", p.slope},
              {"expected", p.expected},
              {"relative_error", p.relative_error}};
}

Json to_json(const BlowupFit& fit) {
  Json a = Json::array();
  for (const Peak& p : fit.peaks)
    a.push_back({{"z", p.z},
                 {"amplitude", p.amplitude},
                 {"delta_fit", p.delta_fit},
                 {"delta_fit_plain", p.delta_fit_plain},
                 {"d_fit", p.d_fit},
                 {"t_fit", p.t_fit}});
  return a;
}

Json to_json(const SolveResult& r) {
  Json j;
  j["eps"] = r.eps;
  j["residual_inf"] = r.residual_inf;
  j["newton_iterations"] = r.newton_iters;
  j["history"] = numbers(r.history);
  j["max_abs"] = r.field.empty() ? 0.0 : r.field.max_abs();
  j["peaks"] = to_json(r.diagnostics);
  if (!r.field.empty()) {
    j["grid"] = Json{{"nr", r.field.grid().nr()}, {"nphi", r.field.grid().nphi()}};
    j["symmetry"] = to_string(r.field.symmetry());
    j["nodal_domains"] = nodal_domains(r.field);
  }
  return j;
}

Json to_json(const CorrespondenceReport& r) {
  Json j;
  j["m"] = r.m;
  j["lower"] = to_json(r.lower);
  j["upper"] = Json{{"m", r.upper.m}, {"a", r.upper.a}, {"b", r.upper.b}};
  j["max_discrepancy"] = r.max_discrepancy;
  j["all_pass"] = r.all_pass;
  Json cs = Json::array();
  for (const CorrespondenceCase& c : r.cases)
    cs.push_back({{"name", c.name},
                  {"h", numbers(c.h)},
                  {"discrepancy", numbers(c.discrepancy)},
                  {"order", c.order},
                  {"exact", c.exact},
                  {"pass", c.pass}});
  j["cases"] = cs;
  return j;
}

Json to_json(const LiftedResidual& r) {
  return Json{{"samples", r.samples},
              {"max_upper", r.max_upper},
              {"max_lower_weighted", r.max_lower_weighted},
              {"max_discrepancy", r.max_discrepancy},
              {"scale", r.scale},
              {"relative", r.relative}};
}

Json to_json(const SphereConcentration& s) {
  Json j;
  j["m"] = s.geometry.m;
  j["a"] = s.geometry.a;
  j["b"] = s.geometry.b;
  Json a = Json::array();
  for (const ConcentrationSphere& c : s.spheres)
    a.push_back({{"factor", c.factor}, {"radius", c.radius}, {"rho", c.rho}, {"sign", c.sign}, {"amplitude", c.amplitude}});
  j["spheres"] = a;
  return j;
}

}  // namespace lanemden
