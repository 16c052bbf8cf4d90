#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace lanemden;
using namespace lanemden::cli;

namespace {

struct Flags {
  int n = 0, m = 0, nr = 0, rungs = 0, threads = 0, points = 0;
  double inner = 0, outer = 0, eps = 0, eps_start = 0, eps_end = 0, tol = 0, cells = 0;
  std::string grid, kase, coeffs, out, config, what, field;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--n", f.n, "dimension of the annulus (>= 3)");
  sub->add_option("--m", f.m, "half dimension of the lifted problem");
  sub->add_option("--inner", f.inner, "inner radius");
  sub->add_option("--outer", f.outer, "outer radius");
  sub->add_option("--grid", f.grid, "NRxNPHI");
  sub->add_option("--cells-per-delta", f.cells, "mesh cells across each bubble core");
  sub->add_option("--eps", f.eps, "single eps for solve and lift");
  sub->add_option("--eps-start", f.eps_start, "first rung of the eps ladder");
  sub->add_option("--eps-end", f.eps_end, "last rung of the eps ladder");
  sub->add_option("--rungs", f.rungs, "ladder length");
  sub->add_option("--case", f.kase, "i, ii, iii, iv, v+, v- (or single, pair)");
  sub->add_option("--coeffs", f.coeffs, "unit, assembled, fitted or a JSON file");
  sub->add_option("--tol", f.tol, "Newton relative residual tolerance");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--threads", f.threads, "worker cap");
  sub->add_option("--config", f.config, "JSON job file");
  sub->add_option("--seed", f.seed, "seed for randomised checks");
  sub->add_option("--what", f.what, "verify: lemmas, expansion, transform, projection, all");
  sub->add_option("--field", f.field, "lift: field CSV written by solve");
  sub->add_option("--points", f.points, "landscape: points per axis");
}

JobConfig resolve(const std::string& command, const CLI::App* sub, const Flags& f) {
  JobConfig cfg;
  cfg.command = command;
  if (sub->count("--config")) apply_json(cfg, read_json(f.config));
  auto given = [&](const char* name) { return sub->count(name) > 0; };
  if (given("--n")) cfg.n = f.n;
  if (given("--m")) cfg.m = f.m;
  if (given("--n") && !given("--m") && command != "lift") cfg.m = cfg.n - 1;
  if (given("--inner")) cfg.inner = f.inner;
  if (given("--outer")) cfg.outer = f.outer;
  if (given("--grid")) apply_grid(cfg, f.grid);
  if (given("--cells-per-delta")) cfg.cells_per_delta = f.cells;
  if (given("--eps")) cfg.eps = f.eps;
  if (given("--eps-start")) cfg.eps_start = f.eps_start;
  if (given("--eps-end")) cfg.eps_end = f.eps_end;
  if (given("--rungs")) cfg.rungs = f.rungs;
  if (given("--case")) cfg.kase = f.kase;
  if (given("--coeffs")) cfg.coeffs = f.coeffs;
  if (given("--tol")) cfg.tol = f.tol;
  if (given("--out")) cfg.out = f.out;
  if (given("--threads")) cfg.threads = f.threads;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--what")) cfg.what = f.what;
  if (given("--field")) cfg.field = f.field;
  if (given("--points")) cfg.points = f.points;
  if (command == "minimize" || command == "landscape")
    if (!given("--case") && !(sub->count("--config") && read_json(f.config).contains("case"))) cfg.kase = "single";
  if (command == "verify" && given("--m") && !given("--n")) cfg.n = cfg.m + 1;
  if (command == "lift" && given("--m") && !given("--n")) cfg.n = cfg.m + 1;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for the supercritical Lane-Emden problem on annuli"};
  app.set_version_flag("--version", std::string(LANEMDEN_VERSION_STRING));
  app.require_subcommand(1);

  const std::map<std::string, std::function<int(const JobConfig&, Artifacts&)>> commands = {
      {"constants", cmd_constants}, {"landscape", cmd_landscape}, {"minimize", cmd_minimize},
      {"solve", cmd_solve},         {"continue", cmd_continue},   {"lift", cmd_lift},
      {"verify", cmd_verify}};
  const std::map<std::string, std::string> help = {
      {"constants", "gamma constants by quadrature and closed form"},
      {"landscape", "tabulate the reduced energy Phi on a log grid"},
      {"minimize", "critical point of Phi"},
      {"solve", "solve one branch at one eps"},
      {"continue", "continue a branch along an eps ladder"},
      {"lift", "lift a meridian field to the biradial (s, t) plane"},
      {"verify", "lemma, expansion, transform and projection checks"}};

  Flags flags;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    add_common(sub, flags);
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : invalid;
  }

  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;

  JobConfig cfg;
  try {
    cfg = resolve(command, subs.at(command), flags);
    precheck(cfg);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "lanemden %s: invalid configuration: %s\n", command.c_str(), e.what());
    return invalid;
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  if (ec) {
    std::fprintf(stderr, "lanemden: cannot create %s: %s\n", cfg.out.c_str(), ec.message().c_str());
    return invalid;
  }

  Artifacts art(cfg.out);
  const auto start = std::chrono::steady_clock::now();
  int rc = ok;
  try {
    rc = commands.at(command)(cfg, art);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "lanemden %s: invalid input: %s\n", command.c_str(), e.what());
    rc = invalid;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "lanemden %s: numerical failure: %s\n", command.c_str(), e.what());
    rc = numerical;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    art.write_manifest(to_json(cfg), command, wall, rc);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "lanemden: cannot write manifest: %s\n", e.what());
    if (rc == ok) rc = numerical;
  }
  if (rc == verification_failed) std::fprintf(stderr, "lanemden %s: verification report contains failures\n", command.c_str());
  return rc;
}
