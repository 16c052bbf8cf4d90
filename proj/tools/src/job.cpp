#include "job.hpp"

#include <set>

namespace lanemden::cli {

void apply_grid(JobConfig& cfg, const std::string& spec) {
  const auto x = spec.find('x');
  if (x == std::string::npos) throw ValidationError("grid must look like NRxNPHI, got '" + spec + "'");
  try {
    std::size_t used = 0;
    const std::string a = spec.substr(0, x), b = spec.substr(x + 1);
    cfg.nr = std::stoi(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    cfg.nphi = std::stoi(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
  } catch (const std::logic_error&) {
    throw ValidationError("grid must look like NRxNPHI, got '" + spec + "'");
  }
}

void apply_json(JobConfig& cfg, const Json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::set<std::string> known = {
      "n",     "m",      "inner", "outer",   "grid",   "nr",      "nphi",  "cells_per_delta", "eps",
      "eps_start", "eps_end", "rungs", "case", "coeffs", "tol", "out", "threads", "seed", "what",
      "field", "points", "d_min", "d_max", "t_min", "t_max"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ValidationError("unknown config key '" + key + "'");
  try {
    if (j.contains("n")) cfg.n = j.at("n").get<int>();
    if (j.contains("m")) cfg.m = j.at("m").get<int>();
    if (j.contains("inner")) cfg.inner = j.at("inner").get<double>();
    if (j.contains("outer")) cfg.outer = j.at("outer").get<double>();
    if (j.contains("grid")) apply_grid(cfg, j.at("grid").get<std::string>());
    if (j.contains("nr")) cfg.nr = j.at("nr").get<int>();
    if (j.contains("nphi")) cfg.nphi = j.at("nphi").get<int>();
    if (j.contains("cells_per_delta")) cfg.cells_per_delta = j.at("cells_per_delta").get<double>();
    if (j.contains("eps")) cfg.eps = j.at("eps").get<double>();
    if (j.contains("eps_start")) cfg.eps_start = j.at("eps_start").get<double>();
    if (j.contains("eps_end")) cfg.eps_end = j.at("eps_end").get<double>();
    if (j.contains("rungs")) cfg.rungs = j.at("rungs").get<int>();
    if (j.contains("case")) cfg.kase = j.at("case").get<std::string>();
    if (j.contains("coeffs")) cfg.coeffs = j.at("coeffs").get<std::string>();
    if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("what")) cfg.what = j.at("what").get<std::string>();
    if (j.contains("field")) cfg.field = j.at("field").get<std::string>();
    if (j.contains("points")) cfg.points = j.at("points").get<int>();
    if (j.contains("d_min")) cfg.d_min = j.at("d_min").get<double>();
    if (j.contains("d_max")) cfg.d_max = j.at("d_max").get<double>();
    if (j.contains("t_min")) cfg.t_min = j.at("t_min").get<double>();
    if (j.contains("t_max")) cfg.t_max = j.at("t_max").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

void JobConfig::validate() const {
  if (n < 3) throw ValidationError("n must be >= 3");
  if (m < 2) throw ValidationError("m must be >= 2");
  geometry().validate();
  if (nr < 9 || nr > 4097 || nphi < 9 || nphi > 4097) throw ValidationError("grid sizes must lie in [9, 4097]");
  if (nphi % 2 == 0) throw ValidationError("nphi must be odd so that phi = pi/2 is a node");
  if (!(cells_per_delta >= 2.0)) throw ValidationError("cells_per_delta must be >= 2");
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("eps must lie in (0, 1)");
  if (!(eps_start > 0.0 && eps_start < 1.0 && eps_end > 0.0 && eps_end <= eps_start))
    throw ValidationError("need 0 < eps_end <= eps_start < 1");
  if (rungs < 1 || rungs > 64) throw ValidationError("rungs must lie in [1, 64]");
  if (!(tol > 0.0)) throw ValidationError("tol must be > 0");
  if (threads < 1) throw ValidationError("threads must be >= 1");
  if (out.empty()) throw ValidationError("output directory must not be empty");
  if (points < 2 || points > 1001) throw ValidationError("points must lie in [2, 1001]");
  if (!(d_min > 0.0 && d_min < d_max && t_min > 0.0 && t_min < t_max)) throw ValidationError("invalid search box");
}

Json to_json(const JobConfig& c) {
  Json j;
  j["command"] = c.command;
  j["n"] = c.n;
  j["m"] = c.m;
  j["inner"] = c.inner;
  j["outer"] = c.outer;
  j["nr"] = c.nr;
  j["nphi"] = c.nphi;
  j["cells_per_delta"] = c.cells_per_delta;
  j["eps"] = c.eps;
  j["eps_start"] = c.eps_start;
  j["eps_end"] = c.eps_end;
  j["rungs"] = c.rungs;
  j["case"] = c.kase;
  j["coeffs"] = c.coeffs;
  j["tol"] = c.tol;
  j["out"] = c.out;
  j["threads"] = c.threads;
  j["seed"] = c.seed;
  j["what"] = c.what;
  j["field"] = c.field;
  j["points"] = c.points;
  j["d_min"] = c.d_min;
  j["d_max"] = c.d_max;
  j["t_min"] = c.t_min;
  j["t_max"] = c.t_max;
  return j;
}

}  // namespace lanemden::cli
