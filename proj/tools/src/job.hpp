#pragma once

#include <cstdint>
#include <string>

#include <lanemden/io.hpp>

namespace lanemden::cli {

// Everything a command may read.  Defaults are filled first, then a JSON
// config file, then explicit flags.
struct JobConfig {
  std::string command;
  int n = 3;
  int m = 2;
  double inner = 1.0;
  double outer = 3.0;
  int nr = 257;
  int nphi = 129;
  double cells_per_delta = 32.0;
  double eps = 0.05;
  double eps_start = 0.2;
  double eps_end = 0.0125;
  int rungs = 5;
  std::string kase = "i";
  std::string coeffs;  // empty: command default
  double tol = 1e-8;
  std::string out = "out";
  int threads = 1;
  std::uint64_t seed = 1;
  std::string what = "all";
  std::string field;
  int points = 41;
  double d_min = 1e-2, d_max = 1e2, t_min = 1e-2, t_max = 1e2;

  AnnulusGeometry geometry() const { return {n, inner, outer}; }
  void validate() const;
};

// Keys mirror the long flag names with '-' replaced by '_'; "grid" takes
// "NRxNPHI".  Unknown keys are rejected.
void apply_json(JobConfig& cfg, const Json& j);
void apply_grid(JobConfig& cfg, const std::string& spec);
Json to_json(const JobConfig& cfg);

}  // namespace lanemden::cli
