#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include <lanemden/error.hpp>
#include <lanemden/io.hpp>

#include "job.hpp"
#include "manifest.hpp"

using namespace lanemden;

namespace {
std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "lanemden_unit";
  std::filesystem::create_directories(dir);
  return dir / name;
}
}  // namespace

TEST_CASE("format_double round trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("field CSV and sidecar round trip bit for bit") {
  std::vector<double> r{1.0, 1.1, 1.3, 1.6, 1.9, 2.1, 2.5, 2.8, 3.0};
  const GridPtr base = MeridianGrid::uniform(AnnulusGeometry{3, 1.0, 3.0}, 9, 9);
  const auto phi = base->phi();
  const GridPtr g = MeridianGrid::from_nodes(AnnulusGeometry{3, 1.0, 3.0}, r, {phi.begin(), phi.end()});
  MeridianField u = MeridianField::sample(g, [](double r, double phi) { return std::exp(r) * std::cos(phi) / 3.0; });
  const auto csv = scratch("u.csv"), side = scratch("u.json");
  write_field(csv, side, u);
  const MeridianField v = read_field(csv, side);
  REQUIRE(v.grid().nr() == 9);
  REQUIRE(v.grid().nphi() == 9);
  for (std::size_t k = 0; k < u.values().size(); ++k) CHECK(v.values()[k] == u.values()[k]);
  for (int i = 0; i < 9; ++i) CHECK(v.grid().r(i) == g->r(i));
}

TEST_CASE("malformed JSON is a validation error") {
  const auto p = scratch("bad.json");
  std::ofstream(p) << "{\"n\": 3,";
  CHECK_THROWS_AS(read_json(p), ValidationError);
}

TEST_CASE("expansion coefficients survive JSON") {
  EnergyExpansion e = EnergyExpansion::unit(4);
  e.c = {1.5, -2.0, 0.25, 3.0, 4.0, 5.0};
  const EnergyExpansion f = expansion_from_json(to_json(e));
  CHECK(f.n == 4);
  for (int k = 0; k < 6; ++k) CHECK(f.c[k] == e.c[k]);
}

TEST_CASE("job config: defaults, JSON overlay and grid parsing") {
  cli::JobConfig cfg;
  cli::apply_json(cfg, Json::parse(R"({"n": 4, "grid": "129x65", "case": "iii", "eps_start": 0.1})"));
  CHECK(cfg.n == 4);
  CHECK(cfg.nr == 129);
  CHECK(cfg.nphi == 65);
  CHECK(cfg.kase == "iii");
  CHECK(cfg.eps_start == 0.1);
  CHECK(cfg.eps_end == 0.0125);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("job config rejects bad input") {
  cli::JobConfig cfg;
  CHECK_THROWS_AS(cli::apply_json(cfg, Json::parse(R"({"bogus": 1})")), ValidationError);
  CHECK_THROWS_AS(cli::apply_json(cfg, Json::parse(R"({"n": "three"})")), ValidationError);
  CHECK_THROWS_AS(cli::apply_grid(cfg, "129by65"), ValidationError);
  CHECK_THROWS_AS(cli::apply_grid(cfg, "129x6.5"), ValidationError);
  cfg = {};
  cfg.n = 2;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.nphi = 128;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.eps_end = 0.5;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("sha256 of known strings") {
  CHECK(cli::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
