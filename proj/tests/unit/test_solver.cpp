#include <doctest.h>

#include <cmath>

#include <lanemden/continuation.hpp>
#include <lanemden/expansion.hpp>
#include <lanemden/solver.hpp>

using namespace lanemden;

TEST_CASE("theorem case parsing and branch shapes") {
  CHECK(theorem_case_from_string("v+") == TheoremCase::v_plus);
  CHECK(theorem_case_from_string("v_minus") == TheoremCase::v_minus);
  CHECK_THROWS_AS(theorem_case_from_string("vi"), ValidationError);
  const BranchSpec ii = BranchSpec::make(TheoremCase::ii);
  CHECK(ii.lambda == 1);
  CHECK(ii.symmetry == Symmetry::even);
  const BranchSpec iii = BranchSpec::make(TheoremCase::iii);
  CHECK(iii.lambda == -1);
  CHECK(iii.symmetry == Symmetry::odd);
  const BranchSpec iv = BranchSpec::make(TheoremCase::iv);
  CHECK(iv.pairs == 2);
  CHECK(iv.signs == std::vector<int>{1, -1});
}

TEST_CASE("geometric ladder endpoints and ratio") {
  const auto l = geometric_ladder(0.2, 0.0125, 5);
  REQUIRE(l.size() == 5);
  CHECK(l.front() == 0.2);
  CHECK(l.back() == doctest::Approx(0.0125).epsilon(1e-14));
  for (std::size_t k = 1; k < l.size(); ++k) CHECK(l[k] / l[k - 1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("residual of the zero field vanishes") {
  const GridPtr g = MeridianGrid::uniform(AnnulusGeometry{3, 1.0, 3.0}, 17, 9);
  CHECK(residual_inf(MeridianField(g), 0.1) == 0.0);
}

TEST_CASE("case i solve at eps = 0.1 concentrates near the inner sphere") {
  const BranchSpec spec = BranchSpec::make(TheoremCase::i);
  const auto pairs = critical_pairs(spec, assembled_coefficients(3, AmplitudeMode::weighted, 0));
  const Rung r = solve_branch(spec, AnnulusGeometry{3, 1.0, 3.0}, 0.1, pairs);
  CHECK(r.result.residual_inf < 1e-8);
  REQUIRE(r.result.diagnostics.peaks.size() == 1);
  const Peak& p = r.result.diagnostics.peaks[0];
  CHECK(p.amplitude > 0.0);
  CHECK(p.z > 1.0);
  CHECK(p.z < 1.1);
  CHECK(nodal_domains(r.result.field) == 1);
}
