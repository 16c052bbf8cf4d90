#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lanemden/continuation.hpp"
#include "lanemden/expansion.hpp"
#include "lanemden/gamma_constants.hpp"
#include "lanemden/green.hpp"
#include "lanemden/lemmas.hpp"
#include "lanemden/reduced_energy.hpp"
#include "lanemden/solver.hpp"
#include "lanemden/transform.hpp"

namespace lanemden {

using Json = nlohmann::ordered_json;

// %.17g; every double written to CSV goes through this.
std::string format_double(double x);

// Writes pretty JSON followed by a newline.
void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

// Field CSV with header "r,phi,value", r-major, plus a JSON sidecar holding
// the geometry, the exact node coordinates and the symmetry tag.
void write_field(const std::filesystem::path& csv, const std::filesystem::path& sidecar, const MeridianField& u);
MeridianField read_field(const std::filesystem::path& csv, const std::filesystem::path& sidecar);

// CSV "s,t,value" over the samples inside A.
void write_lifted(const std::filesystem::path& csv, const LiftedField& v);

// Landscape of Phi over a tensor grid: "d,t,phi" (single) or
// "d1,t1,d2,t2,phi" (pair, one row per parameter tuple).
void write_landscape(const std::filesystem::path& csv, PhiCase c, const std::vector<std::vector<double>>& params,
                     const std::vector<double>& values);

Json to_json(const GammaConstants& g);
Json gamma_report(const GammaConstants& quadrature, const GammaConstants& closed_form);
Json to_json(const EnergyExpansion& e);
EnergyExpansion expansion_from_json(const Json& j);
Json to_json(const CriticalPoint& cp);
Json to_json(const GridSearchResult& g);
Json to_json(const FitReport& r);
Json to_json(const LemmaReport& r);
Json to_json(const SlopeCheck& s);
Json to_json(const ProjectionExpansionCheck& p);
Json to_json(const BlowupFit& fit);
Json to_json(const SolveResult& r);
Json to_json(const CorrespondenceReport& r);
Json to_json(const LiftedResidual& r);
Json to_json(const SphereConcentration& s);
Json to_json(const AnnulusGeometry& g);

}  // namespace lanemden
