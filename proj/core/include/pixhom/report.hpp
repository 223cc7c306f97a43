#pragma once

#include <optional>

#include <nlohmann/json.hpp>

#include "pixhom/fem.hpp"
#include "pixhom/geometry.hpp"
#include "pixhom/homogenization.hpp"
#include "pixhom/verify.hpp"
#include "pixhom/vigdergauz.hpp"

namespace pixhom {

/// Library version string, also echoed under "meta".
const char* version();

nlohmann::json geometry_json(const CellGeometry& g);

/// "effective_matrix" (row-major), "K_star", "G_star", "G45_star",
/// "symmetry_residual".
nlohmann::json effective_json(const EffectiveTensor& tensor);

/// "A1", "A2", "A3" per route, "spread", "hs_margin", "rho",
/// "eigenvalue_check". Routes that did not run are null with a reason.
nlohmann::json vigdergauz_json(const VigdergauzReport& report);

nlohmann::json lemma1_json(const Lemma1Residuals& r);
nlohmann::json lemma2_normal_json(const Lemma2NormalResiduals& r);
nlohmann::json lemma2_shear_json(const Lemma2ShearResiduals& r);

/// Per-node fluctuation and per-element Gauss-point fields:
/// "xi", "energy", "fluctuation", "strain", "stress".
nlohmann::json field_dump_json(const CellSolution& sol);

nlohmann::json voigt_json(const Voigt3& v);
nlohmann::json moduli_json(const IsotropicModuli& m);
nlohmann::json macro_stress_json(const MacroStress& s);

}  // namespace pixhom
