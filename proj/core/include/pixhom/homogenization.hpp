#pragma once

#include <array>

#include "pixhom/fem.hpp"
#include "pixhom/geometry.hpp"
#include "pixhom/material.hpp"

namespace pixhom {

inline constexpr double kDefaultSymmetryTolerance = 1e-6;

/// Averaged stress per unit (xi11, xi22, 2 xi12), with the square-symmetric
/// moduli read off it.
struct EffectiveTensor {
  VoigtMatrix3 matrix = VoigtMatrix3::Zero();
  double k_star = 0.0;
  double g_star = 0.0;
  double g45_star = 0.0;
  /// max(|C11-C22|, |C13|, |C23|, |C31|, |C32|, |C12-C21|) / ||C||_F
  double symmetry_residual = 0.0;

  EffectiveModuli moduli() const { return {k_star, g_star, g45_star}; }
};

/// Target cell-average stress (s11, s22, s12).
struct MacroStress {
  double s11 = 0.0;
  double s22 = 0.0;
  double s12 = 0.0;

  Voigt3 voigt() const { return {s11, s22, s12}; }
};

struct Homogenization {
  EffectiveTensor tensor;
  /// Solves for xi-vectors e1, e2, e3 in (xi11, xi22, 2 xi12) coordinates.
  std::array<CellSolution, 3> unit;
};

double symmetry_residual(const VoigtMatrix3& c);

/// Three unit solves and the averaged-stress matrix; no symmetry check.
Homogenization compute_effective_matrix(const CellGeometry& g, const IsotropicModuli& m, const SolverOptions& opts = {});

/// Fills k_star, g_star, g45_star. Throws SymmetryError when the residual
/// exceeds `symmetry_tolerance`, NotPositiveDefiniteError when a modulus is
/// not positive.
void extract_moduli(EffectiveTensor& tensor, double symmetry_tolerance = kDefaultSymmetryTolerance);

Homogenization effective_tensor(const CellGeometry& g, const IsotropicModuli& m, const SolverOptions& opts = {},
                                double symmetry_tolerance = kDefaultSymmetryTolerance);

/// Superposes the unit solves so the average stress equals `eta`.
/// Throws SolverError when the effective matrix is singular.
CellSolution solve_stress_controlled(const Homogenization& h, const CellGeometry& g, const MacroStress& eta);

/// Uniaxial (1,0,0), hydrostatic (1,1,0) and shear (0,0,1) average stresses.
std::array<MacroStress, 3> hydrostatic_and_shear_loadings();

}  // namespace pixhom
