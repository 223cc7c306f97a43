#include "pixhom/homogenization.hpp"

#include <algorithm>
#include <cmath>

#include "pixhom/errors.hpp"

namespace pixhom {

double symmetry_residual(const VoigtMatrix3& c) {
  const double norm = c.norm();
  if (norm == 0.0) return 0.0;
  const double r = std::max({std::abs(c(0, 0) - c(1, 1)), std::abs(c(0, 2)), std::abs(c(1, 2)), std::abs(c(2, 0)),
                             std::abs(c(2, 1)), std::abs(c(0, 1) - c(1, 0))});
  return r / norm;
}

Homogenization compute_effective_matrix(const CellGeometry& g, const IsotropicModuli& m, const SolverOptions& opts) {
  Homogenization h;
  for (int k = 0; k < 3; ++k) {
    Voigt3 unit = Voigt3::Zero();
    unit(k) = 1.0;
    h.unit[k] = solve_cell_problem(g, m, Quasiperiod::from_voigt(unit), opts);
    h.tensor.matrix.col(k) = average_stress(h.unit[k], g);
  }
  h.tensor.symmetry_residual = symmetry_residual(h.tensor.matrix);
  return h;
}

void extract_moduli(EffectiveTensor& tensor, double symmetry_tolerance) {
  if (!(tensor.symmetry_residual <= symmetry_tolerance)) throw SymmetryError(tensor.symmetry_residual, symmetry_tolerance);
  const VoigtMatrix3& c = tensor.matrix;
  const double c11 = 0.5 * (c(0, 0) + c(1, 1));
  const double c12 = 0.5 * (c(0, 1) + c(1, 0));
  tensor.k_star = 0.5 * (c11 + c12);
  tensor.g_star = 0.5 * (c11 - c12);
  tensor.g45_star = c(2, 2);
  if (!(tensor.k_star > 0.0) || !(tensor.g_star > 0.0) || !(tensor.g45_star > 0.0)) throw NotPositiveDefiniteError();
}

Homogenization effective_tensor(const CellGeometry& g, const IsotropicModuli& m, const SolverOptions& opts,
                                double symmetry_tolerance) {
  Homogenization h = compute_effective_matrix(g, m, opts);
  extract_moduli(h.tensor, symmetry_tolerance);
  return h;
}

CellSolution solve_stress_controlled(const Homogenization& h, const CellGeometry& g, const MacroStress& eta) {
  const Eigen::FullPivLU<VoigtMatrix3> lu(h.tensor.matrix);
  if (!lu.isInvertible()) throw SolverError("effective matrix is singular");
  const Voigt3 coeffs = lu.solve(eta.voigt());
  const std::array<const CellSolution*, 3> parts{&h.unit[0], &h.unit[1], &h.unit[2]};
  const std::array<double, 3> c{coeffs(0), coeffs(1), coeffs(2)};
  return linear_combination(parts, c, g);
}

std::array<MacroStress, 3> hydrostatic_and_shear_loadings() {
  return {MacroStress{1.0, 0.0, 0.0}, MacroStress{1.0, 1.0, 0.0}, MacroStress{0.0, 0.0, 1.0}};
}

}  // namespace pixhom
