#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pixhom/geometry.hpp"
#include "pixhom/material.hpp"

namespace pixhom {

/// Macroscopic strain xi of a quasiperiodic displacement u = xi x + v.
struct Quasiperiod {
  double xi11 = 0.0;
  double xi22 = 0.0;
  double xi12 = 0.0;

  /// (xi11, xi22, 2 xi12)
  Voigt3 voigt() const { return {xi11, xi22, 2.0 * xi12}; }
  static Quasiperiod from_voigt(const Voigt3& v) { return {v(0), v(1), 0.5 * v(2)}; }
};

/**
 * Element used on every grid cell. Both are 4-node bilinear quadrilaterals
 * with 2x2 Gauss quadrature. IncompatibleModes adds the two element-internal
 * modes (1 - s^2) and (1 - t^2) per displacement component, condensed out
 * element by element, which removes the parasitic shear of the plain element
 * under bending. The internal modes vanish on element edges, so nodal
 * fluctuations, periodicity and line integrals of the displacement
 * gradient are unchanged.
 */
enum class ElementFormulation { Bilinear, IncompatibleModes };

struct SolverOptions {
  double rel_tolerance = 1e-10;
  /// Defaults to 20 times the number of unknowns.
  std::optional<long> max_iterations;
  /// Dense direct factorization instead of preconditioned CG.
  bool use_oracle = false;
  ElementFormulation element = ElementFormulation::IncompatibleModes;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct SolverStats {
  long iterations = 0;
  double relative_residual = 0.0;
  bool direct = false;
};

/// Values at the 2x2 Gauss points of an element, ordered
/// (-,-), (+,-), (+,+), (-,+) in local coordinates.
using GaussPointValues = std::array<Voigt3, 4>;

enum class Axis { Horizontal, Vertical };

/**
 * Discrete minimizer of the cell energy for one prescribed quasiperiod.
 *
 * Node (i, j) sits at the lower-left corner of element (i, j); nodes on the
 * right and top faces are identified with those on the left and bottom.
 * Field arrays are sized for the full grid; hole elements carry zero
 * strain and stress, nodes touching no material carry zero fluctuation.
 */
struct CellSolution {
  Quasiperiod quasiperiod;
  IsotropicModuli moduli{1.0, 1.0};
  ElementFormulation element = ElementFormulation::IncompatibleModes;
  int nx = 0;
  int ny = 0;
  std::vector<Eigen::Vector2d> fluctuation;
  std::vector<std::uint8_t> active;
  std::vector<GaussPointValues> strain;
  std::vector<GaussPointValues> stress;
  /// 1/2 of the integral of strain . stress over the material.
  double energy = 0.0;
  SolverStats stats;
};

CellSolution solve_cell_problem(const CellGeometry& g, const IsotropicModuli& m, const Quasiperiod& xi,
                                const SolverOptions& opts = {});

/// |Y|^-1 times the integral of the stress over the material.
Voigt3 average_stress(const CellSolution& sol, const CellGeometry& g);
Voigt3 average_strain(const CellSolution& sol, const CellGeometry& g);

/// Stress inside material element (i, j) at local coordinates (s, t) in [-1, 1]^2.
Voigt3 stress_at(const CellSolution& sol, const CellGeometry& g, int i, int j, double s, double t);

/// Average stress along the mid-line of a fully material element row
/// (Horizontal) or column (Vertical). Throws NotApplicableError otherwise.
Voigt3 line_average_stress(const CellSolution& sol, const CellGeometry& g, Axis axis, int index);

/**
 * Line average of d(Tr sigma)/d(normal) times the tangential coordinate.
 *
 * The line is the mid-line of row (Horizontal) or column (Vertical) `index`.
 * It starts at the mid-line of the perpendicular column/row `anchor` and
 * runs one period, so the tangential coordinate lies in [0, l). The normal
 * derivative is the centered difference of Tr sigma between the mid-lines of
 * the two neighbouring rows/columns, all of which must be fully material.
 */
double trace_derivative_line_integral(const CellSolution& sol, const CellGeometry& g, Axis axis, int index,
                                      int anchor);

/// sum_k coeffs[k] * parts[k]; all parts must share geometry and moduli.
CellSolution linear_combination(std::span<const CellSolution* const> parts, std::span<const double> coeffs,
                                const CellGeometry& g);

/// Square root of the integral of strain . stress over the material.
double energy_norm(const CellSolution& sol, const CellGeometry& g);
/// Energy norm of (a - b) divided by the energy norm of a.
double relative_energy_difference(const CellSolution& a, const CellSolution& b, const CellGeometry& g);
/// Relative L2 distance of the two stress fields, normalized by the mean of
/// their L2 norms.
double relative_stress_difference(const CellSolution& a, const CellSolution& b, const CellGeometry& g);

}  // namespace pixhom
