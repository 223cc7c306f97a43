#pragma once

#include <span>

#include "pixhom/fem.hpp"
#include "pixhom/geometry.hpp"

namespace pixhom {

/// Residuals below this are treated as converged when judging refinement.
inline constexpr double kRefinementNoiseFloor = 1e-8;
/// Smallest scale used to normalize residuals.
inline constexpr double kResidualScaleFloor = 1e-14;

/// Spectral norm of the symmetric 2x2 tensor (a11, a22, a12).
double symmetric_norm(double a11, double a22, double a12);

/**
 * Line averages against cell averages, each divided by the spectral norm of
 * the average stress:
 *   <s11> vs a vertical line, <s22> vs a horizontal line, <s12> vs both.
 * The independence fields hold (max - min) / scale of the same line
 * averages over every transversal line of that direction.
 */
struct Lemma1Residuals {
  double sigma11_vertical = 0.0;
  double sigma22_horizontal = 0.0;
  double sigma12_horizontal = 0.0;
  double sigma12_vertical = 0.0;
  /// Horizontal against vertical line average of s12.
  double sigma12_between_lines = 0.0;
  double independence_sigma11_cols = 0.0;
  double independence_sigma22_rows = 0.0;
  double independence_sigma12_rows = 0.0;
  double independence_sigma12_cols = 0.0;
  double scale = 0.0;
  int row = 0;
  int col = 0;

  double max_line_residual() const;
  double max_independence() const;
  double max() const;
};

/// Quasiperiod normal components rebuilt from line averages of the normal
/// stress along the line of the same direction and the cell average of the
/// other normal stress. Residuals are relative to the spectral norm of xi.
struct Lemma2NormalResiduals {
  double xi11_reconstructed = 0.0;
  double xi22_reconstructed = 0.0;
  double xi11 = 0.0;
  double xi22 = 0.0;
  double scale = 0.0;
  int row = 0;
  int col = 0;

  double max() const { return xi11 > xi22 ? xi11 : xi22; }
};

/// xi12 = <s12> / (2G) + (1/8)(1/K + 1/G)(D1 + D2).
struct Lemma2ShearResiduals {
  double d1 = 0.0;
  double d2 = 0.0;
  double xi12_reconstructed = 0.0;
  double xi12 = 0.0;
  double scale = 0.0;
  int row = 0;
  int col = 0;
};

/// Throws NotApplicableError without transversal lines in both directions.
Lemma1Residuals check_lemma1(const CellSolution& sol, const CellGeometry& g, const TransversalLines& lines);
Lemma2NormalResiduals check_lemma2_normal(const CellSolution& sol, const CellGeometry& g, const TransversalLines& lines);
/// Uses the stencil row and column; throws NotApplicableError when blocked.
Lemma2ShearResiduals check_lemma2_shear(const CellSolution& sol, const CellGeometry& g, const TransversalLines& lines);

/**
 * True when every consecutive pair (coarse, fine) satisfies
 * coarse >= ratio * fine, or fine <= noise_floor (already at solver noise).
 */
bool refinement_decreasing(std::span<const double> values, double ratio = 1.5,
                           double noise_floor = kRefinementNoiseFloor);

}  // namespace pixhom
