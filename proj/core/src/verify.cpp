#include "pixhom/verify.hpp"

#include <algorithm>
#include <cmath>

#include "pixhom/errors.hpp"

namespace pixhom {

namespace {

void require_lines(const TransversalLines& lines) {
  if (!lines.applicable()) throw NotApplicableError("not applicable: no transversal lines in both directions");
}

// (max - min) / scale of one component over the listed lines.
double line_variation(const CellSolution& sol, const CellGeometry& g, Axis axis, const std::vector<int>& indices,
                      int component, double scale) {
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (int k : indices) {
    const double v = line_average_stress(sol, g, axis, k)(component);
    lo = first ? v : std::min(lo, v);
    hi = first ? v : std::max(hi, v);
    first = false;
  }
  return (hi - lo) / scale;
}

}  // namespace

double symmetric_norm(double a11, double a22, double a12) {
  const double mean = 0.5 * (a11 + a22);
  const double radius = std::hypot(0.5 * (a11 - a22), a12);
  return std::abs(mean) + radius;
}

double Lemma1Residuals::max_line_residual() const {
  return std::max({sigma11_vertical, sigma22_horizontal, sigma12_horizontal, sigma12_vertical, sigma12_between_lines});
}

double Lemma1Residuals::max_independence() const {
  return std::max({independence_sigma11_cols, independence_sigma22_rows, independence_sigma12_rows,
                   independence_sigma12_cols});
}

double Lemma1Residuals::max() const { return std::max(max_line_residual(), max_independence()); }

Lemma1Residuals check_lemma1(const CellSolution& sol, const CellGeometry& g, const TransversalLines& lines) {
  require_lines(lines);
  Lemma1Residuals r;
  r.row = *lines.chosen_row;
  r.col = *lines.chosen_col;
  const Voigt3 avg = average_stress(sol, g);
  r.scale = std::max(kResidualScaleFloor, symmetric_norm(avg(0), avg(1), avg(2)));
  const Voigt3 horizontal = line_average_stress(sol, g, Axis::Horizontal, r.row);
  const Voigt3 vertical = line_average_stress(sol, g, Axis::Vertical, r.col);
  r.sigma11_vertical = std::abs(vertical(0) - avg(0)) / r.scale;
  r.sigma22_horizontal = std::abs(horizontal(1) - avg(1)) / r.scale;
  r.sigma12_horizontal = std::abs(horizontal(2) - avg(2)) / r.scale;
  r.sigma12_vertical = std::abs(vertical(2) - avg(2)) / r.scale;
  r.sigma12_between_lines = std::abs(horizontal(2) - vertical(2)) / r.scale;
  r.independence_sigma11_cols = line_variation(sol, g, Axis::Vertical, lines.cols, 0, r.scale);
  r.independence_sigma12_cols = line_variation(sol, g, Axis::Vertical, lines.cols, 2, r.scale);
  r.independence_sigma22_rows = line_variation(sol, g, Axis::Horizontal, lines.rows, 1, r.scale);
  r.independence_sigma12_rows = line_variation(sol, g, Axis::Horizontal, lines.rows, 2, r.scale);
  return r;
}

Lemma2NormalResiduals check_lemma2_normal(const CellSolution& sol, const CellGeometry& g,
                                          const TransversalLines& lines) {
  require_lines(lines);
  Lemma2NormalResiduals r;
  r.row = *lines.chosen_row;
  r.col = *lines.chosen_col;
  const double ik = 1.0 / sol.moduli.bulk();
  const double ig = 1.0 / sol.moduli.shear();
  const Voigt3 avg = average_stress(sol, g);
  const double l11 = line_average_stress(sol, g, Axis::Horizontal, r.row)(0);
  const double l22 = line_average_stress(sol, g, Axis::Vertical, r.col)(1);
  r.xi11_reconstructed = 0.25 * ik * (l11 + avg(1)) + 0.25 * ig * (l11 - avg(1));
  r.xi22_reconstructed = 0.25 * ik * (l22 + avg(0)) + 0.25 * ig * (l22 - avg(0));
  const Quasiperiod& xi = sol.quasiperiod;
  r.scale = std::max(kResidualScaleFloor, symmetric_norm(xi.xi11, xi.xi22, xi.xi12));
  r.xi11 = std::abs(xi.xi11 - r.xi11_reconstructed) / r.scale;
  r.xi22 = std::abs(xi.xi22 - r.xi22_reconstructed) / r.scale;
  return r;
}

Lemma2ShearResiduals check_lemma2_shear(const CellSolution& sol, const CellGeometry& g,
                                        const TransversalLines& lines) {
  require_lines(lines);
  if (!lines.stencil_applicable()) throw NotApplicableError("derivative stencil blocked");
  Lemma2ShearResiduals r;
  r.row = *lines.stencil_row;
  r.col = *lines.stencil_col;
  r.d1 = trace_derivative_line_integral(sol, g, Axis::Horizontal, r.row, r.col);
  r.d2 = trace_derivative_line_integral(sol, g, Axis::Vertical, r.col, r.row);
  const Voigt3 avg = average_stress(sol, g);
  r.xi12_reconstructed = avg(2) / (2.0 * sol.moduli.shear()) + 0.125 * sol.moduli.compliance_sum() * (r.d1 + r.d2);
  const Quasiperiod& xi = sol.quasiperiod;
  r.scale = std::max(kResidualScaleFloor, symmetric_norm(xi.xi11, xi.xi22, xi.xi12));
  r.xi12 = std::abs(xi.xi12 - r.xi12_reconstructed) / r.scale;
  return r;
}

bool refinement_decreasing(std::span<const double> values, double ratio, double noise_floor) {
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double coarse = values[k - 1];
    const double fine = values[k];
    if (!std::isfinite(coarse) || !std::isfinite(fine)) return false;
    if (fine <= noise_floor) continue;
    if (!(coarse >= ratio * fine)) return false;
  }
  return true;
}

}  // namespace pixhom
