#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pixhom/fem.hpp"
#include "pixhom/geometry.hpp"
#include "pixhom/homogenization.hpp"
#include "pixhom/material.hpp"

namespace pixhom {

enum class Route { ClosedForm, LineIntegral, DerivativeLine };

const char* to_string(Route route);

/// Geometric constants A1, A2, A3 separating the effective compliances into
/// local and geometric factors: 1/K* = 1/K + A1 (1/K + 1/G), and likewise
/// A2 for 1/G*, A3 for 1/G*_45.
struct VigdergauzConstants {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  Route route = Route::ClosedForm;

  std::array<double, 3> values() const { return {a1, a2, a3}; }
};

/// Line-integral route yields A1 and A2 only.
struct LineConstants {
  double a1 = 0.0;
  double a2 = 0.0;
};

/// An average stress component counts as zero below this times ||eta||.
inline constexpr double kZeroAverageThreshold = 1e-9;
/// Denominator floor for relative spreads of the constants.
inline constexpr double kConstantSpreadFloor = 1e-3;

VigdergauzConstants constants_closed_form(const IsotropicModuli& m, const EffectiveModuli& eff);

/**
 * A1, A2 from the uniaxial solution (average stress (s, 0, 0)):
 * L1 is the chosen horizontal line average of s11, L2 the chosen vertical
 * line average of s22, and
 *   a1 = (L1 + L2) / (2 <s11>) - 1/2,  a2 = (L1 - L2) / (2 <s11>) - 1/2.
 *
 * Throws NotApplicableError without transversal lines and
 * std::invalid_argument when the loading is not uniaxial.
 */
LineConstants constants_line_integral(const CellSolution& sol11, const CellGeometry& g, const TransversalLines& lines);

/**
 * A3 from the pure-shear solution: (D1 + D2) / (4 <s12>) where D1, D2 are
 * the trace-derivative line integrals over the stencil row and column, each
 * measured from their common corner.
 */
double constant_a3_derivative(const CellSolution& sol12, const CellGeometry& g, const TransversalLines& lines);

/// A_i - (1 - rho) / rho; nonnegative iff the Hashin-Shtrikman bound holds.
std::array<double, 3> hs_bound_margin(double rho, const VigdergauzConstants& constants);

/// Effective compliance eigenvalues written through the constants:
/// 1/(2K*), 1/(2G*), 1/G*_45.
std::array<double, 3> compliance_eigenvalues(const IsotropicModuli& m, const VigdergauzConstants& constants);

struct EigenvalueCheck {
  std::array<double, 3> formula{};   ///< ascending
  std::array<double, 3> spectrum{};  ///< ascending, of the inverse effective matrix
  double max_relative_difference = 0.0;
};

/// Compares compliance_eigenvalues with the spectrum of C*^-1.
EigenvalueCheck check_eigenvalues(const IsotropicModuli& m, const EffectiveTensor& tensor);

/// (max - min) / max(|mean|, floor); zero for fewer than two values.
double relative_spread(std::span<const double> values, double floor = kConstantSpreadFloor);

struct IndependenceReport {
  std::vector<IsotropicModuli> moduli_samples;
  std::vector<VigdergauzConstants> constants_per_sample;
  std::vector<MacroStress> loadings;
  /// Relative spread of A1, A2, A3 across samples.
  std::array<double, 3> relative_spread{};
  /// Per loading: max over sample pairs of the relative L2 stress difference.
  std::vector<double> stress_field_spread;

  double max_stress_field_spread() const;
};

/// Solves every sample once (three unit solves each) and compares.
/// Requires at least two samples and one loading.
IndependenceReport independence_report(const CellGeometry& g, std::span<const IsotropicModuli> samples,
                                       std::span<const MacroStress> loadings, const SolverOptions& opts = {},
                                       double symmetry_tolerance = kDefaultSymmetryTolerance);

/// Same, reusing already computed homogenizations (one per sample).
IndependenceReport independence_report(const CellGeometry& g, std::span<const IsotropicModuli> samples,
                                       std::span<const Homogenization> solved,
                                       std::span<const MacroStress> loadings);

std::vector<IsotropicModuli> default_moduli_samples();

/// Result of one line-based route, or the reason it could not run.
template <typename T>
struct RouteResult {
  std::optional<T> value;
  std::string not_applicable;
};

/// Constants by every route, bounds, eigenvalues and independence for one geometry.
struct VigdergauzReport {
  double rho = 1.0;
  IsotropicModuli moduli{1.0, 1.0};
  EffectiveTensor tensor;
  VigdergauzConstants closed_form;
  RouteResult<LineConstants> line_integral;
  RouteResult<double> a3_derivative;
  std::array<double, 3> hs_margin{};
  EigenvalueCheck eigenvalues;
  /// Present when two or more samples were given.
  std::optional<IndependenceReport> independence;

  bool line_routes_applicable() const { return line_integral.value && a3_derivative.value; }
};

/// The first sample drives the route comparison; all samples feed the
/// independence report.
VigdergauzReport vigdergauz_report(const CellGeometry& g, std::span<const IsotropicModuli> samples,
                                   std::span<const MacroStress> loadings, const SolverOptions& opts = {},
                                   double symmetry_tolerance = kDefaultSymmetryTolerance);

/// Same, from homogenizations already computed for every sample.
VigdergauzReport vigdergauz_report(const CellGeometry& g, std::span<const IsotropicModuli> samples,
                                   std::span<const Homogenization> solved, std::span<const MacroStress> loadings);

}  // namespace pixhom
