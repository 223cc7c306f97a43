#include "pixhom/vigdergauz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pixhom/errors.hpp"

namespace pixhom {

namespace {

// Largest |component| of the macro stress, with shear counted once.
double loading_scale(const Voigt3& s) {
  return std::max(1e-14, s.cwiseAbs().maxCoeff());
}

std::array<double, 3> sorted(std::array<double, 3> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

const char* to_string(Route route) {
  switch (route) {
    case Route::ClosedForm: return "closed_form";
    case Route::LineIntegral: return "line_integral";
    case Route::DerivativeLine: return "derivative_line";
  }
  return "unknown";
}

VigdergauzConstants constants_closed_form(const IsotropicModuli& m, const EffectiveModuli& eff) {
  if (!(eff.bulk > 0.0) || !(eff.shear > 0.0) || !(eff.shear45 > 0.0)) throw NotPositiveDefiniteError();
  const double s = m.compliance_sum();
  return {(1.0 / eff.bulk - 1.0 / m.bulk()) / s, (1.0 / eff.shear - 1.0 / m.shear()) / s,
          (1.0 / eff.shear45 - 1.0 / m.shear()) / s, Route::ClosedForm};
}

LineConstants constants_line_integral(const CellSolution& sol11, const CellGeometry& g, const TransversalLines& lines) {
  if (!lines.applicable()) throw NotApplicableError("not applicable: no transversal lines in both directions");
  const Voigt3 avg = average_stress(sol11, g);
  const double zero = kZeroAverageThreshold * loading_scale(avg);
  if (std::abs(avg(0)) <= zero) throw std::invalid_argument("uniaxial loading needs a nonzero average s11");
  if (std::abs(avg(1)) > zero || std::abs(avg(2)) > zero) {
    throw std::invalid_argument("uniaxial loading needs zero average s22 and s12");
  }
  const double l1 = line_average_stress(sol11, g, Axis::Horizontal, *lines.chosen_row)(0);
  const double l2 = line_average_stress(sol11, g, Axis::Vertical, *lines.chosen_col)(1);
  return {(l1 + l2) / (2.0 * avg(0)) - 0.5, (l1 - l2) / (2.0 * avg(0)) - 0.5};
}

double constant_a3_derivative(const CellSolution& sol12, const CellGeometry& g, const TransversalLines& lines) {
  if (!lines.applicable()) throw NotApplicableError("not applicable: no transversal lines in both directions");
  if (!lines.stencil_applicable()) throw NotApplicableError("derivative stencil blocked");
  const Voigt3 avg = average_stress(sol12, g);
  const double zero = kZeroAverageThreshold * loading_scale(avg);
  if (std::abs(avg(2)) <= zero) throw std::invalid_argument("shear loading needs a nonzero average s12");
  if (std::abs(avg(0)) > zero || std::abs(avg(1)) > zero) {
    throw std::invalid_argument("shear loading needs zero average s11 and s22");
  }
  const int row = *lines.stencil_row;
  const int col = *lines.stencil_col;
  const double d1 = trace_derivative_line_integral(sol12, g, Axis::Horizontal, row, col);
  const double d2 = trace_derivative_line_integral(sol12, g, Axis::Vertical, col, row);
  return (d1 + d2) / (4.0 * avg(2));
}

std::array<double, 3> hs_bound_margin(double rho, const VigdergauzConstants& constants) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("volume fraction must lie in (0, 1]");
  const double bound = (1.0 - rho) / rho;
  return {constants.a1 - bound, constants.a2 - bound, constants.a3 - bound};
}

std::array<double, 3> compliance_eigenvalues(const IsotropicModuli& m, const VigdergauzConstants& constants) {
  const double k = m.bulk();
  const double g = m.shear();
  return {((k + g) * constants.a1 + g) / (2.0 * k * g), ((k + g) * constants.a2 + k) / (2.0 * k * g),
          ((k + g) * constants.a3 + k) / (k * g)};
}

EigenvalueCheck check_eigenvalues(const IsotropicModuli& m, const EffectiveTensor& tensor) {
  EigenvalueCheck check;
  const VigdergauzConstants a = constants_closed_form(m, tensor.moduli());
  check.formula = sorted(compliance_eigenvalues(m, a));
  const VoigtMatrix3 compliance = tensor.matrix.inverse();
  const Eigen::SelfAdjointEigenSolver<VoigtMatrix3> eig(0.5 * (compliance + compliance.transpose()),
                                                        Eigen::EigenvaluesOnly);
  const Voigt3 ev = eig.eigenvalues();
  check.spectrum = sorted({ev(0), ev(1), ev(2)});
  for (int i = 0; i < 3; ++i) {
    const double scale = std::max(std::abs(check.spectrum[i]), std::abs(check.formula[i]));
    const double diff = std::abs(check.spectrum[i] - check.formula[i]);
    check.max_relative_difference = std::max(check.max_relative_difference, scale > 0.0 ? diff / scale : diff);
  }
  return check;
}

double relative_spread(std::span<const double> values, double floor) {
  if (values.size() < 2) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  return (*hi - *lo) / std::max(std::abs(mean), floor);
}

double IndependenceReport::max_stress_field_spread() const {
  double m = 0.0;
  for (double s : stress_field_spread) m = std::max(m, s);
  return m;
}

IndependenceReport independence_report(const CellGeometry& g, std::span<const IsotropicModuli> samples,
                                       std::span<const Homogenization> solved,
                                       std::span<const MacroStress> loadings) {
  if (samples.size() < 2) throw std::invalid_argument("independence needs at least two moduli samples");
  if (solved.size() != samples.size()) throw std::invalid_argument("one homogenization per sample required");
  if (loadings.empty()) throw std::invalid_argument("independence needs at least one loading");

  IndependenceReport report;
  report.moduli_samples.assign(samples.begin(), samples.end());
  report.loadings.assign(loadings.begin(), loadings.end());
  for (std::size_t s = 0; s < samples.size(); ++s) {
    report.constants_per_sample.push_back(constants_closed_form(samples[s], solved[s].tensor.moduli()));
  }
  for (int c = 0; c < 3; ++c) {
    std::vector<double> v;
    for (const auto& a : report.constants_per_sample) v.push_back(a.values()[c]);
    report.relative_spread[c] = relative_spread(v);
  }
  for (const MacroStress& eta : loadings) {
    std::vector<CellSolution> fields;
    for (const Homogenization& h : solved) fields.push_back(solve_stress_controlled(h, g, eta));
    double spread = 0.0;
    for (std::size_t a = 0; a < fields.size(); ++a) {
      for (std::size_t b = a + 1; b < fields.size(); ++b) {
        spread = std::max(spread, relative_stress_difference(fields[a], fields[b], g));
      }
    }
    report.stress_field_spread.push_back(spread);
  }
  return report;
}

IndependenceReport independence_report(const CellGeometry& g, std::span<const IsotropicModuli> samples,
                                       std::span<const MacroStress> loadings, const SolverOptions& opts,
                                       double symmetry_tolerance) {
  if (samples.size() < 2) throw std::invalid_argument("independence needs at least two moduli samples");
  std::vector<Homogenization> solved;
  for (const auto& m : samples) solved.push_back(effective_tensor(g, m, opts, symmetry_tolerance));
  return independence_report(g, samples, solved, loadings);
}

std::vector<IsotropicModuli> default_moduli_samples() {
  return {IsotropicModuli(1.0, 1.0), IsotropicModuli(3.0, 1.0), IsotropicModuli(1.0, 4.0)};
}

VigdergauzReport vigdergauz_report(const CellGeometry& g, std::span<const IsotropicModuli> samples,
                                   std::span<const MacroStress> loadings, const SolverOptions& opts,
                                   double symmetry_tolerance) {
  if (samples.empty()) throw std::invalid_argument("at least one moduli sample required");
  std::vector<Homogenization> solved;
  for (const auto& m : samples) solved.push_back(effective_tensor(g, m, opts, symmetry_tolerance));
  return vigdergauz_report(g, samples, solved, loadings);
}

VigdergauzReport vigdergauz_report(const CellGeometry& g, std::span<const IsotropicModuli> samples,
                                   std::span<const Homogenization> solved, std::span<const MacroStress> loadings) {
  if (samples.empty() || solved.size() != samples.size()) {
    throw std::invalid_argument("one homogenization per moduli sample required");
  }
  VigdergauzReport report;
  report.rho = volume_fraction(g);
  report.moduli = samples.front();
  report.tensor = solved.front().tensor;
  report.closed_form = constants_closed_form(report.moduli, report.tensor.moduli());
  report.hs_margin = hs_bound_margin(report.rho, report.closed_form);
  report.eigenvalues = check_eigenvalues(report.moduli, report.tensor);

  const TransversalLines lines = find_transversal_lines(g);
  try {
    const CellSolution uniaxial = solve_stress_controlled(solved.front(), g, MacroStress{1.0, 0.0, 0.0});
    report.line_integral.value = constants_line_integral(uniaxial, g, lines);
  } catch (const NotApplicableError& e) {
    report.line_integral.not_applicable = e.what();
  }
  try {
    const CellSolution shear = solve_stress_controlled(solved.front(), g, MacroStress{0.0, 0.0, 1.0});
    report.a3_derivative.value = constant_a3_derivative(shear, g, lines);
  } catch (const NotApplicableError& e) {
    report.a3_derivative.not_applicable = e.what();
  }

  if (samples.size() >= 2 && !loadings.empty()) report.independence = independence_report(g, samples, solved, loadings);
  return report;
}

}  // namespace pixhom
