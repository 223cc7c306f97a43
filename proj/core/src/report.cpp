#include "pixhom/report.hpp"

namespace pixhom {

using nlohmann::json;

namespace {

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json array3(const std::array<double, 3>& a) { return json::array({a[0], a[1], a[2]}); }

}  // namespace

const char* version() { return PIXHOM_VERSION; }

json voigt_json(const Voigt3& v) { return json::array({v(0), v(1), v(2)}); }

json moduli_json(const IsotropicModuli& m) { return {{"K", m.bulk()}, {"G", m.shear()}}; }

json macro_stress_json(const MacroStress& s) { return json::array({s.s11, s.s22, s.s12}); }

json geometry_json(const CellGeometry& g) {
  const TransversalLines lines = find_transversal_lines(g);
  json out;
  out["nx"] = g.nx();
  out["ny"] = g.ny();
  out["l1"] = g.l1();
  out["l2"] = g.l2();
  out["material_elements"] = g.material_count();
  out["rho"] = volume_fraction(g);
  out["transversal_rows"] = lines.rows;
  out["transversal_cols"] = lines.cols;
  out["chosen_row"] = optional_json(lines.chosen_row);
  out["chosen_col"] = optional_json(lines.chosen_col);
  out["stencil_row"] = optional_json(lines.stencil_row);
  out["stencil_col"] = optional_json(lines.stencil_col);
  if (g.nx() == g.ny() && g.l1() == g.l2()) {
    out["square_symmetric"] = is_square_symmetric_geometry(g);
    out["square_mirror_symmetric"] = has_square_mirror_symmetry(g);
  } else {
    out["square_symmetric"] = nullptr;
    out["square_mirror_symmetric"] = nullptr;
  }
  return out;
}

json effective_json(const EffectiveTensor& tensor) {
  json matrix = json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) matrix.push_back(tensor.matrix(r, c));
  }
  return {{"effective_matrix", matrix},
          {"K_star", tensor.k_star},
          {"G_star", tensor.g_star},
          {"G45_star", tensor.g45_star},
          {"symmetry_residual", tensor.symmetry_residual}};
}

json vigdergauz_json(const VigdergauzReport& report) {
  json out;
  out["rho"] = report.rho;
  out["moduli"] = moduli_json(report.moduli);
  const VigdergauzConstants& cf = report.closed_form;
  out["A1"] = {{"closed_form", cf.a1}, {"line_integral", nullptr}};
  out["A2"] = {{"closed_form", cf.a2}, {"line_integral", nullptr}};
  out["A3"] = {{"closed_form", cf.a3}, {"derivative_line", nullptr}};
  json not_applicable = json::object();
  if (report.line_integral.value) {
    out["A1"]["line_integral"] = report.line_integral.value->a1;
    out["A2"]["line_integral"] = report.line_integral.value->a2;
  } else {
    not_applicable["line_integral"] = report.line_integral.not_applicable;
  }
  if (report.a3_derivative.value) {
    out["A3"]["derivative_line"] = *report.a3_derivative.value;
  } else {
    not_applicable["derivative_line"] = report.a3_derivative.not_applicable;
  }
  out["not_applicable"] = not_applicable;
  out["hs_margin"] = array3(report.hs_margin);
  out["eigenvalue_check"] = {{"formula", array3(report.eigenvalues.formula)},
                             {"spectrum", array3(report.eigenvalues.spectrum)},
                             {"max_relative_difference", report.eigenvalues.max_relative_difference}};
  if (report.independence) {
    const IndependenceReport& ind = *report.independence;
    json samples = json::array();
    for (std::size_t s = 0; s < ind.moduli_samples.size(); ++s) {
      const VigdergauzConstants& a = ind.constants_per_sample[s];
      samples.push_back({{"K", ind.moduli_samples[s].bulk()},
                         {"G", ind.moduli_samples[s].shear()},
                         {"A", json::array({a.a1, a.a2, a.a3})}});
    }
    json fields = json::array();
    for (std::size_t k = 0; k < ind.loadings.size(); ++k) {
      fields.push_back({{"eta", macro_stress_json(ind.loadings[k])}, {"spread", ind.stress_field_spread[k]}});
    }
    out["spread"] = {{"A", array3(ind.relative_spread)}, {"stress_field", fields}, {"samples", samples}};
  } else {
    out["spread"] = nullptr;
  }
  return out;
}

json lemma1_json(const Lemma1Residuals& r) {
  return {{"sigma11_vertical", r.sigma11_vertical},
          {"sigma22_horizontal", r.sigma22_horizontal},
          {"sigma12_horizontal", r.sigma12_horizontal},
          {"sigma12_vertical", r.sigma12_vertical},
          {"sigma12_between_lines", r.sigma12_between_lines},
          {"line_independence",
           {{"sigma11_cols", r.independence_sigma11_cols},
            {"sigma22_rows", r.independence_sigma22_rows},
            {"sigma12_rows", r.independence_sigma12_rows},
            {"sigma12_cols", r.independence_sigma12_cols}}},
          {"scale", r.scale},
          {"row", r.row},
          {"col", r.col}};
}

json lemma2_normal_json(const Lemma2NormalResiduals& r) {
  return {{"xi11", r.xi11},
          {"xi22", r.xi22},
          {"xi11_reconstructed", r.xi11_reconstructed},
          {"xi22_reconstructed", r.xi22_reconstructed},
          {"scale", r.scale},
          {"row", r.row},
          {"col", r.col}};
}

json lemma2_shear_json(const Lemma2ShearResiduals& r) {
  return {{"xi12", r.xi12},
          {"xi12_reconstructed", r.xi12_reconstructed},
          {"D1", r.d1},
          {"D2", r.d2},
          {"scale", r.scale},
          {"row", r.row},
          {"col", r.col}};
}

json field_dump_json(const CellSolution& sol) {
  json fluctuation = json::array();
  for (const auto& v : sol.fluctuation) fluctuation.push_back(json::array({v(0), v(1)}));
  auto gauss = [](const std::vector<GaussPointValues>& values) {
    json out = json::array();
    for (const auto& element : values) {
      json points = json::array();
      for (const auto& p : element) points.push_back(voigt_json(p));
      out.push_back(points);
    }
    return out;
  };
  return {{"nx", sol.nx},
          {"ny", sol.ny},
          {"xi", json::array({sol.quasiperiod.xi11, sol.quasiperiod.xi22, sol.quasiperiod.xi12})},
          {"energy", sol.energy},
          {"fluctuation", fluctuation},
          {"strain", gauss(sol.strain)},
          {"stress", gauss(sol.stress)}};
}

}  // namespace pixhom
