#include "cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

namespace pixhom::cli {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_real(std::string_view token, std::string_view what) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
    throw std::invalid_argument("invalid " + std::string(what) + " '" + std::string(token) + "'");
  }
  return value;
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

const char* element_name(ElementFormulation e) {
  return e == ElementFormulation::Bilinear ? "bilinear" : "incompatible";
}

CellGeometry load_geometry(const RunConfig& config) {
  if (config.refine < 1) throw std::invalid_argument("--refine must be at least 1");
  const CellGeometry g = read_cell_file(config.geometry_path);
  return config.refine == 1 ? g : replicate(g, config.refine);
}

void validate(const RunConfig& config) {
  config.solver.validate();
  if (!(config.symmetry_tolerance > 0.0)) throw std::invalid_argument("--symtol must be positive");
  const Thresholds& t = config.thresholds;
  if (!(t.lemma1 >= 0.0) || !(t.lemma2_normal >= 0.0) || !(t.lemma2_shear >= 0.0)) {
    throw std::invalid_argument("thresholds must be nonnegative");
  }
}

std::vector<MacroStress> loadings(const RunConfig& config) {
  if (!config.etas.empty()) return config.etas;
  const auto canonical = hydrostatic_and_shear_loadings();
  return {canonical.begin(), canonical.end()};
}

std::vector<IsotropicModuli> samples_or_default(const RunConfig& config) {
  return config.moduli.empty() ? default_moduli_samples() : config.moduli;
}

json config_json(const RunConfig& config) {
  json moduli = json::array();
  for (const auto& m : config.moduli) moduli.push_back(moduli_json(m));
  json etas = json::array();
  for (const auto& e : config.etas) etas.push_back(macro_stress_json(e));
  json solver = {{"rel_tolerance", config.solver.rel_tolerance},
                 {"max_iterations", config.solver.max_iterations ? json(*config.solver.max_iterations) : json(nullptr)},
                 {"oracle", config.solver.use_oracle},
                 {"element", element_name(config.solver.element)}};
  return {{"command", to_string(config.command)},
          {"geometry", config.geometry_path},
          {"moduli", moduli},
          {"eta", etas},
          {"solver", solver},
          {"symtol", config.symmetry_tolerance},
          {"refine", config.refine},
          {"thresholds",
           {{"lemma1", config.thresholds.lemma1},
            {"lemma2_normal", config.thresholds.lemma2_normal},
            {"lemma2_shear", config.thresholds.lemma2_shear}}}};
}

json meta_json(const RunConfig& config) { return {{"version", version()}, {"config", config_json(config)}}; }

json lines_json(const TransversalLines& lines) {
  auto opt = [](const std::optional<int>& v) { return v ? json(*v) : json(nullptr); };
  return {{"row", opt(lines.chosen_row)},
          {"col", opt(lines.chosen_col)},
          {"stencil_row", opt(lines.stencil_row)},
          {"stencil_col", opt(lines.stencil_col)}};
}

std::vector<Homogenization> solve_samples(const CellGeometry& g, std::span<const IsotropicModuli> samples,
                                          const RunConfig& config) {
  std::vector<Homogenization> solved;
  for (const auto& m : samples) solved.push_back(effective_tensor(g, m, config.solver, config.symmetry_tolerance));
  return solved;
}

// Lemma checks for one stress-controlled loading.
struct LoadingChecks {
  MacroStress eta;
  Lemma1Residuals lemma1;
  Lemma2NormalResiduals lemma2_normal;
  std::optional<Lemma2ShearResiduals> lemma2_shear;
  std::string shear_not_applicable;
};

LoadingChecks check_loading(const Homogenization& h, const CellGeometry& g, const TransversalLines& lines,
                            const MacroStress& eta, CellSolution* keep = nullptr) {
  CellSolution sol = solve_stress_controlled(h, g, eta);
  LoadingChecks c{eta, check_lemma1(sol, g, lines), check_lemma2_normal(sol, g, lines), std::nullopt, {}};
  try {
    c.lemma2_shear = check_lemma2_shear(sol, g, lines);
  } catch (const NotApplicableError& e) {
    c.shear_not_applicable = e.what();
  }
  if (keep) *keep = std::move(sol);
  return c;
}

double relative_gap(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), kConstantSpreadFloor);
}

}  // namespace

const char* to_string(Command command) {
  switch (command) {
    case Command::Effective: return "effective";
    case Command::Vigdergauz: return "vigdergauz";
    case Command::Verify: return "verify";
    case Command::SweepRefine: return "sweep-refine";
  }
  return "unknown";
}

std::vector<IsotropicModuli> parse_samples(std::string_view text) {
  std::vector<IsotropicModuli> out;
  for (std::string_view pair : split(text, ';')) {
    if (trim(pair).empty()) continue;
    const auto fields = split(pair, ',');
    if (fields.size() != 2) throw std::invalid_argument("moduli sample '" + std::string(pair) + "' is not K,G");
    out.emplace_back(parse_real(fields[0], "bulk modulus"), parse_real(fields[1], "shear modulus"));
  }
  if (out.empty()) throw std::invalid_argument("empty moduli sample list");
  return out;
}

MacroStress parse_eta(std::string_view text) {
  const auto fields = split(text, ',');
  if (fields.size() != 3) throw std::invalid_argument("eta '" + std::string(text) + "' is not s11,s22,s12");
  const MacroStress eta{parse_real(fields[0], "eta component"), parse_real(fields[1], "eta component"),
                        parse_real(fields[2], "eta component")};
  if (eta.s11 == 0.0 && eta.s22 == 0.0 && eta.s12 == 0.0) throw std::invalid_argument("eta must not be zero");
  return eta;
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

CommandResult cmd_effective(const RunConfig& config) {
  validate(config);
  if (config.moduli.size() != 1) throw std::invalid_argument("effective needs exactly one moduli pair");
  const CellGeometry g = load_geometry(config);
  Homogenization h = compute_effective_matrix(g, config.moduli.front(), config.solver);

  CommandResult result;
  result.report["geometry"] = geometry_json(g);
  result.report["meta"] = meta_json(config);
  try {
    extract_moduli(h.tensor, config.symmetry_tolerance);
  } catch (const SymmetryError& e) {
    result.exit_code = exit_code::kSymmetry;
    VoigtMatrix3 c = h.tensor.matrix;
    json matrix = json::array();
    for (int r = 0; r < 3; ++r) {
      for (int k = 0; k < 3; ++k) matrix.push_back(c(r, k));
    }
    result.report["effective"] = {{"effective_matrix", matrix}, {"symmetry_residual", h.tensor.symmetry_residual}};
    result.report["error"] = {{"message", e.what()}, {"exit_code", result.exit_code}};
    result.summary = std::string("error: ") + e.what() + "\n";
    return result;
  }
  result.report["effective"] = effective_json(h.tensor);
  std::ostringstream s;
  s << "rho = " << format_number(volume_fraction(g)) << "\n"
    << "K* = " << format_number(h.tensor.k_star) << ", G* = " << format_number(h.tensor.g_star)
    << ", G45* = " << format_number(h.tensor.g45_star) << "\n"
    << "symmetry residual = " << format_number(h.tensor.symmetry_residual) << "\n";
  result.summary = s.str();
  return result;
}

CommandResult cmd_vigdergauz(const RunConfig& config) {
  validate(config);
  const CellGeometry g = load_geometry(config);
  const std::vector<IsotropicModuli> samples = samples_or_default(config);
  const std::vector<MacroStress> loads = loadings(config);
  const std::vector<Homogenization> solved = solve_samples(g, samples, config);
  const VigdergauzReport rep = vigdergauz_report(g, samples, solved, loads);

  CommandResult result;
  result.report["geometry"] = geometry_json(g);
  result.report["effective"] = effective_json(rep.tensor);
  result.report["vigdergauz"] = vigdergauz_json(rep);
  result.report["meta"] = meta_json(config);
  if (!rep.line_routes_applicable()) result.exit_code = exit_code::kNotApplicable;

  std::ostringstream s;
  s << "A (closed form) = " << format_number(rep.closed_form.a1) << ", " << format_number(rep.closed_form.a2) << ", "
    << format_number(rep.closed_form.a3) << "\n";
  if (rep.line_integral.value) {
    s << "A1, A2 (line integral) = " << format_number(rep.line_integral.value->a1) << ", "
      << format_number(rep.line_integral.value->a2) << "\n";
  } else {
    s << "line integral route: " << rep.line_integral.not_applicable << "\n";
  }
  if (rep.a3_derivative.value) {
    s << "A3 (derivative line) = " << format_number(*rep.a3_derivative.value) << "\n";
  } else {
    s << "derivative route: " << rep.a3_derivative.not_applicable << "\n";
  }
  s << "HS margins = " << format_number(rep.hs_margin[0]) << ", " << format_number(rep.hs_margin[1]) << ", "
    << format_number(rep.hs_margin[2]) << "\n";
  if (rep.independence) {
    const auto& sp = rep.independence->relative_spread;
    s << "constant spreads = " << format_number(sp[0]) << ", " << format_number(sp[1]) << ", "
      << format_number(sp[2]) << "; max stress-field spread = "
      << format_number(rep.independence->max_stress_field_spread()) << "\n";
  }
  result.summary = s.str();
  return result;
}

CommandResult cmd_verify(const RunConfig& config) {
  validate(config);
  const CellGeometry g = load_geometry(config);
  const IsotropicModuli m = config.moduli.empty() ? IsotropicModuli(1.0, 1.0) : config.moduli.front();
  const TransversalLines lines = find_transversal_lines(g);

  CommandResult result;
  result.report["geometry"] = geometry_json(g);
  result.report["meta"] = meta_json(config);
  if (!lines.applicable()) {
    result.exit_code = exit_code::kNotApplicable;
    result.report["verify"] = {{"not_applicable", "no transversal lines in both directions"},
                               {"lines_used", lines_json(lines)}};
    result.summary = "verify: not applicable, no transversal lines in both directions\n";
    return result;
  }

  const Homogenization h = effective_tensor(g, m, config.solver, config.symmetry_tolerance);
  result.report["effective"] = effective_json(h.tensor);

  const Thresholds& t = config.thresholds;
  json lemma1 = json::array();
  json lemma2_normal = json::array();
  json lemma2_shear = json::array();
  json failures = json::array();
  json fields = json::array();
  std::ostringstream s;
  for (const MacroStress& eta : loadings(config)) {
    CellSolution sol;
    const LoadingChecks c = check_loading(h, g, lines, eta, config.fields_path ? &sol : nullptr);
    const std::string tag = "eta=(" + format_number(eta.s11) + "," + format_number(eta.s22) + "," +
                            format_number(eta.s12) + ")";

    json l1 = lemma1_json(c.lemma1);
    const bool l1_ok = c.lemma1.max() < t.lemma1;
    l1["eta"] = macro_stress_json(eta);
    l1["passed"] = l1_ok;
    lemma1.push_back(l1);
    if (!l1_ok) failures.push_back("lemma1 " + tag + ": " + format_number(c.lemma1.max()));

    json l2 = lemma2_normal_json(c.lemma2_normal);
    const bool l2_ok = c.lemma2_normal.max() < t.lemma2_normal;
    l2["eta"] = macro_stress_json(eta);
    l2["passed"] = l2_ok;
    lemma2_normal.push_back(l2);
    if (!l2_ok) failures.push_back("lemma2_normal " + tag + ": " + format_number(c.lemma2_normal.max()));

    json l3;
    if (c.lemma2_shear) {
      const bool l3_ok = c.lemma2_shear->xi12 < t.lemma2_shear;
      l3 = lemma2_shear_json(*c.lemma2_shear);
      l3["passed"] = l3_ok;
      if (!l3_ok) failures.push_back("lemma2_shear " + tag + ": " + format_number(c.lemma2_shear->xi12));
    } else {
      l3 = {{"not_applicable", c.shear_not_applicable}};
    }
    l3["eta"] = macro_stress_json(eta);
    lemma2_shear.push_back(l3);

    s << tag << ": lemma1 " << format_number(c.lemma1.max()) << ", lemma2 normal "
      << format_number(c.lemma2_normal.max()) << ", lemma2 shear "
      << (c.lemma2_shear ? format_number(c.lemma2_shear->xi12) : std::string("not applicable")) << "\n";
    if (config.fields_path) {
      json f = field_dump_json(sol);
      f["eta"] = macro_stress_json(eta);
      fields.push_back(f);
    }
  }
  result.report["verify"] = {{"lines_used", lines_json(lines)},
                             {"lemma1", lemma1},
                             {"lemma2_normal", lemma2_normal},
                             {"lemma2_shear", lemma2_shear},
                             {"failures", failures},
                             {"passed", failures.empty()}};
  if (!failures.empty()) {
    result.exit_code = exit_code::kVerifyFailed;
    for (const auto& f : failures) s << "FAILED " << f.get<std::string>() << "\n";
  }
  if (config.fields_path) result.fields = json{{"loadings", fields}};
  result.summary = s.str();
  return result;
}

CommandResult cmd_sweep_refine(const RunConfig& config) {
  validate(config);
  const CellGeometry base = load_geometry(config);
  const std::vector<IsotropicModuli> samples = samples_or_default(config);
  const std::vector<MacroStress> loads = loadings(config);

  // Trajectories; nullopt marks a level where the quantity was not available.
  const std::vector<std::string> names = {
      "lemma1",          "lemma1_independence", "lemma2_normal",     "lemma2_shear",     "route_gap_A1",
      "route_gap_A2",    "route_gap_A3",        "spread_A1",         "spread_A2",        "spread_A3",
      "stress_spread"};
  std::map<std::string, std::vector<std::optional<double>>> traj;

  CommandResult result;
  json levels = json::array();
  std::ostringstream csv;
  csv << "refine,nx,ny,rho,K_star,G_star,G45_star,symmetry_residual,A1_closed_form,A2_closed_form,A3_closed_form,"
         "A1_line_integral,A2_line_integral,A3_derivative_line";
  for (const auto& n : names) csv << ',' << n;
  csv << "\n";
  std::ostringstream s;
  bool applicable = true;

  for (int k : {1, 2, 4}) {
    const CellGeometry g = replicate(base, k);
    const std::vector<Homogenization> solved = solve_samples(g, samples, config);
    const VigdergauzReport rep = vigdergauz_report(g, samples, solved, loads);
    const TransversalLines lines = find_transversal_lines(g);
    std::map<std::string, std::optional<double>> v;

    json level;
    level["refine"] = k * config.refine;
    level["nx"] = g.nx();
    level["ny"] = g.ny();
    level["effective"] = effective_json(rep.tensor);
    level["vigdergauz"] = vigdergauz_json(rep);
    if (rep.line_integral.value) {
      v["route_gap_A1"] = relative_gap(rep.line_integral.value->a1, rep.closed_form.a1);
      v["route_gap_A2"] = relative_gap(rep.line_integral.value->a2, rep.closed_form.a2);
    }
    if (rep.a3_derivative.value) v["route_gap_A3"] = relative_gap(*rep.a3_derivative.value, rep.closed_form.a3);
    if (rep.independence) {
      v["spread_A1"] = rep.independence->relative_spread[0];
      v["spread_A2"] = rep.independence->relative_spread[1];
      v["spread_A3"] = rep.independence->relative_spread[2];
      v["stress_spread"] = rep.independence->max_stress_field_spread();
    }
    if (lines.applicable()) {
      double l1 = 0.0, ind = 0.0, l2 = 0.0, l3 = 0.0;
      bool shear = true;
      for (const MacroStress& eta : loads) {
        const LoadingChecks c = check_loading(solved.front(), g, lines, eta);
        l1 = std::max(l1, c.lemma1.max_line_residual());
        ind = std::max(ind, c.lemma1.max_independence());
        l2 = std::max(l2, c.lemma2_normal.max());
        if (c.lemma2_shear) {
          l3 = std::max(l3, c.lemma2_shear->xi12);
        } else {
          shear = false;
        }
      }
      v["lemma1"] = l1;
      v["lemma1_independence"] = ind;
      v["lemma2_normal"] = l2;
      if (shear) v["lemma2_shear"] = l3;
    }
    if (!rep.line_routes_applicable()) applicable = false;

    json residuals = json::object();
    for (const auto& n : names) {
      const std::optional<double> x = v.count(n) ? v[n] : std::nullopt;
      residuals[n] = x ? json(*x) : json(nullptr);
      traj[n].push_back(x);
    }
    level["residuals"] = residuals;
    levels.push_back(level);

    const auto opt_line = [&](auto f) -> std::optional<double> {
      return rep.line_integral.value ? std::optional<double>(f(*rep.line_integral.value)) : std::nullopt;
    };
    csv << k * config.refine << ',' << g.nx() << ',' << g.ny() << ',' << format_number(rep.rho) << ','
        << format_number(rep.tensor.k_star) << ',' << format_number(rep.tensor.g_star) << ','
        << format_number(rep.tensor.g45_star) << ',' << format_number(rep.tensor.symmetry_residual) << ','
        << format_number(rep.closed_form.a1) << ',' << format_number(rep.closed_form.a2) << ','
        << format_number(rep.closed_form.a3) << ','
        << format_optional(opt_line([](const LineConstants& c) { return c.a1; })) << ','
        << format_optional(opt_line([](const LineConstants& c) { return c.a2; })) << ','
        << format_optional(rep.a3_derivative.value);
    for (const auto& n : names) csv << ',' << format_optional(traj[n].back());
    csv << "\n";
    s << "level x" << k * config.refine << " (" << g.nx() << "x" << g.ny() << "): A = " << format_number(rep.closed_form.a1)
      << ", " << format_number(rep.closed_form.a2) << ", " << format_number(rep.closed_form.a3) << "\n";
  }

  json trends = json::object();
  for (const auto& n : names) {
    const auto& values = traj[n];
    const bool complete = std::all_of(values.begin(), values.end(), [](const auto& x) { return x.has_value(); });
    if (!complete) {
      trends[n] = {{"values", nullptr}, {"decreasing", nullptr}};
      continue;
    }
    std::vector<double> plain;
    for (const auto& x : values) plain.push_back(*x);
    trends[n] = {{"values", plain}, {"decreasing", refinement_decreasing(plain)}};
  }

  result.report["geometry"] = geometry_json(base);
  result.report["levels"] = levels;
  result.report["trends"] = trends;
  result.report["trend_rule"] = {{"ratio", 1.5}, {"noise_floor", kRefinementNoiseFloor}};
  result.report["meta"] = meta_json(config);
  result.csv = csv.str();
  result.summary = s.str();
  if (!applicable) result.exit_code = exit_code::kNotApplicable;
  return result;
}

CommandResult run_command(const RunConfig& config) {
  auto fail = [&](int code, const std::string& message) {
    CommandResult r;
    r.exit_code = code;
    r.report["error"] = {{"message", message}, {"exit_code", code}};
    r.report["meta"] = meta_json(config);
    r.summary = "error: " + message + "\n";
    return r;
  };
  try {
    switch (config.command) {
      case Command::Effective: return cmd_effective(config);
      case Command::Vigdergauz: return cmd_vigdergauz(config);
      case Command::Verify: return cmd_verify(config);
      case Command::SweepRefine: return cmd_sweep_refine(config);
    }
    return fail(exit_code::kValidation, "unknown command");
  } catch (const SymmetryError& e) {
    CommandResult r = fail(exit_code::kSymmetry, e.what());
    r.report["error"]["symmetry_residual"] = e.residual();
    return r;
  } catch (const GeometryError& e) {
    return fail(exit_code::kValidation, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(exit_code::kValidation, e.what());
  } catch (const NotApplicableError& e) {
    return fail(exit_code::kNotApplicable, e.what());
  } catch (const NotPositiveDefiniteError& e) {
    return fail(exit_code::kSolver, e.what());
  } catch (const SolverError& e) {
    return fail(exit_code::kSolver, e.what());
  } catch (const std::exception& e) {
    return fail(exit_code::kSolver, e.what());
  }
}

namespace {

bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  f.close();
  if (!f) {
    err << "error: cannot write '" << path << "'\n";
    return false;
  }
  return true;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Effective moduli and geometric constants of perforated periodic plates", "pixhom"};
  app.require_subcommand(1);

  RunConfig config;
  std::optional<double> bulk;
  std::optional<double> shear;
  std::string samples;
  std::vector<std::string> etas;
  std::string element = "incompatible";
  std::optional<long> max_iterations;
  std::optional<double> threshold;
  std::optional<double> lemma1_threshold;
  std::optional<double> lemma2_threshold;
  std::optional<double> shear_threshold;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--geometry", config.geometry_path, "Cell file")->required();
    sub->add_option("--K", bulk, "Planar bulk modulus");
    sub->add_option("--G", shear, "Shear modulus");
    sub->add_option("--samples", samples, "Moduli samples \"K1,G1;K2,G2;...\"");
    sub->add_option("--eta", etas, "Average stress s11,s22,s12 (repeatable)");
    sub->add_option("--tol", config.solver.rel_tolerance, "Relative residual tolerance of the solver");
    sub->add_option("--max-iterations", max_iterations, "Iteration cap of the solver");
    sub->add_option("--symtol", config.symmetry_tolerance, "Square-symmetry tolerance");
    sub->add_option("--out", config.output_path, "Write the JSON report here instead of stdout");
    sub->add_flag("--oracle", config.solver.use_oracle, "Dense direct solve");
    sub->add_option("--element", element, "bilinear or incompatible")
        ->check(CLI::IsMember({"bilinear", "incompatible"}));
    sub->add_option("--refine", config.refine, "Replicate every pixel into a k x k block first");
  };

  CLI::App* effective = app.add_subcommand("effective", "Effective tensor and (K*, G*, G45*)");
  CLI::App* vigdergauz = app.add_subcommand("vigdergauz", "Geometric constants by every route");
  CLI::App* verify = app.add_subcommand("verify", "Line-average and quasiperiod identities");
  CLI::App* sweep = app.add_subcommand("sweep-refine", "All checks at pixel replication x1, x2, x4");
  for (CLI::App* sub : {effective, vigdergauz, verify, sweep}) add_common(sub);
  verify->add_option("--fields", config.fields_path, "Write solved fields as JSON");
  verify->add_option("--threshold", threshold, "Pass threshold for every check");
  verify->add_option("--lemma1-threshold", lemma1_threshold, "Pass threshold for line-average residuals");
  verify->add_option("--lemma2-threshold", lemma2_threshold, "Pass threshold for normal quasiperiod residuals");
  verify->add_option("--shear-threshold", shear_threshold, "Pass threshold for the shear quasiperiod residual");
  sweep->add_option("--csv", config.csv_path, "Also write a CSV table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return exit_code::kOk;
    }
    err << "error: " << e.what() << "\n";
    return exit_code::kValidation;
  }

  if (effective->parsed()) config.command = Command::Effective;
  if (vigdergauz->parsed()) config.command = Command::Vigdergauz;
  if (verify->parsed()) config.command = Command::Verify;
  if (sweep->parsed()) config.command = Command::SweepRefine;

  try {
    if (bulk.has_value() != shear.has_value()) throw std::invalid_argument("--K and --G must be given together");
    if (bulk && !samples.empty()) throw std::invalid_argument("use either --K/--G or --samples");
    if (bulk) config.moduli.emplace_back(*bulk, *shear);
    if (!samples.empty()) config.moduli = parse_samples(samples);
    for (const auto& e : etas) config.etas.push_back(parse_eta(e));
    config.solver.max_iterations = max_iterations;
    config.solver.element = element == "bilinear" ? ElementFormulation::Bilinear : ElementFormulation::IncompatibleModes;
    if (threshold) config.thresholds = {*threshold, *threshold, *threshold};
    if (lemma1_threshold) config.thresholds.lemma1 = *lemma1_threshold;
    if (lemma2_threshold) config.thresholds.lemma2_normal = *lemma2_threshold;
    if (shear_threshold) config.thresholds.lemma2_shear = *shear_threshold;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kValidation;
  }

  const CommandResult result = run_command(config);
  const std::string report = dump_report(result.report);
  if (config.output_path) {
    if (!write_file(*config.output_path, report, err)) return exit_code::kValidation;
    out << result.summary;
  } else {
    out << report;
    err << result.summary;
  }
  if (config.csv_path && !result.csv.empty() && !write_file(*config.csv_path, result.csv, err)) {
    return exit_code::kValidation;
  }
  if (config.fields_path && result.fields && !write_file(*config.fields_path, dump_report(*result.fields), err)) {
    return exit_code::kValidation;
  }
  return result.exit_code;
}

}  // namespace pixhom::cli
