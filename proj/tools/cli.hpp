#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pixhom/pixhom.hpp"

namespace pixhom::cli {

enum class Command { Effective, Vigdergauz, Verify, SweepRefine };

const char* to_string(Command command);

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kValidation = 2;
inline constexpr int kSolver = 3;
inline constexpr int kSymmetry = 4;
inline constexpr int kNotApplicable = 5;
}  // namespace exit_code

/// Pass thresholds for `verify`; a check passes when its residual is
/// strictly below the threshold.
struct Thresholds {
  double lemma1 = 1e-2;
  double lemma2_normal = 1e-2;
  double lemma2_shear = 1e-1;
};

struct RunConfig {
  Command command = Command::Effective;
  std::string geometry_path;
  /// Empty means the command default.
  std::vector<IsotropicModuli> moduli;
  /// Empty means the three canonical loadings.
  std::vector<MacroStress> etas;
  SolverOptions solver;
  double symmetry_tolerance = kDefaultSymmetryTolerance;
  std::optional<std::string> output_path;
  std::optional<std::string> csv_path;
  std::optional<std::string> fields_path;
  int refine = 1;
  Thresholds thresholds;
};

struct CommandResult {
  int exit_code = exit_code::kOk;
  nlohmann::json report;
  /// Short human-readable lines.
  std::string summary;
  /// Only filled by sweep-refine.
  std::string csv;
  /// Only filled by verify when a field dump was requested.
  std::optional<nlohmann::json> fields;
};

/// "K1,G1;K2,G2;..."; throws std::invalid_argument.
std::vector<IsotropicModuli> parse_samples(std::string_view text);
/// "s11,s22,s12"; throws std::invalid_argument.
MacroStress parse_eta(std::string_view text);

/// Runs one command. Library errors are mapped to exit codes and reported
/// under the "error" key; nothing is thrown.
CommandResult run_command(const RunConfig& config);

CommandResult cmd_effective(const RunConfig& config);
CommandResult cmd_vigdergauz(const RunConfig& config);
CommandResult cmd_verify(const RunConfig& config);
CommandResult cmd_sweep_refine(const RunConfig& config);

/// Serialized report as written to disk: two-space indent, trailing newline.
std::string dump_report(const nlohmann::json& report);

/// Full command line entry point.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace pixhom::cli
