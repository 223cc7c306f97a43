#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "generators.hpp"

namespace pixhom::cli {
namespace {

namespace fs = std::filesystem;

std::string data_path(const std::string& name) { return std::string(PIXHOM_DATA_DIR) + "/" + name; }

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "pixhom");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out;
  std::ostringstream err;
  Invocation r;
  r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("pixhom_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                         "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void all_numbers_finite(const nlohmann::json& j) {
  if (j.is_number_float()) {
    EXPECT_TRUE(std::isfinite(j.get<double>()));
  } else if (j.is_structured()) {
    for (const auto& v : j) all_numbers_finite(v);
  }
}

TEST(ParseSamples, Examples) {
  const auto s = parse_samples("1,1;3,1;1,4");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[1], IsotropicModuli(3, 1));
  EXPECT_EQ(parse_samples(" 2.5 , 0.5 ").front(), IsotropicModuli(2.5, 0.5));
  EXPECT_THROW(parse_samples(""), std::invalid_argument);
  EXPECT_THROW(parse_samples("1"), std::invalid_argument);
  EXPECT_THROW(parse_samples("1,2,3"), std::invalid_argument);
  EXPECT_THROW(parse_samples("1,x"), std::invalid_argument);
  EXPECT_THROW(parse_samples("1,-1"), std::invalid_argument);
}

TEST(ParseEta, Examples) {
  const MacroStress e = parse_eta("1,0,-0.5");
  EXPECT_EQ(e.voigt(), Voigt3(1, 0, -0.5));
  EXPECT_THROW(parse_eta("1,0"), std::invalid_argument);
  EXPECT_THROW(parse_eta("0,0,0"), std::invalid_argument);
  EXPECT_THROW(parse_eta("1,nan,0"), std::invalid_argument);
}

TEST(Effective, FullMaterial) {
  RunConfig c;
  c.command = Command::Effective;
  c.geometry_path = data_path("full8.cell");
  c.moduli = {{2, 1}};
  const CommandResult r = run_command(c);
  EXPECT_EQ(r.exit_code, exit_code::kOk);
  EXPECT_NEAR(r.report["effective"]["K_star"].get<double>(), 2.0, 1e-12);
  EXPECT_NEAR(r.report["effective"]["G_star"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(r.report["effective"]["G45_star"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(r.report["effective"]["effective_matrix"].size(), 9u);
  EXPECT_EQ(r.report["geometry"]["rho"].get<double>(), 1.0);
  EXPECT_TRUE(r.report.contains("meta"));
  all_numbers_finite(r.report);
}

TEST(Effective, MissingGeometryIsValidationError) {
  const Invocation r = invoke({"effective", "--geometry", data_path("does_not_exist.cell"), "--K", "1", "--G", "1"});
  EXPECT_EQ(r.code, exit_code::kValidation);
  EXPECT_NE(r.err.find("cannot read geometry"), std::string::npos);
}

TEST(Effective, BadFlagsAreValidationErrors) {
  EXPECT_EQ(invoke({"effective", "--geometry", data_path("full8.cell"), "--K", "1"}).code, exit_code::kValidation);
  EXPECT_EQ(invoke({"effective", "--geometry", data_path("full8.cell"), "--K", "-1", "--G", "1"}).code,
            exit_code::kValidation);
  EXPECT_EQ(invoke({"effective", "--geometry", data_path("full8.cell"), "--tol", "0"}).code, exit_code::kValidation);
  EXPECT_EQ(invoke({"effective", "--geometry", data_path("full8.cell"), "--element", "cubic"}).code,
            exit_code::kValidation);
  EXPECT_EQ(invoke({"nonsense"}).code, exit_code::kValidation);
}

TEST(Effective, AsymmetricGeometryExitsWithResidual) {
  TempDir dir;
  std::ofstream(dir.file("slot.cell")) << "8 8 1.0 1.0\n########\n########\n###.####\n###.####\n###.####\n###.####\n"
                                          "########\n########\n";
  RunConfig c;
  c.command = Command::Effective;
  c.geometry_path = dir.file("slot.cell");
  c.moduli = {{1, 1}};
  const CommandResult r = run_command(c);
  EXPECT_EQ(r.exit_code, exit_code::kSymmetry);
  EXPECT_GT(r.report["effective"]["symmetry_residual"].get<double>(), kDefaultSymmetryTolerance);
  EXPECT_EQ(r.report["effective"]["effective_matrix"].size(), 9u);
}

TEST(Vigdergauz, FullMaterialSamples) {
  const Invocation r = invoke({"vigdergauz", "--geometry", data_path("full8.cell"), "--samples", "1,1;3,2"});
  EXPECT_EQ(r.code, exit_code::kOk);
  const auto j = nlohmann::json::parse(r.out);
  const auto& v = j["vigdergauz"];
  EXPECT_NEAR(v["A1"]["closed_form"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(v["A1"]["line_integral"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(v["A2"]["line_integral"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(v["A3"]["derivative_line"].get<double>(), 0.0, 1e-12);
  for (const auto& s : v["spread"]["A"]) EXPECT_LE(s.get<double>(), 1e-10);
  for (const auto& s : v["spread"]["stress_field"]) EXPECT_LE(s["spread"].get<double>(), 1e-10);
  all_numbers_finite(j);
}

TEST(Vigdergauz, NoTransversalLinesIsNotApplicable) {
  const Invocation r = invoke({"vigdergauz", "--geometry", data_path("no_lines16.cell"), "--K", "1", "--G", "1"});
  EXPECT_EQ(r.code, exit_code::kNotApplicable);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["vigdergauz"]["A1"]["closed_form"].is_number());
  EXPECT_TRUE(j["vigdergauz"]["A1"]["line_integral"].is_null());
  EXPECT_TRUE(j["vigdergauz"]["not_applicable"].contains("line_integral"));
}

TEST(Verify, FullMaterialPasses) {
  RunConfig c;
  c.command = Command::Verify;
  c.geometry_path = data_path("full8.cell");
  const CommandResult r = run_command(c);
  EXPECT_EQ(r.exit_code, exit_code::kOk);
  EXPECT_TRUE(r.report["verify"]["passed"].get<bool>());
}

TEST(Verify, ZeroThresholdFailsWithList) {
  const Invocation r = invoke({"verify", "--geometry", data_path("hole8.cell"), "--threshold", "0"});
  EXPECT_EQ(r.code, exit_code::kVerifyFailed);
  EXPECT_NE(r.err.find("FAILED lemma1"), std::string::npos);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_FALSE(j["verify"]["passed"].get<bool>());
  EXPECT_FALSE(j["verify"]["failures"].empty());
}

TEST(Verify, FieldDump) {
  TempDir dir;
  const Invocation r = invoke({"verify", "--geometry", data_path("hole8.cell"), "--refine", "4", "--fields",
                               dir.file("f.json"), "--out", dir.file("r.json")});
  EXPECT_EQ(r.code, exit_code::kOk);
  const auto f = nlohmann::json::parse(slurp(dir.file("f.json")));
  ASSERT_TRUE(f.is_object());
  EXPECT_FALSE(f.empty());
  EXPECT_TRUE(nlohmann::json::parse(slurp(dir.file("r.json"))).contains("verify"));
}

TEST(SweepRefine, FullMaterialLevelsAgree) {
  TempDir dir;
  const Invocation r = invoke({"sweep-refine", "--geometry", data_path("full8.cell"), "--samples", "1,1;3,2", "--csv",
                               dir.file("t.csv"), "--out", dir.file("t.json")});
  EXPECT_EQ(r.code, exit_code::kOk);
  const auto j = nlohmann::json::parse(slurp(dir.file("t.json")));
  ASSERT_EQ(j["levels"].size(), 3u);
  const double k0 = j["levels"][0]["effective"]["K_star"].get<double>();
  for (const auto& level : j["levels"]) {
    EXPECT_NEAR(level["effective"]["K_star"].get<double>(), k0, 1e-12);
    EXPECT_EQ(level["vigdergauz"]["rho"].get<double>(), 1.0);
  }
  const std::string csv = slurp(dir.file("t.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(SweepRefine, ReplicationPreservesVolumeFraction) {
  const CellGeometry g = read_cell_file(data_path("reference_frame32.cell"));
  for (int k : {2, 4}) EXPECT_EQ(volume_fraction(replicate(g, k)), volume_fraction(g));
}

TEST(Determinism, IdenticalInvocationsGiveIdenticalReports) {
  TempDir dir;
  for (const char* name : {"a.json", "b.json"}) {
    const Invocation r = invoke({"vigdergauz", "--geometry", data_path("hole8.cell"), "--out", dir.file(name)});
    EXPECT_EQ(r.code, exit_code::kOk);
  }
  const std::string a = slurp(dir.file("a.json"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(dir.file("b.json")));
}

TEST(DumpReport, RoundTripsDoubles) {
  testing::Rng rng(testing::kSeed + 60);
  for (int trial = 0; trial < 200; ++trial) {
    const double x = rng.log_uniform(1e-12, 1e12) * (rng.chance(0.5) ? -1 : 1);
    const nlohmann::json j = {{"x", x}};
    const std::string text = dump_report(j);
    EXPECT_EQ(text.back(), '\n');
    EXPECT_EQ(nlohmann::json::parse(text)["x"].get<double>(), x);
  }
}

}  // namespace
}  // namespace pixhom::cli
