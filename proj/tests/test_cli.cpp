#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

#include "trefftz/cli/checks.hpp"
#include "trefftz/cli/config.hpp"
#include "trefftz/cli/csv.hpp"
#include "trefftz/cli/experiments.hpp"

using namespace trefftz;
using namespace trefftz::cli;

namespace
{

Config parse(const std::string &text)
{
  std::istringstream in(text);
  return Config::parse(in);
}

std::filesystem::path scratch(const std::string &name)
{
  auto dir = std::filesystem::temp_directory_path() / ("trefftz_cli_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST(Config, ParsesSectionsListsAndComments)
{
  const Config c = parse(
      "# leading comment\n"
      "[problem]\n"
      "kappa = 12.5   # trailing\n"
      "source = -0.1, 0\n"
      "\n"
      "[basis]\n"
      "P = 8,16 , 32\n"
      "modes = EPW\n"
      "; other comment style\n");
  const ExperimentConfig e = make_experiment_config(c);
  EXPECT_EQ(e.kappa, 12.5);
  ASSERT_TRUE(e.source.has_value());
  EXPECT_EQ(e.source->x, -0.1);
  EXPECT_EQ(e.P, (std::vector<int>{8, 16, 32}));
  EXPECT_EQ(e.modes, (std::vector<BasisMode>{BasisMode::EPW}));
  // untouched fields keep their defaults
  EXPECT_EQ(e.epsilon, 1e-14);
  EXPECT_EQ(e.oversampling, 1.1);
  EXPECT_EQ(e.nx, 4);
}

TEST(Config, DefaultSourceFollowsKappa)
{
  const ExperimentConfig e = make_experiment_config(parse("[problem]\nkappa = 16\nsource = auto\n"));
  EXPECT_FALSE(e.source.has_value());
  EXPECT_DOUBLE_EQ(e.source_for(16.0).x, -std::numbers::pi / 80.0);
  EXPECT_EQ(e.source_for(16.0).y, 0.0);
  EXPECT_DOUBLE_EQ(e.source_for(32.0).x, -std::numbers::pi / 160.0);
}

TEST(Config, SyntaxErrors)
{
  EXPECT_THROW(parse("kappa = 1\n"), ConfigError);
  EXPECT_THROW(parse("[problem\nkappa = 1\n"), ConfigError);
  EXPECT_THROW(parse("[problem]\nkappa 1\n"), ConfigError);
  EXPECT_THROW(parse("[problem]\nkappa = 1\nkappa = 2\n"), ConfigError);
  EXPECT_THROW(parse("[problem]\nwavenumber = 1\n"), ConfigError);
  EXPECT_THROW(parse("[problem]\nkappa =\n"), ConfigError);
}

TEST(Config, ValidationNamesTheKey)
{
  const auto message = [](const std::string &text) {
    try
    {
      make_experiment_config(parse(text));
    }
    catch (const ConfigError &e)
    {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("[problem]\nkappa = -1\n").find("problem.kappa"), std::string::npos);
  EXPECT_NE(message("[problem]\nkappa = 1x\n").find("problem.kappa"), std::string::npos);
  EXPECT_NE(message("[mesh]\njitter = 0.5\n").find("mesh.jitter"), std::string::npos);
  EXPECT_NE(message("[mesh]\nnx = 0\n").find("mesh.nx"), std::string::npos);
  EXPECT_NE(message("[basis]\nP = 8, 0\n").find("basis.P"), std::string::npos);
  EXPECT_NE(message("[basis]\nP = 8,,16\n").find("basis.P"), std::string::npos);
  EXPECT_NE(message("[basis]\nmodes = PPW, XPW\n").find("basis.modes"), std::string::npos);
  EXPECT_NE(message("[basis]\noversampling = 0.9\n").find("basis.oversampling"), std::string::npos);
  EXPECT_NE(message("[solver]\nepsilon = 0\n").find("solver.epsilon"), std::string::npos);
  EXPECT_NE(message("[solver]\nmethod = qr\n").find("solver.method"), std::string::npos);
  EXPECT_NE(message("[problem]\nsource = 0.5, 0\n").find("problem.source"), std::string::npos);
  EXPECT_NE(message("[problem]\nupper = 0, 1\n").find("problem.upper"), std::string::npos);
  EXPECT_NE(message("[stability]\nm = -2\n").find("stability.m"), std::string::npos);
  EXPECT_NE(message("[output]\ngrid = 0\n").find("output.grid"), std::string::npos);
}

TEST(Config, OverridesAndHash)
{
  Config c = parse("[problem]\nkappa = 16\n[output]\ndir = a\n");
  const std::uint64_t h = c.hash();
  c.set("output.dir", "b");
  EXPECT_EQ(c.hash(), h);  // the output location does not affect results
  c.set("problem.kappa", "8");
  EXPECT_NE(c.hash(), h);
  EXPECT_EQ(make_experiment_config(c).kappa, 8.0);
  EXPECT_THROW(c.set("problem.nope", "1"), ConfigError);
  EXPECT_EQ(c.canonical(), "problem.kappa = 8\n");
}

TEST(Config, FullPreset)
{
  Config c = Config::load(std::filesystem::path(TREFFTZ_SOURCE_DIR) / "configs/default.ini");
  apply_full_preset(c);
  const ExperimentConfig e = make_experiment_config(c);
  EXPECT_EQ(e.kappa, 128.0);
  EXPECT_EQ(e.P.back(), 815);
  EXPECT_EQ(e.source_for(e.kappa).x, -std::numbers::pi / 640.0);
}

TEST(Config, ShippedConfigsAreValid)
{
  for (const char *name : {"default.ini", "smoke.ini"})
  {
    const Config c = Config::load(std::filesystem::path(TREFFTZ_SOURCE_DIR) / "configs" / name);
    EXPECT_NO_THROW(make_experiment_config(c)) << name;
  }
  EXPECT_THROW(Config::load("/nonexistent.ini"), ConfigError);
}

TEST(Csv, NumberFormatting)
{
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1e-14), "1e-14");
  EXPECT_EQ(format_number(128.0), "128");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
  for (const double v : {1.0 / 3.0, 6.02214076e23, -2.718281828459045e-300})
  {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(hex64(0x1fu), "000000000000001f");
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
}

TEST(Csv, RenderReadAndTrailer)
{
  CsvTable t({"a", "b"});
  t.add_row({"1", "x"});
  t.add_row({"2.5", "y"});
  EXPECT_THROW(t.add_row({"3"}), CsvError);
  const std::string text = t.render(0xabcdefu);
  EXPECT_TRUE(std::regex_search(text, std::regex("^a,b\n1,x\n2.5,y\n# config-hash=0000000000abcdef, version=[0-9.]+\n$")));

  const auto dir = scratch("csv");
  std::filesystem::create_directories(dir);
  t.write(dir / "t.csv", 0xabcdefu);
  EXPECT_EQ(slurp(dir / "t.csv"), text);
  EXPECT_FALSE(std::filesystem::exists(dir / "t.csv.tmp"));
  const CsvTable back = read_csv(dir / "t.csv");
  EXPECT_EQ(back.rows(), t.rows());
  EXPECT_EQ(column(back, "b"), 1u);
  try
  {
    column(back, "rel_h1_error");
    FAIL();
  }
  catch (const CsvError &e)
  {
    EXPECT_NE(std::string(e.what()).find("rel_h1_error"), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST(Commands, ConvergenceDegenerateBudget)
{
  // P = 4: 2L = 2 <= kappa diam(K) on every element, so both modes draw the
  // same propagative waves
  Config c = parse("[problem]\nkappa = 16\n[basis]\nP = 4\n[output]\ngrid = 8\n");
  const auto dir = scratch("degenerate");
  c.set("output.dir", dir.string());
  const ExperimentConfig e = make_experiment_config(c);
  const Mesh mesh = make_mesh(e);
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
  {
    ASSERT_LE(2.0, 16.0 * mesh.triangle(k).diameter);
  }
  std::ostringstream log;
  ASSERT_EQ(cmd_convergence(e, log), 0) << log.str();
  const CsvTable t = read_csv(dir / "convergence.csv");
  ASSERT_EQ(t.rows().size(), 2u);
  const auto err = column(t, "rel_h1_error");
  EXPECT_EQ(t.rows()[0][column(t, "mode")], "PPW");
  EXPECT_EQ(t.rows()[1][column(t, "mode")], "EPW");
  EXPECT_NEAR(std::stod(t.rows()[0][err]), std::stod(t.rows()[1][err]), 1e-12);
  EXPECT_EQ(t.rows()[0][column(t, "ndof_total")], "160");
  const CsvTable field = read_csv(dir / "field_EPW.csv");
  EXPECT_EQ(field.header(), (std::vector<std::string>{"x", "y", "re_u", "abs_err"}));
  EXPECT_EQ(field.rows().size(), 64u);
  std::filesystem::remove_all(dir);
}

TEST(Commands, KsweepRowCount)
{
  Config c = parse("[mesh]\nnx = 2\nny = 2\n[ksweep]\nkappas = 2, 4, 8\nwaves_per_kappa = 2\n");
  const auto dir = scratch("ksweep");
  c.set("output.dir", dir.string());
  std::ostringstream log;
  ASSERT_EQ(cmd_ksweep(make_experiment_config(c), log), 0) << log.str();
  const CsvTable t = read_csv(dir / "ksweep.csv");
  EXPECT_EQ(t.rows().size(), 6u);
  EXPECT_EQ(t.header(), (std::vector<std::string>{"kappa", "mode", "P", "rel_h1_error", "coeff_norm", "status"}));
  EXPECT_EQ(t.rows()[4][column(t, "P")], "16");
  std::filesystem::remove_all(dir);
}

TEST(Commands, StabilityColumns)
{
  Config c = parse("[stability]\nkappa = 4\nm = 0, 2\nP = 16, 24\n");
  const auto dir = scratch("stability");
  c.set("output.dir", dir.string());
  std::ostringstream log;
  ASSERT_EQ(cmd_stability(make_experiment_config(c), log), 0);
  const CsvTable t = read_csv(dir / "stability.csv");
  EXPECT_EQ(t.rows().size(), 8u);
  for (const char *name : {"m", "mode", "P", "delta", "mu_norm"})
  {
    EXPECT_NO_THROW(column(t, name));
  }
  std::filesystem::remove_all(dir);
}

TEST(Commands, MeshFileRoundTrip)
{
  Config c = parse("[mesh]\nnx = 3\nny = 2\njitter = 0.1\n");
  const auto dir = scratch("mesh");
  c.set("output.dir", dir.string());
  const ExperimentConfig e = make_experiment_config(c);
  std::ostringstream log;
  ASSERT_EQ(cmd_mesh(e, log), 0);
  const Mesh written = load_mesh(dir / "mesh.txt");
  EXPECT_EQ(written.num_elements(), 12u);

  Config from_file = parse("[mesh]\nfile = " + (dir / "mesh.txt").string() + "\n");
  EXPECT_EQ(make_mesh(make_experiment_config(from_file)).num_elements(), 12u);
  std::filesystem::remove_all(dir);
}

TEST(Commands, SolverFailureIsRecordedAndContinues)
{
  // errors inside one run become a failed row instead of aborting the command
  Config c = parse("[mesh]\nnx = 1\nny = 1\n[problem]\nkappa = 2\n");
  const ExperimentConfig e = make_experiment_config(c);
  const Mesh mesh = make_mesh(e);
  ExperimentConfig bad = e;
  bad.epsilon = 2.0;  // rejected by the solver
  const PointSourceRun run = run_point_source(mesh, bad, 2.0, 4, BasisMode::EPW);
  EXPECT_TRUE(run.failed());
  EXPECT_TRUE(std::isnan(run.rel_h1_error));
  EXPECT_FALSE(run.message.empty());
}

TEST(Commands, DeterministicOutput)
{
  const Config base = Config::load(std::filesystem::path(TREFFTZ_SOURCE_DIR) / "configs/smoke.ini");
  std::string first;
  for (int pass = 0; pass < 2; ++pass)
  {
    Config c = base;
    const auto dir = scratch("determinism" + std::to_string(pass));
    c.set("output.dir", dir.string());
    c.set("basis.P", "8, 16");
    std::ostringstream log;
    ASSERT_EQ(cmd_convergence(make_experiment_config(c), log), 0);
    const std::string text = slurp(dir / "convergence.csv") + slurp(dir / "field_PPW.csv");
    if (pass == 0)
    {
      first = text;
    }
    else
    {
      EXPECT_EQ(text, first);
    }
    std::filesystem::remove_all(dir);
  }
}

TEST(Checks, ManufacturedWaveAtThirtyTwoHitsTruncationFloor)
{
  // With 32 waves the included solution shares directions that the
  // sigma^2 < epsilon cut removes, so consistency stalls near sqrt(epsilon).
  const CheckResult r = check_manufactured(32, 1e-7);
  EXPECT_TRUE(r.passed) << r.detail;
  EXPECT_GT(r.worst, 1e-9) << r.detail;
}
