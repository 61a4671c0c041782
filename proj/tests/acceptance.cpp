// Acceptance suite A1-A9: one pass/fail line per criterion, nonzero exit if
// any fails. Point-source studies run through the CLI commands and are judged
// from the CSV files they write.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "trefftz/cli/checks.hpp"
#include "trefftz/cli/config.hpp"
#include "trefftz/cli/csv.hpp"
#include "trefftz/cli/experiments.hpp"

using namespace trefftz;
using namespace trefftz::cli;

namespace
{

using Clock = std::chrono::steady_clock;

const std::filesystem::path kSource = TREFFTZ_SOURCE_DIR;
const std::filesystem::path kWork = std::filesystem::current_path() / "acceptance-out";

struct Verdict
{
  bool passed = false;
  std::string detail;
};

std::string sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Config default_config(const std::string &out)
{
  Config c = Config::load(kSource / "configs/default.ini");
  c.set("output.dir", (kWork / out).string());
  return c;
}

// rel_h1_error by (mode, P) from a convergence or ksweep table
std::map<std::pair<std::string, int>, double> errors_by(const CsvTable &t, const std::string &key)
{
  std::map<std::pair<std::string, int>, double> out;
  const auto mode = column(t, "mode");
  const auto k = column(t, key);
  const auto err = column(t, "rel_h1_error");
  for (const auto &row : t.rows())
  {
    out[{row[mode], static_cast<int>(std::lround(std::stod(row[k])))}] = std::stod(row[err]);
  }
  return out;
}

bool no_failed_rows(const CsvTable &t)
{
  const auto status = column(t, "status");
  for (const auto &row : t.rows())
  {
    if (row[status] == "failed")
    {
      return false;
    }
  }
  return true;
}

Verdict from_check(const CheckResult &r, double budget, double seconds)
{
  const bool in_time = seconds < budget;
  return {r.passed && in_time, r.detail + (in_time ? "" : "; over the " + sci(budget) + " s budget")};
}

Verdict a1()
{
  const auto t0 = Clock::now();
  const CheckResult r = check_edge_integrals(1000, 20240611, 1e-12);
  return from_check(r, 10.0, std::chrono::duration<double>(Clock::now() - t0).count());
}

Verdict a2()
{
  const auto t0 = Clock::now();
  const CheckResult r = check_matrix_structure(16, 1e-12);
  return from_check(r, 30.0, std::chrono::duration<double>(Clock::now() - t0).count());
}

Verdict a3()
{
  const auto t0 = Clock::now();
  const CheckResult r = check_manufactured(16, 1e-8);
  return from_check(r, 30.0, std::chrono::duration<double>(Clock::now() - t0).count());
}

Verdict a4()
{
  const auto t0 = Clock::now();
  const CheckResult r = check_svd(100, 200, 180, 31337, 1e-12, 1e-10);
  return from_check(r, 60.0, std::chrono::duration<double>(Clock::now() - t0).count());
}

Verdict a5()
{
  const auto t0 = Clock::now();
  const CheckResult bessel = check_bessel(100, 1e-10);
  const CheckResult hankel = check_hankel_gradient(100, 1e-6);
  const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return {bessel.passed && hankel.passed && seconds < 5.0,
          bessel.detail + "; " + hankel.detail + "; " + sci(seconds) + " s"};
}

Verdict a6()
{
  const auto t0 = Clock::now();
  const ExperimentConfig config = make_experiment_config(default_config("convergence"));
  std::ostringstream log;
  const int code = cmd_convergence(config, log);
  const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  const CsvTable t = read_csv(config.out_dir / "convergence.csv");
  const auto e = errors_by(t, "P");
  const double ppw64 = e.at({"PPW", 64});
  const double ppw128 = e.at({"PPW", 128});
  const double epw64 = e.at({"EPW", 64});
  const double epw128 = e.at({"EPW", 128});
  const bool ratio = epw128 <= 1e-2 * ppw128;
  const bool stall = ppw64 / ppw128 < 2.0;
  const bool decreasing = epw128 < epw64;
  return {code == 0 && no_failed_rows(t) && ratio && stall && decreasing && seconds < 300.0,
          "P=128: EPW " + sci(epw128) + " / PPW " + sci(ppw128) + " = " + sci(epw128 / ppw128) +
              " (<= 1e-2); PPW 64->128 gain x" + sci(ppw64 / ppw128) + " (< 2); EPW 64->128 " +
              sci(epw64) + " -> " + sci(epw128) + "; " + sci(seconds) + " s"};
}

Verdict a7()
{
  const auto t0 = Clock::now();
  Config c = default_config("stability");
  c.set("stability.m", "32");
  const ExperimentConfig config = make_experiment_config(c);
  std::ostringstream log;
  const int code = cmd_stability(config, log);
  const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  const CsvTable t = read_csv(config.out_dir / "stability.csv");
  const auto mode = column(t, "mode");
  const auto delta = column(t, "delta");
  const auto mu = column(t, "mu_norm");
  double ppw = INFINITY;
  double epw = INFINITY;
  for (const auto &row : t.rows())
  {
    if (std::stod(row[delta]) <= 1e-2)
    {
      double &best = row[mode] == "PPW" ? ppw : epw;
      best = std::min(best, std::stod(row[mu]));
    }
  }
  const bool ok = std::isfinite(ppw) && std::isfinite(epw) && ppw > 1e3 * epw;
  return {code == 0 && ok && seconds < 120.0,
          "kappa=16, m=32, delta<=1e-2: min |mu| PPW " + sci(ppw) + ", EPW " + sci(epw) + ", ratio " +
              sci(ppw / epw) + " (> 1e3); " + sci(seconds) + " s"};
}

Verdict a8()
{
  const auto t0 = Clock::now();
  const ExperimentConfig config = make_experiment_config(default_config("ksweep"));
  std::ostringstream log;
  const int code = cmd_ksweep(config, log);
  const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  const CsvTable t = read_csv(config.out_dir / "ksweep.csv");
  const auto e = errors_by(t, "kappa");
  std::vector<double> epw;
  std::string detail = "EPW";
  for (const double k : config.ksweep_kappas)
  {
    epw.push_back(e.at({"EPW", static_cast<int>(std::lround(k))}));
    detail += " kappa=" + sci(k) + ": " + sci(epw.back()) + ";";
  }
  bool ok = epw.size() >= 2;
  double worst = 0.0;
  for (std::size_t i = 1; i < epw.size(); ++i)
  {
    worst = std::max(worst, epw[i] / epw[i - 1]);
    ok = ok && epw[i] <= 2.0 * epw[i - 1];
  }
  detail += " worst step ratio " + sci(worst) + " (<= 2); first->last " + sci(epw.back() / epw.front()) +
            "; " + sci(seconds) + " s";
  return {code == 0 && no_failed_rows(t) && ok && seconds < 600.0, detail};
}

std::string slurp(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Verdict a9()
{
  std::vector<std::map<std::string, std::string>> runs;
  for (int pass = 0; pass < 2; ++pass)
  {
    Config c = Config::load(kSource / "configs/smoke.ini");
    const auto dir = kWork / ("determinism-" + std::to_string(pass));
    std::filesystem::remove_all(dir);
    c.set("output.dir", dir.string());
    const ExperimentConfig config = make_experiment_config(c);
    std::ostringstream log;
    if (cmd_convergence(config, log) != 0 || cmd_ksweep(config, log) != 0 || cmd_stability(config, log) != 0)
    {
      return {false, "smoke run failed:\n" + log.str()};
    }
    std::map<std::string, std::string> files;
    for (const auto &entry : std::filesystem::directory_iterator(dir))
    {
      files[entry.path().filename().string()] = slurp(entry.path());
    }
    runs.push_back(std::move(files));
  }
  std::size_t bytes = 0;
  for (const auto &[name, text] : runs[0])
  {
    const auto it = runs[1].find(name);
    if (it == runs[1].end() || it->second != text)
    {
      return {false, name + " differs between runs"};
    }
    bytes += text.size();
  }
  return {runs[0].size() == runs[1].size() && runs[0].size() == 5,
          std::to_string(runs[0].size()) + " CSV files, " + std::to_string(bytes) + " bytes identical"};
}

}  // namespace

int main()
{
  std::filesystem::create_directories(kWork);
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"A1 analytic edge integrals vs quadrature", a1},
      {"A2 D Hermitian with nonsingular blocks", a2},
      {"A3 manufactured plane wave reproduced", a3},
      {"A4 SVD vs Jacobi oracle", a4},
      {"A5 special-function identities", a5},
      {"A6 point-source convergence kappa=16", a6},
      {"A7 coefficient-norm probe m=32", a7},
      {"A8 wavenumber sweep P=4 kappa", a8},
      {"A9 byte-identical reruns", a9},
  };
  int failures = 0;
  for (const auto &[name, run] : criteria)
  {
    Verdict v;
    try
    {
      v = run();
    }
    catch (const std::exception &e)
    {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += v.passed ? 0 : 1;
    std::cout << (v.passed ? "PASS " : "FAIL ") << name << " -- " << v.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
