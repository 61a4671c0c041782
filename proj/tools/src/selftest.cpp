#include <cstdio>
#include <ostream>
#include <vector>

#include "trefftz/cli/checks.hpp"
#include "trefftz/cli/experiments.hpp"

namespace trefftz::cli
{

int cmd_selftest(std::ostream &out)
{
  // reduced sizes of the acceptance checks; a few seconds in total
  std::vector<CheckResult> results;
  const auto run = [&](auto &&check) {
    try
    {
      results.push_back(check());
    }
    catch (const std::exception &e)
    {
      CheckResult failed;
      failed.name = "(exception)";
      failed.detail = e.what();
      results.push_back(failed);
    }
  };
  run([] { return check_edge_integrals(200, 2024); });
  run([] { return check_svd(10, 60, 50, 11); });
  run([] { return check_bessel(40); });
  run([] { return check_hankel_gradient(20); });
  run([] { return check_phi0(); });
  run([] { return check_sobol(); });
  run([] { return check_matrix_structure(16); });
  run([] { return check_manufactured(16); });

  bool all = true;
  char line[160];
  std::snprintf(line, sizeof line, "%-40s %-6s %8s\n", "suite", "result", "time[s]");
  out << line;
  for (const auto &r : results)
  {
    all = all && r.passed;
    std::snprintf(line, sizeof line, "%-40s %-6s %8.2f  ", r.name.c_str(), r.passed ? "pass" : "FAIL",
                  r.seconds);
    out << line << r.detail << "\n";
  }
  out << (all ? "selftest passed" : "selftest FAILED") << "\n";
  return all ? 0 : 1;
}

}  // namespace trefftz::cli
