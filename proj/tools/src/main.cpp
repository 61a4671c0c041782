#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "trefftz/cli/config.hpp"
#include "trefftz/cli/experiments.hpp"
#include "trefftz/version.hpp"

namespace
{

std::string plain(double v)
{
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

int main(int argc, char **argv)
{
  using namespace trefftz::cli;

  CLI::App app{"Trefftz plane-wave UWVF experiments"};
  app.set_version_flag("--version", std::string(trefftz::kVersion));

  std::string command;
  std::string config_path;
  std::optional<double> kappa;
  std::string out_dir;
  bool full = false;
  app.add_option("command", command, "convergence | ksweep | stability | mesh | selftest")
      ->required()
      ->check(CLI::IsMember({"convergence", "ksweep", "stability", "mesh", "selftest"}));
  app.add_option("--config", config_path, "configuration file (key = value with [sections])");
  app.add_option("--kappa", kappa, "wavenumber, overrides problem.kappa");
  app.add_option("--out", out_dir, "output directory, overrides output.dir");
  app.add_flag("--full", full, "full-size study: kappa = 128 and up to 815 waves per element");
  CLI11_PARSE(app, argc, argv);

  try
  {
    if (command == "selftest")
    {
      return cmd_selftest(std::cout);
    }
    if (config_path.empty())
    {
      std::cerr << "error: --config is required for '" << command << "'\n";
      return 2;
    }
    Config config = Config::load(config_path);
    if (full)
    {
      apply_full_preset(config);
    }
    if (kappa)
    {
      config.set("problem.kappa", plain(*kappa));
    }
    if (!out_dir.empty())
    {
      config.set("output.dir", out_dir);
    }
    const ExperimentConfig experiment = make_experiment_config(config);
    if (command == "convergence")
    {
      return cmd_convergence(experiment, std::cout);
    }
    if (command == "ksweep")
    {
      return cmd_ksweep(experiment, std::cout);
    }
    if (command == "stability")
    {
      return cmd_stability(experiment, std::cout);
    }
    return cmd_mesh(experiment, std::cout);
  }
  catch (const ConfigError &e)
  {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
