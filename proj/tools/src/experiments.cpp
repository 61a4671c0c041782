#include "trefftz/cli/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <ostream>

#include "trefftz/analysis.hpp"
#include "trefftz/assembly.hpp"
#include "trefftz/regsolve.hpp"
#include "trefftz/specialfn.hpp"

namespace trefftz::cli
{

namespace
{

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void ensure_dir(const std::filesystem::path &dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
  {
    throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  }
}

ReferenceField point_source(const Vec2 &s, double kappa)
{
  return [s, kappa](const Vec2 &x) { return fundamental_solution(x, s, kappa); };
}

}  // namespace

Mesh make_mesh(const ExperimentConfig &config)
{
  if (!config.mesh_file.empty())
  {
    return load_mesh(config.mesh_file);
  }
  return build_rect_mesh(config.lower, config.upper, config.nx, config.ny, config.jitter,
                         config.seed);
}

PointSourceRun run_point_source(const Mesh &mesh, const ExperimentConfig &config, double kappa,
                                int P, BasisMode mode, SolvedField *keep)
{
  PointSourceRun run;
  run.mode = mode;
  run.P = P;
  run.kappa = kappa;
  try
  {
    BasisConfig bc;
    bc.trial_per_element = P;
    bc.oversampling = config.oversampling;
    bc.kappa = kappa;
    bc.mode = mode;
    bc.stream_offset = config.stream_offset;
    auto bases = build_bases(mesh, bc);
    run.ndof_total = make_layout(bases).n_trial();

    const ImpedanceData sigma{config.sigma, config.sigma};
    const auto reference = point_source(config.source_for(kappa), kappa);
    const auto g = manufacture_g(reference, config.sigma, kappa);
    SolveReport report = solve_problem(mesh, bases, sigma, g, config.epsilon, config.solver);

    run.coeff_norm = report.coeff_norm;
    run.min_rank_ratio = report.min_rank_ratio();
    run.sigma_min_over_max = report.min_sigma_ratio();

    const DiscreteField field(mesh, bases, report.coefficients);
    const ErrorReport err = h1_error(field, reference, kappa);
    run.rel_h1_error = err.relative;
    if (err.quadrature_flag)
    {
      run.status = "quadrature_flag";
    }
    else if (report.residual_warning)
    {
      run.status = "residual_warning";
    }
    if (keep)
    {
      keep->bases = std::move(bases);
      keep->coefficients = std::move(report.coefficients);
    }
  }
  catch (const Error &e)
  {
    run.status = "failed";
    run.message = e.what();
  }
  return run;
}

CsvTable field_table(const Mesh &mesh, const SolvedField &solved, double kappa, const Vec2 &source,
                     int grid)
{
  CsvTable table({"x", "y", "re_u", "abs_err"});
  const DiscreteField field(mesh, solved.bases, solved.coefficients);
  const auto [lo, hi] = mesh.bounding_box();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int j = 0; j < grid; ++j)
  {
    const double y = lo.y + (j + 0.5) * (hi.y - lo.y) / grid;
    for (int i = 0; i < grid; ++i)
    {
      const double x = lo.x + (i + 0.5) * (hi.x - lo.x) / grid;
      const Vec2 p{x, y};
      double re_u = nan;
      double err = nan;
      if (const auto k = locate_element(mesh, p))
      {
        const Complex uh = field.eval_on(*k, p).value;
        re_u = uh.real();
        err = std::abs(uh - fundamental_solution(p, source, kappa).value);
      }
      table.add_row({format_number(x), format_number(y), format_number(re_u), format_number(err)});
    }
  }
  return table;
}

int cmd_convergence(const ExperimentConfig &config, std::ostream &log)
{
  ensure_dir(config.out_dir);
  const Mesh mesh = make_mesh(config);
  const Vec2 s = config.source_for(config.kappa);
  log << "convergence: kappa=" << config.kappa << " elements=" << mesh.num_elements()
      << " source=(" << s.x << ", " << s.y << ") solver=" << to_string(config.solver) << "\n";

  CsvTable table({"mode", "P", "ndof_total", "rel_h1_error", "coeff_norm", "min_rank_ratio",
                  "sigma_min_over_max", "status"});
  bool all_ok = true;
  for (const BasisMode mode : config.modes)
  {
    const int P_max = *std::max_element(config.P.begin(), config.P.end());
    for (const int P : config.P)
    {
      const auto t0 = std::chrono::steady_clock::now();
      SolvedField solved;
      const bool keep = P == P_max;
      const PointSourceRun run =
          run_point_source(mesh, config, config.kappa, P, mode, keep ? &solved : nullptr);
      log << "  " << to_string(mode) << " P=" << P << " err=" << run.rel_h1_error
          << " |u|=" << run.coeff_norm << " " << run.status << " (" << seconds_since(t0) << " s)"
          << (run.message.empty() ? "" : ": " + run.message) << "\n";
      all_ok = all_ok && !run.failed();
      table.add_row({std::string(to_string(mode)), format_number(P), format_number(run.ndof_total),
                     format_number(run.rel_h1_error), format_number(run.coeff_norm),
                     format_number(run.min_rank_ratio), format_number(run.sigma_min_over_max),
                     run.status});
      if (keep && !run.failed())
      {
        const auto name = "field_" + std::string(to_string(mode)) + ".csv";
        field_table(mesh, solved, config.kappa, s, config.grid)
            .write(config.out_dir / name, config.config_hash);
      }
    }
  }
  table.write(config.out_dir / "convergence.csv", config.config_hash);
  log << "wrote " << (config.out_dir / "convergence.csv").string() << "\n";
  return all_ok ? 0 : 1;
}

int cmd_ksweep(const ExperimentConfig &config, std::ostream &log)
{
  ensure_dir(config.out_dir);
  const Mesh mesh = make_mesh(config);
  log << "ksweep: elements=" << mesh.num_elements() << " P = " << config.ksweep_waves_per_kappa
      << " kappa\n";
  CsvTable table({"kappa", "mode", "P", "rel_h1_error", "coeff_norm", "status"});
  bool all_ok = true;
  for (const double kappa : config.ksweep_kappas)
  {
    const int P = std::max(1, static_cast<int>(std::lround(config.ksweep_waves_per_kappa * kappa)));
    // the source follows kappa unless pinned in the config
    for (const BasisMode mode : config.modes)
    {
      const auto t0 = std::chrono::steady_clock::now();
      const PointSourceRun run = run_point_source(mesh, config, kappa, P, mode);
      log << "  kappa=" << kappa << " " << to_string(mode) << " P=" << P
          << " err=" << run.rel_h1_error << " " << run.status << " (" << seconds_since(t0)
          << " s)" << (run.message.empty() ? "" : ": " + run.message) << "\n";
      all_ok = all_ok && !run.failed();
      table.add_row({format_number(kappa), std::string(to_string(mode)), format_number(P),
                     format_number(run.rel_h1_error), format_number(run.coeff_norm), run.status});
    }
  }
  table.write(config.out_dir / "ksweep.csv", config.config_hash);
  log << "wrote " << (config.out_dir / "ksweep.csv").string() << "\n";
  return all_ok ? 0 : 1;
}

int cmd_stability(const ExperimentConfig &config, std::ostream &log)
{
  ensure_dir(config.out_dir);
  log << "stability: kappa=" << config.stability_kappa << "\n";
  CsvTable table({"m", "mode", "P", "delta", "mu_norm", "rank", "status"});
  bool all_ok = true;
  ProbeOptions options;
  options.stream_offset = config.stream_offset;
  for (const int m : config.stability_m)
  {
    for (const BasisMode mode : config.modes)
    {
      for (const int P : config.stability_P)
      {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<std::string> row{format_number(m), std::string(to_string(mode)),
                                     format_number(P)};
        try
        {
          const auto r = stability_probe(m, config.stability_kappa, P, mode, config.epsilon, options);
          row.push_back(format_number(r.delta));
          row.push_back(format_number(r.mu_norm));
          row.push_back(format_number(r.rank));
          row.push_back("ok");
          log << "  m=" << m << " " << to_string(mode) << " P=" << P << " delta=" << r.delta
              << " |mu|=" << r.mu_norm << " (" << seconds_since(t0) << " s)\n";
        }
        catch (const Error &e)
        {
          all_ok = false;
          row.insert(row.end(), {"nan", "nan", "0", "failed"});
          log << "  m=" << m << " " << to_string(mode) << " P=" << P << " failed: " << e.what()
              << "\n";
        }
        table.add_row(std::move(row));
      }
    }
  }
  table.write(config.out_dir / "stability.csv", config.config_hash);
  log << "wrote " << (config.out_dir / "stability.csv").string() << "\n";
  return all_ok ? 0 : 1;
}

int cmd_mesh(const ExperimentConfig &config, std::ostream &log)
{
  ensure_dir(config.out_dir);
  const Mesh mesh = make_mesh(config);
  const auto path = config.out_dir / "mesh.txt";
  auto tmp = path;
  tmp += ".tmp";
  save_mesh(mesh, tmp);
  std::filesystem::rename(tmp, path);
  double h_max = 0.0;
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
  {
    h_max = std::max(h_max, mesh.triangle(k).diameter);
  }
  log << "mesh: " << mesh.num_vertices() << " vertices, " << mesh.num_elements() << " triangles, "
      << mesh.num_edges() << " edges (" << mesh.boundary_edges().size() << " on the boundary), h_max="
      << h_max << "\nwrote " << path.string() << "\n";
  return 0;
}

}  // namespace trefftz::cli
