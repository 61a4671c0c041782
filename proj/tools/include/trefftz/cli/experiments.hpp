#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trefftz/cli/config.hpp"
#include "trefftz/cli/csv.hpp"
#include "trefftz/mesh.hpp"
#include "trefftz/waves.hpp"

namespace trefftz::cli
{

/// Built-in jittered rectangle, or the mesh file when one is configured.
Mesh make_mesh(const ExperimentConfig &config);

struct PointSourceRun
{
  BasisMode mode = BasisMode::EPW;
  int P = 0;
  double kappa = 0.0;
  std::size_t ndof_total = 0;
  double rel_h1_error = std::numeric_limits<double>::quiet_NaN();
  double coeff_norm = std::numeric_limits<double>::quiet_NaN();
  double min_rank_ratio = std::numeric_limits<double>::quiet_NaN();
  double sigma_min_over_max = std::numeric_limits<double>::quiet_NaN();
  // ok | residual_warning | quadrature_flag | failed
  std::string status = "ok";
  std::string message;

  bool failed() const { return status == "failed"; }
};

struct SolvedField
{
  std::vector<ElementBasis> bases;
  Eigen::VectorXcd coefficients;
};

/// Point source at config.source_for(kappa): build bases, solve, measure.
/// Solver errors are caught and reported through `status`.
PointSourceRun run_point_source(const Mesh &mesh, const ExperimentConfig &config, double kappa,
                                int P, BasisMode mode, SolvedField *keep = nullptr);

/// Cell-centred grid x grid samples of Re u_h and |u_h - u| over the mesh's
/// bounding box; points outside the mesh get nan.
CsvTable field_table(const Mesh &mesh, const SolvedField &solved, double kappa, const Vec2 &source,
                     int grid);

// Each command writes its CSVs into config.out_dir and logs progress to `log`.
// The return value is the process exit code.
int cmd_convergence(const ExperimentConfig &config, std::ostream &log);
int cmd_ksweep(const ExperimentConfig &config, std::ostream &log);
int cmd_stability(const ExperimentConfig &config, std::ostream &log);
int cmd_mesh(const ExperimentConfig &config, std::ostream &log);
int cmd_selftest(std::ostream &out);

}  // namespace trefftz::cli
