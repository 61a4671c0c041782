#pragma once

#include <cstdint>
#include <string>

namespace trefftz::cli
{

/// Outcome of one numerical check: the worst observed value against its
/// tolerance.
struct CheckResult
{
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
};

/// Closed-form edge integrals against Gauss-Legendre quadrature on random
/// edges and wave pairs, kappa in {1, 16, 64}, eta in {0, 1, 8}. Errors are
/// relative to ||wq|| ||wr|| on the edge.
CheckResult check_edge_integrals(int cases, std::uint64_t seed, double tolerance = 1e-12);

/// ||D - D^*|| <= tol ||D|| and positive smallest singular value per block for
/// trial = test bases on the 40-triangle mesh.
CheckResult check_matrix_structure(int P, double tolerance = 1e-12);

/// A propagative wave placed in every element's trial basis is reproduced by
/// the solver.
CheckResult check_manufactured(int P, double tolerance = 1e-8);

/// complex_svd reconstruction (relative) and singular values (absolute)
/// against one-sided Jacobi on random tall complex matrices.
CheckResult check_svd(int cases, int max_rows, int max_cols, std::uint64_t seed,
                      double reconstruction_tol = 1e-12, double sigma_tol = 1e-10);

/// Bessel recurrences, the J/Y Wronskian and the ascending series oracle on a
/// grid of `points` arguments.
CheckResult check_bessel(int points, double tolerance = 1e-10);

/// Gradient of the point source against central differences.
CheckResult check_hankel_gradient(int points, double tolerance = 1e-6);

/// (e^a - 1) / a against its series near the small-argument switch and on
/// the imaginary axis.
CheckResult check_phi0(double tolerance = 1e-13);

/// First Sobol points against tabulated values.
CheckResult check_sobol();

}  // namespace trefftz::cli
