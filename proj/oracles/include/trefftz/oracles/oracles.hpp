#pragma once

// Reference implementations used only to check the core library. They share
// no numerical code with it: quadrature nodes, Bessel series and the SVD are
// all computed independently (and slowly).

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "trefftz/types.hpp"
#include "trefftz/waves.hpp"

namespace trefftz::oracles
{

/// Singular values (descending) by one-sided Hestenes-Jacobi rotations.
Eigen::VectorXd jacobi_singular_values(const Eigen::MatrixXcd &A);

/// n-point Gauss-Legendre rule on [-1, 1] via the Golub-Welsch eigenproblem.
struct GaussRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule golub_welsch(int n);

/// int_{v0}^{v1} wq conj(wr) ds by n-point Gauss-Legendre quadrature, with the
/// waves evaluated from their raw parameters.
Complex edge_integral_quadrature(const Vec2 &v0, const Vec2 &v1, const NormalizedWave &wq,
                                 const NormalizedWave &wr, int n);

/// Cauchy-Schwarz scale ||wq||_{L2(e)} ||wr||_{L2(e)} of the edge integral.
double edge_integral_scale(const Vec2 &v0, const Vec2 &v1, const NormalizedWave &wq,
                           const NormalizedWave &wr, int n);

/// Ascending series in 100-digit arithmetic (valid for x up to ~150).
double bessel_j_series(int m, double x);
/// Y_0 and Y_1 from their logarithmic series in 100-digit arithmetic.
double bessel_y_series(int m, double x);

/// (e^a - 1) / a as sum_k a^k / (k+1)! in 100-digit arithmetic.
Complex phi0_series(Complex a, int terms = 10000);

}  // namespace trefftz::oracles
