#pragma once

#include <Eigen/Dense>

#include "trefftz/types.hpp"

namespace trefftz
{

/// Thin SVD A = U diag(S) V* of a tall complex matrix. S is sorted in
/// descending order; U is rows x cols, V is cols x cols.
struct SvdResult
{
  Eigen::MatrixXcd U;
  Eigen::VectorXd S;
  Eigen::MatrixXcd V;
};

/// Golub-Kahan SVD: Householder bidiagonalisation (complex reflectors with
/// real bidiagonal output) followed by implicit-shift QR sweeps on the real
/// bidiagonal. Requires rows >= cols >= 1 and finite entries.
SvdResult complex_svd(const Eigen::MatrixXcd &A);

}  // namespace trefftz
