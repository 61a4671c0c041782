#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "trefftz/mesh.hpp"
#include "trefftz/waves.hpp"

namespace trefftz
{

/// Global numbering of trial and test waves, element by element.
struct DofLayout
{
  std::vector<std::size_t> trial_offset;  // size n_elements + 1
  std::vector<std::size_t> test_offset;   // size n_elements + 1

  std::size_t n_trial() const { return trial_offset.back(); }
  std::size_t n_test() const { return test_offset.back(); }
  std::size_t trial_size(std::size_t k) const { return trial_offset[k + 1] - trial_offset[k]; }
  std::size_t test_size(std::size_t k) const { return test_offset[k + 1] - test_offset[k]; }
};

DofLayout make_layout(const std::vector<ElementBasis> &bases);

/// Block-sparse complex matrix with test rows and trial columns. A block
/// (row_elem, col_elem) spans the test waves of row_elem and the trial waves
/// of col_elem.
struct BlockMatrix
{
  struct Block
  {
    std::size_t row_elem = 0;
    std::size_t col_elem = 0;
    Eigen::MatrixXcd data;
  };

  DofLayout layout;
  std::vector<Block> blocks;

  std::size_t rows() const { return layout.n_test(); }
  std::size_t cols() const { return layout.n_trial(); }
  Eigen::MatrixXcd to_dense() const;
  Eigen::VectorXcd multiply(const Eigen::VectorXcd &x) const;
  double frobenius_norm() const;
};

/// Impedance coefficient sigma on the boundary and on the interior skeleton.
struct ImpedanceData
{
  double sigma_boundary = 1.0;
  double sigma_skeleton = 1.0;

  double on_edge(const Edge &e) const { return e.on_boundary() ? sigma_boundary : sigma_skeleton; }
};

/// Boundary datum g(x, n) for the impedance condition d_n u - i kappa sigma u = g.
using BoundaryDatum = std::function<Complex(const Vec2 &x, const Vec2 &normal)>;

/// c such that (sign d_n - i kappa sigma) EW = c EW on a flat facet with the
/// given unit normal: c = sign i kappa (d.n) - i kappa sigma.
Complex robin_trace_factor(const EpwParams &w, const Vec2 &normal, double sigma, int sign);

/// Integral over the segment v0 -> v1 of wq(x) conj(wr(x)) ds, closed form.
Complex edge_integral(const Vec2 &v0, const Vec2 &v1, const NormalizedWave &wq,
                      const NormalizedWave &wr);

/// Block-diagonal matrix of sum_K int_{dK} sigma^-1 gamma_-u conj(gamma_-v).
BlockMatrix assemble_D(const Mesh &mesh, const std::vector<ElementBasis> &bases,
                       const ImpedanceData &sigma = {});

/// Neighbour coupling sum_{K1 != K2} int_{dK1 n dK2} sigma^-1 gamma_-^{K1}u
/// conj(gamma_+^{K2}v); two blocks per interior edge.
BlockMatrix assemble_C(const Mesh &mesh, const std::vector<ElementBasis> &bases,
                       const ImpedanceData &sigma = {});

struct RhsOptions
{
  double tolerance = 1e-10;  // relative change allowed between n and 2n nodes
  int max_nodes = 4096;
};

/// sum_K int_{dK n dOmega} sigma^-1 g conj(gamma_+ v) by Gauss-Legendre
/// quadrature. The node count starts at max(12, ceil(1.5 kappa (zeta_max +
/// eta_max) |e|)) and doubles until the edge contribution is stable.
Eigen::VectorXcd assemble_rhs(const Mesh &mesh, const std::vector<ElementBasis> &bases,
                              const ImpedanceData &sigma, const BoundaryDatum &g,
                              const RhsOptions &options = {});

/// g = d_n u - i kappa sigma u for a reference Helmholtz solution u.
BoundaryDatum manufacture_g(ReferenceField reference, double sigma, double kappa);

/// Initial Gauss-Legendre node count for an edge of the given length.
int rhs_node_count(double kappa, double zeta_max, double eta_max, double length);

}  // namespace trefftz
