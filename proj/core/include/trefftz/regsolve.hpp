#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "trefftz/assembly.hpp"
#include "trefftz/mesh.hpp"
#include "trefftz/svd.hpp"

namespace trefftz
{

inline constexpr double kDefaultEpsilon = 1e-14;

/// SVD of one diagonal block of D with its truncation rank.
struct SvdBlock
{
  SvdResult svd;
  std::size_t rank_eps = 0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
};

SvdBlock svd_block(const Eigen::MatrixXcd &block, double epsilon);

/// Truncated pseudo-inverse V Sigma_eps^+ U^*: singular values below
/// epsilon * sigma_1 are dropped.
struct PinvBlock
{
  Eigen::MatrixXcd inverse;  // cols x rows of the original block
  std::size_t rank = 0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
};

PinvBlock truncated_pinv(const SvdResult &svd, double epsilon);

/// Truncation rank of a singular value sequence (sorted descending).
std::size_t truncation_rank(const Eigen::VectorXd &S, double epsilon);

struct BlockStats
{
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  std::size_t rank = 0;
  std::size_t n_trial = 0;
};

struct SolveReport
{
  Eigen::VectorXcd coefficients;
  std::vector<BlockStats> blocks;
  double residual = 0.0;      // ||(I - D^+ C) u - D^+ b||
  double rhs_norm = 0.0;      // ||D^+ b||
  double coeff_norm = 0.0;    // ||u||_2
  std::vector<double> element_coeff_norms;
  bool residual_warning = false;

  double min_rank_ratio() const;
  double min_sigma_ratio() const;
};

class SolverError : public Error
{
public:
  using Error::Error;
};

/// Solves (I - D_eps^+ C) u = D_eps^+ b by dense partial-pivot LU.
///
/// D is a Gram matrix of boundary traces, so its singular values are the
/// squares of those of the trace sampling matrix. Directions retained near
/// epsilon * sigma_1 are therefore only resolved to about 1e-16 / epsilon,
/// which limits this path once the bases become numerically redundant.
SolveReport solve_uwvf(const BlockMatrix &D, const BlockMatrix &C, const Eigen::VectorXcd &b,
                       double epsilon = kDefaultEpsilon);

/// Gauss-Legendre nodes per edge used for the sampled trace matrices: enough
/// to integrate products of two waves to machine precision, and at least half
/// the largest basis so every element's sample matrix is tall.
int trace_node_count(double kappa, double zeta_max, double eta_max, double length,
                     std::size_t max_waves);

/// Same truncated Petrov-Galerkin system as solve_uwvf, formed in orthonormal
/// trace coordinates. Per element, the gamma_- traces of the trial (test) waves
/// are sampled on the boundary quadrature nodes, A = Q S W^*, and directions
/// with S_q^2 >= epsilon S_1^2 are kept (the rule applied to D = A^* A). D, C
/// and b are then never formed in the wave coefficients, which avoids squaring
/// the conditioning. For trial = test this coincides with solve_uwvf in exact
/// arithmetic; with oversampling the test traces are truncated separately.
/// Block statistics report the squared sampled singular values.
SolveReport solve_uwvf_traces(const Mesh &mesh, const std::vector<ElementBasis> &bases,
                              const ImpedanceData &sigma, const BoundaryDatum &g,
                              double epsilon = kDefaultEpsilon, const RhsOptions &rhs = {});

enum class SolverMethod
{
  Trace,
  Gram,
};

std::string_view to_string(SolverMethod method);
SolverMethod parse_solver_method(std::string_view text);

/// Assembles and solves the impedance problem with the chosen method.
SolveReport solve_problem(const Mesh &mesh, const std::vector<ElementBasis> &bases,
                          const ImpedanceData &sigma, const BoundaryDatum &g, double epsilon,
                          SolverMethod method = SolverMethod::Trace, const RhsOptions &rhs = {});

}  // namespace trefftz
