#include "trefftz/regsolve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "trefftz/quadrature.hpp"

namespace trefftz
{

std::size_t truncation_rank(const Eigen::VectorXd &S, double epsilon)
{
  if (S.size() == 0 || !(S(0) > 0.0))
  {
    return 0;
  }
  const double threshold = epsilon * S(0);
  std::size_t rank = 0;
  for (Eigen::Index q = 0; q < S.size(); ++q)
  {
    if (S(q) >= threshold)
    {
      ++rank;
    }
  }
  return rank;
}

SvdBlock svd_block(const Eigen::MatrixXcd &block, double epsilon)
{
  SvdBlock out;
  out.svd = complex_svd(block);
  out.rank_eps = truncation_rank(out.svd.S, epsilon);
  out.sigma_max = out.svd.S(0);
  out.sigma_min = out.svd.S(out.svd.S.size() - 1);
  return out;
}

PinvBlock truncated_pinv(const SvdResult &svd, double epsilon)
{
  if (!(epsilon > 0.0 && epsilon < 1.0))
  {
    throw ArgumentError("truncated_pinv: epsilon must lie in (0, 1)");
  }
  PinvBlock out;
  out.rank = truncation_rank(svd.S, epsilon);
  out.sigma_max = svd.S.size() ? svd.S(0) : 0.0;
  out.sigma_min = svd.S.size() ? svd.S(svd.S.size() - 1) : 0.0;
  const auto r = static_cast<Eigen::Index>(out.rank);
  const Eigen::VectorXd inv_s = svd.S.head(r).cwiseInverse();
  out.inverse = svd.V.leftCols(r) * inv_s.asDiagonal() * svd.U.leftCols(r).adjoint();
  return out;
}

double SolveReport::min_rank_ratio() const
{
  double ratio = 1.0;
  for (const auto &b : blocks)
  {
    if (b.n_trial > 0)
    {
      ratio = std::min(ratio, static_cast<double>(b.rank) / static_cast<double>(b.n_trial));
    }
  }
  return ratio;
}

double SolveReport::min_sigma_ratio() const
{
  double ratio = 1.0;
  for (const auto &b : blocks)
  {
    if (b.sigma_max > 0.0)
    {
      ratio = std::min(ratio, b.sigma_min / b.sigma_max);
    }
  }
  return ratio;
}

SolveReport solve_uwvf(const BlockMatrix &D, const BlockMatrix &C, const Eigen::VectorXcd &b,
                       double epsilon)
{
  const DofLayout &layout = D.layout;
  const std::size_t n_elem = layout.trial_offset.size() - 1;
  const auto n = static_cast<Eigen::Index>(layout.n_trial());
  if (static_cast<std::size_t>(b.size()) != layout.n_test() ||
      C.layout.n_trial() != layout.n_trial() || C.layout.n_test() != layout.n_test())
  {
    throw ArgumentError("solve_uwvf: inconsistent dimensions");
  }

  // Blockwise truncated pseudo-inverses of D.
  std::vector<PinvBlock> pinv(n_elem);
  SolveReport report;
  report.blocks.resize(n_elem);
  for (const auto &block : D.blocks)
  {
    if (block.row_elem != block.col_elem)
    {
      throw ArgumentError("solve_uwvf: D must be block diagonal");
    }
    const std::size_t k = block.row_elem;
    pinv[k] = truncated_pinv(complex_svd(block.data), epsilon);
    report.blocks[k] = {pinv[k].sigma_max, pinv[k].sigma_min, pinv[k].rank,
                        static_cast<std::size_t>(block.data.cols())};
  }

  Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(n, n);
  for (const auto &block : C.blocks)
  {
    const auto row = static_cast<Eigen::Index>(layout.trial_offset[block.row_elem]);
    const auto col = static_cast<Eigen::Index>(layout.trial_offset[block.col_elem]);
    const Eigen::MatrixXcd &P = pinv[block.row_elem].inverse;
    M.block(row, col, P.rows(), block.data.cols()).noalias() -= P * block.data;
  }

  Eigen::VectorXcd rhs(n);
  for (std::size_t k = 0; k < n_elem; ++k)
  {
    rhs.segment(static_cast<Eigen::Index>(layout.trial_offset[k]),
                static_cast<Eigen::Index>(layout.trial_size(k))) =
        pinv[k].inverse *
        b.segment(static_cast<Eigen::Index>(layout.test_offset[k]),
                  static_cast<Eigen::Index>(layout.test_size(k)));
  }

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
  report.coefficients = lu.solve(rhs);
  if (!report.coefficients.allFinite())
  {
    std::ostringstream msg;
    msg << "solve_uwvf: singular system matrix";
    for (std::size_t k = 0; k < n_elem; ++k)
    {
      const auto &s = report.blocks[k];
      msg << "\n  block " << k << ": sigma_max=" << s.sigma_max << " sigma_min=" << s.sigma_min
          << " rank=" << s.rank << "/" << s.n_trial;
    }
    throw SolverError(msg.str());
  }

  report.residual = (M * report.coefficients - rhs).norm();
  report.rhs_norm = rhs.norm();
  report.coeff_norm = report.coefficients.norm();
  report.element_coeff_norms.resize(n_elem);
  for (std::size_t k = 0; k < n_elem; ++k)
  {
    report.element_coeff_norms[k] =
        report.coefficients
            .segment(static_cast<Eigen::Index>(layout.trial_offset[k]),
                     static_cast<Eigen::Index>(layout.trial_size(k)))
            .norm();
  }
  report.residual_warning = report.residual > 1e-8 * report.rhs_norm;
  if (report.residual_warning)
  {
    std::cerr << "warning: solve_uwvf residual " << report.residual << " exceeds 1e-8 * "
              << report.rhs_norm << "\n";
  }
  return report;
}

namespace
{

using Index = Eigen::Index;

// Truncated pseudo-inverse of a matrix of either shape.
Eigen::MatrixXcd pinv_any(const Eigen::MatrixXcd &A, double epsilon)
{
  if (A.rows() == 0 || A.cols() == 0)
  {
    return Eigen::MatrixXcd::Zero(A.cols(), A.rows());
  }
  if (A.rows() >= A.cols())
  {
    return truncated_pinv(complex_svd(A), epsilon).inverse;
  }
  return truncated_pinv(complex_svd(A.adjoint()), epsilon).inverse.adjoint();
}

struct EdgeNodes
{
  std::vector<Vec2> points;
  std::vector<double> scale;  // sqrt(w |e| / sigma)
};

EdgeNodes edge_nodes(const Mesh &mesh, std::size_t e, int n, double sigma)
{
  const Edge &edge = mesh.edge(e);
  const Vec2 &v0 = mesh.vertex(edge.endpoint_ids[0]);
  const Vec2 &v1 = mesh.vertex(edge.endpoint_ids[1]);
  const LineRule &rule = gauss_legendre(n);
  EdgeNodes out;
  out.points.resize(static_cast<std::size_t>(n));
  out.scale.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
  {
    out.points[i] = v0 + rule.nodes[i] * (v1 - v0);
    out.scale[i] = std::sqrt(rule.weights[i] * edge.length / sigma);
  }
  return out;
}

// Weighted Robin-trace samples: rows are nodes, columns are waves.
Eigen::MatrixXcd trace_samples(const EdgeNodes &nodes, const std::vector<NormalizedWave> &waves,
                               const Vec2 &normal, double sigma, int sign)
{
  const auto n = static_cast<Index>(nodes.points.size());
  Eigen::MatrixXcd M(n, static_cast<Index>(waves.size()));
  for (std::size_t p = 0; p < waves.size(); ++p)
  {
    const Complex c = robin_trace_factor(waves[p].params, normal, sigma, sign);
    for (Index i = 0; i < n; ++i)
    {
      M(i, static_cast<Index>(p)) =
          nodes.scale[static_cast<std::size_t>(i)] * c *
          waves[p].value(nodes.points[static_cast<std::size_t>(i)]);
    }
  }
  return M;
}

struct TraceBlock
{
  Eigen::MatrixXcd trial_map;  // coefficients = trial_map * y
  Eigen::MatrixXcd trial_q;    // orthonormal trial traces, all edges stacked
  Eigen::MatrixXcd test_map;
  Eigen::MatrixXcd dpinv;  // pseudo-inverse of test_q^* trial_q
  std::array<Index, 3> row_start{};
  BlockStats stats;
};

// Orthonormal coordinates of the retained trace space of `waves` on the
// element: returns (map, Q) with samples * map = Q.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> trace_coordinates(const Eigen::MatrixXcd &samples,
                                                                double epsilon, BlockStats *stats)
{
  const SvdResult svd = complex_svd(samples);
  const Eigen::VectorXd squared = svd.S.cwiseAbs2();
  const auto r = static_cast<Index>(truncation_rank(squared, epsilon));
  if (stats)
  {
    stats->sigma_max = squared(0);
    stats->sigma_min = squared(squared.size() - 1);
    stats->rank = static_cast<std::size_t>(r);
    stats->n_trial = static_cast<std::size_t>(samples.cols());
  }
  return {svd.V.leftCols(r) * svd.S.head(r).cwiseInverse().asDiagonal(), svd.U.leftCols(r)};
}

}  // namespace

int trace_node_count(double kappa, double zeta_max, double eta_max, double length,
                     std::size_t max_waves)
{
  const double spread = 1.2 * kappa * (zeta_max + eta_max) * length;
  const int n = 24 + static_cast<int>(std::ceil(spread));
  return std::max(n, static_cast<int>((max_waves + 1) / 2));
}

SolveReport solve_uwvf_traces(const Mesh &mesh, const std::vector<ElementBasis> &bases,
                              const ImpedanceData &sigma, const BoundaryDatum &g, double epsilon,
                              const RhsOptions &rhs_options)
{
  const std::size_t n_elem = mesh.num_elements();
  if (bases.size() != n_elem)
  {
    throw ArgumentError("solve_uwvf_traces: one basis per element required");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0))
  {
    throw ArgumentError("solve_uwvf_traces: epsilon must lie in (0, 1)");
  }

  // One node set per edge, shared by both neighbours.
  std::vector<int> nodes_per_edge(mesh.num_edges());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e)
  {
    const Edge &edge = mesh.edge(e);
    double zeta_max = 1.0;
    double eta_max = 0.0;
    std::size_t max_waves = 1;
    for (std::size_t k : {edge.left_elem, edge.right_elem})
    {
      if (k == kNoElement)
      {
        continue;
      }
      for (const auto *set : {&bases[k].trial, &bases[k].test})
      {
        max_waves = std::max(max_waves, set->size());
        for (const auto &w : *set)
        {
          zeta_max = std::max(zeta_max, w.params.zeta);
          eta_max = std::max(eta_max, w.params.eta);
        }
      }
    }
    const double kappa = bases[edge.left_elem].trial.empty()
                             ? 1.0
                             : bases[edge.left_elem].trial.front().params.kappa;
    nodes_per_edge[e] = trace_node_count(kappa, zeta_max, eta_max, edge.length, max_waves);
  }

  std::vector<TraceBlock> blocks(n_elem);
  std::vector<Index> offset(n_elem + 1, 0);
  for (std::size_t k = 0; k < n_elem; ++k)
  {
    const auto &basis = bases[k];
    if (basis.trial.empty() || basis.test.size() < 1)
    {
      throw ArgumentError("solve_uwvf_traces: element " + std::to_string(k) +
                          " has an empty basis");
    }
    TraceBlock &tb = blocks[k];
    Index rows = 0;
    const auto &edges = mesh.element_edges(k);
    for (std::size_t j = 0; j < 3; ++j)
    {
      tb.row_start[j] = rows;
      rows += nodes_per_edge[edges[j]];
    }
    Eigen::MatrixXcd A(rows, static_cast<Index>(basis.trial.size()));
    Eigen::MatrixXcd B(rows, static_cast<Index>(basis.test.size()));
    for (std::size_t j = 0; j < 3; ++j)
    {
      const std::size_t e = edges[j];
      const double s = sigma.on_edge(mesh.edge(e));
      const EdgeNodes nodes = edge_nodes(mesh, e, nodes_per_edge[e], s);
      const Vec2 n = mesh.outward_normal(e, k);
      A.middleRows(tb.row_start[j], nodes_per_edge[e]) = trace_samples(nodes, basis.trial, n, s, -1);
      B.middleRows(tb.row_start[j], nodes_per_edge[e]) = trace_samples(nodes, basis.test, n, s, -1);
    }
    auto [trial_map, trial_q] = trace_coordinates(A, epsilon, &tb.stats);
    auto [test_map, test_q] = trace_coordinates(B, epsilon, nullptr);
    tb.trial_map = std::move(trial_map);
    tb.trial_q = std::move(trial_q);
    tb.test_map = std::move(test_map);
    tb.dpinv = pinv_any(test_q.adjoint() * tb.trial_q, epsilon);
    offset[k + 1] = offset[k] + tb.trial_q.cols();
  }

  const Index n = offset[n_elem];
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(n, n);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);

  auto local_edge = [&](std::size_t k, std::size_t e) {
    const auto &edges = mesh.element_edges(k);
    return static_cast<std::size_t>(std::find(edges.begin(), edges.end(), e) - edges.begin());
  };

  for (std::size_t e = 0; e < mesh.num_edges(); ++e)
  {
    const Edge &edge = mesh.edge(e);
    const double s = sigma.on_edge(edge);
    const int ne = nodes_per_edge[e];
    if (edge.on_boundary())
    {
      const std::size_t k = edge.left_elem;
      const TraceBlock &tb = blocks[k];
      if (tb.test_map.cols() == 0)
      {
        continue;
      }
      auto integrate = [&](int nodes_n) {
        const EdgeNodes nodes = edge_nodes(mesh, e, nodes_n, s);
        const Eigen::MatrixXcd plus =
            trace_samples(nodes, bases[k].test, edge.normal, s, +1) * tb.test_map;
        Eigen::VectorXcd gs(nodes_n);
        for (int i = 0; i < nodes_n; ++i)
        {
          gs(i) = nodes.scale[static_cast<std::size_t>(i)] *
                  g(nodes.points[static_cast<std::size_t>(i)], edge.normal);
        }
        return Eigen::VectorXcd(plus.adjoint() * gs);
      };
      int nodes_n = ne;
      Eigen::VectorXcd coarse = integrate(nodes_n);
      for (;;)
      {
        const int finer = 2 * nodes_n;
        Eigen::VectorXcd fine = integrate(finer);
        const double change = (fine - coarse).norm();
        coarse = std::move(fine);
        nodes_n = finer;
        if (change <= rhs_options.tolerance * coarse.norm() || 2 * nodes_n > rhs_options.max_nodes)
        {
          break;
        }
      }
      rhs.segment(offset[k], tb.trial_q.cols()) += tb.dpinv * coarse;
      continue;
    }

    const EdgeNodes nodes = edge_nodes(mesh, e, ne, s);
    for (const auto &[source, target] : {std::pair{edge.left_elem, edge.right_elem},
                                        std::pair{edge.right_elem, edge.left_elem}})
    {
      const TraceBlock &src = blocks[source];
      const TraceBlock &tgt = blocks[target];
      const Eigen::MatrixXcd plus =
          trace_samples(nodes, bases[target].test, mesh.outward_normal(e, target), s, +1) *
          tgt.test_map;
      const auto minus = src.trial_q.middleRows(src.row_start[local_edge(source, e)], ne);
      M.block(offset[target], offset[source], tgt.trial_q.cols(), src.trial_q.cols()).noalias() -=
          tgt.dpinv * (plus.adjoint() * minus);
    }
  }

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
  const Eigen::VectorXcd y = lu.solve(rhs);
  SolveReport report;
  report.blocks.resize(n_elem);
  for (std::size_t k = 0; k < n_elem; ++k)
  {
    report.blocks[k] = blocks[k].stats;
  }
  if (!y.allFinite())
  {
    std::ostringstream msg;
    msg << "solve_uwvf_traces: singular system matrix";
    for (std::size_t k = 0; k < n_elem; ++k)
    {
      const auto &st = report.blocks[k];
      msg << "\n  block " << k << ": sigma_max=" << st.sigma_max << " sigma_min=" << st.sigma_min
          << " rank=" << st.rank << "/" << st.n_trial;
    }
    throw SolverError(msg.str());
  }

  const DofLayout layout = make_layout(bases);
  report.coefficients.resize(static_cast<Index>(layout.n_trial()));
  report.element_coeff_norms.resize(n_elem);
  for (std::size_t k = 0; k < n_elem; ++k)
  {
    const auto seg = blocks[k].trial_map * y.segment(offset[k], blocks[k].trial_q.cols());
    report.coefficients.segment(static_cast<Index>(layout.trial_offset[k]), seg.rows()) = seg;
    report.element_coeff_norms[k] = seg.norm();
  }
  report.residual = (M * y - rhs).norm();
  report.rhs_norm = rhs.norm();
  report.coeff_norm = report.coefficients.norm();
  report.residual_warning = report.residual > 1e-8 * report.rhs_norm;
  if (report.residual_warning)
  {
    std::cerr << "warning: solve_uwvf_traces residual " << report.residual << " exceeds 1e-8 * "
              << report.rhs_norm << "\n";
  }
  return report;
}

std::string_view to_string(SolverMethod method)
{
  return method == SolverMethod::Trace ? "trace" : "gram";
}

SolverMethod parse_solver_method(std::string_view text)
{
  if (text == "trace")
  {
    return SolverMethod::Trace;
  }
  if (text == "gram")
  {
    return SolverMethod::Gram;
  }
  throw ArgumentError("unknown solver method '" + std::string(text) + "' (expected trace or gram)");
}

SolveReport solve_problem(const Mesh &mesh, const std::vector<ElementBasis> &bases,
                          const ImpedanceData &sigma, const BoundaryDatum &g, double epsilon,
                          SolverMethod method, const RhsOptions &rhs)
{
  if (method == SolverMethod::Trace)
  {
    return solve_uwvf_traces(mesh, bases, sigma, g, epsilon, rhs);
  }
  const BlockMatrix D = assemble_D(mesh, bases, sigma);
  const BlockMatrix C = assemble_C(mesh, bases, sigma);
  const Eigen::VectorXcd b = assemble_rhs(mesh, bases, sigma, g, rhs);
  return solve_uwvf(D, C, b, epsilon);
}

}  // namespace trefftz
