#include "trefftz/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trefftz/quadrature.hpp"
#include "trefftz/specialfn.hpp"

namespace trefftz
{

namespace
{

std::vector<Complex> trace_factors(const std::vector<NormalizedWave> &waves, const Vec2 &normal,
                                   double sigma, int sign)
{
  std::vector<Complex> c(waves.size());
  for (std::size_t i = 0; i < waves.size(); ++i)
  {
    c[i] = robin_trace_factor(waves[i].params, normal, sigma, sign);
  }
  return c;
}

// rows: test waves of the receiving element, cols: trial waves of the source
// element; entry sigma^-1 c_trial[q] conj(c_test[r]) int EW_q conj(EW_r).
void accumulate_edge_block(Eigen::MatrixXcd &block, const Vec2 &v0, const Vec2 &v1,
                           const std::vector<NormalizedWave> &trial,
                           const std::vector<Complex> &c_trial,
                           const std::vector<NormalizedWave> &test,
                           const std::vector<Complex> &c_test, double sigma)
{
  const double inv_sigma = 1.0 / sigma;
  for (std::size_t q = 0; q < trial.size(); ++q)
  {
    const Complex cq = inv_sigma * c_trial[q];
    for (std::size_t r = 0; r < test.size(); ++r)
    {
      block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(q)) +=
          cq * std::conj(c_test[r]) * edge_integral(v0, v1, trial[q], test[r]);
    }
  }
}

}  // namespace

DofLayout make_layout(const std::vector<ElementBasis> &bases)
{
  DofLayout layout;
  layout.trial_offset.assign(bases.size() + 1, 0);
  layout.test_offset.assign(bases.size() + 1, 0);
  for (std::size_t k = 0; k < bases.size(); ++k)
  {
    layout.trial_offset[k + 1] = layout.trial_offset[k] + bases[k].trial.size();
    layout.test_offset[k + 1] = layout.test_offset[k] + bases[k].test.size();
  }
  return layout;
}

Eigen::MatrixXcd BlockMatrix::to_dense() const
{
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows()),
                                                  static_cast<Eigen::Index>(cols()));
  for (const auto &b : blocks)
  {
    dense.block(static_cast<Eigen::Index>(layout.test_offset[b.row_elem]),
                static_cast<Eigen::Index>(layout.trial_offset[b.col_elem]), b.data.rows(),
                b.data.cols()) += b.data;
  }
  return dense;
}

Eigen::VectorXcd BlockMatrix::multiply(const Eigen::VectorXcd &x) const
{
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(rows()));
  for (const auto &b : blocks)
  {
    y.segment(static_cast<Eigen::Index>(layout.test_offset[b.row_elem]), b.data.rows()) +=
        b.data * x.segment(static_cast<Eigen::Index>(layout.trial_offset[b.col_elem]),
                           b.data.cols());
  }
  return y;
}

double BlockMatrix::frobenius_norm() const
{
  return to_dense().norm();
}

Complex robin_trace_factor(const EpwParams &w, const Vec2 &normal, double sigma, int sign)
{
  if (sign != 1 && sign != -1)
  {
    throw ArgumentError("robin_trace_factor: sign must be +1 or -1");
  }
  const Complex ik(0.0, w.kappa);
  return static_cast<double>(sign) * ik * dot(w.d, normal) - ik * sigma;
}

Complex edge_integral(const Vec2 &v0, const Vec2 &v1, const NormalizedWave &wq,
                      const NormalizedWave &wr)
{
  const Vec2 t = v1 - v0;
  const double length = norm(t);
  // exponent of wq * conj(wr) along x = v0 + s t, s in [0, 1]
  const Complex start = wq.exponent(v0) + std::conj(wr.exponent(v0));
  const Complex ikq(0.0, wq.params.kappa);
  const Complex ikr(0.0, wr.params.kappa);
  const Complex slope =
      ikq * dot(wq.params.d, t) - ikr * (std::conj(wr.params.d[0]) * t.x + std::conj(wr.params.d[1]) * t.y);
  // Factor out the larger endpoint so the exponential never overflows.
  if (slope.real() <= 0.0)
  {
    return length * std::exp(start) * phi0(slope);
  }
  return length * std::exp(start + slope) * phi0(-slope);
}

BlockMatrix assemble_D(const Mesh &mesh, const std::vector<ElementBasis> &bases,
                       const ImpedanceData &sigma)
{
  if (bases.size() != mesh.num_elements())
  {
    throw ArgumentError("assemble_D: one basis per element required");
  }
  BlockMatrix D;
  D.layout = make_layout(bases);
  D.blocks.resize(mesh.num_elements());
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
  {
    const auto &basis = bases[k];
    auto &block = D.blocks[k];
    block.row_elem = k;
    block.col_elem = k;
    block.data = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(basis.test.size()),
                                        static_cast<Eigen::Index>(basis.trial.size()));
    for (auto e : mesh.element_edges(k))
    {
      const Edge &edge = mesh.edge(e);
      const Vec2 n = mesh.outward_normal(e, k);
      const double s = sigma.on_edge(edge);
      const auto c_trial = trace_factors(basis.trial, n, s, -1);
      const auto c_test = trace_factors(basis.test, n, s, -1);
      accumulate_edge_block(block.data, mesh.vertex(edge.endpoint_ids[0]),
                            mesh.vertex(edge.endpoint_ids[1]), basis.trial, c_trial, basis.test,
                            c_test, s);
    }
  }
  return D;
}

BlockMatrix assemble_C(const Mesh &mesh, const std::vector<ElementBasis> &bases,
                       const ImpedanceData &sigma)
{
  if (bases.size() != mesh.num_elements())
  {
    throw ArgumentError("assemble_C: one basis per element required");
  }
  BlockMatrix C;
  C.layout = make_layout(bases);
  for (std::size_t e = 0; e < mesh.num_edges(); ++e)
  {
    const Edge &edge = mesh.edge(e);
    if (edge.on_boundary())
    {
      continue;
    }
    const Vec2 &v0 = mesh.vertex(edge.endpoint_ids[0]);
    const Vec2 &v1 = mesh.vertex(edge.endpoint_ids[1]);
    const double s = sigma.on_edge(edge);
    for (const auto &[source, target] : {std::pair{edge.left_elem, edge.right_elem},
                                        std::pair{edge.right_elem, edge.left_elem}})
    {
      const auto &trial = bases[source].trial;
      const auto &test = bases[target].test;
      const auto c_trial = trace_factors(trial, mesh.outward_normal(e, source), s, -1);
      const auto c_test = trace_factors(test, mesh.outward_normal(e, target), s, +1);
      BlockMatrix::Block block;
      block.row_elem = target;
      block.col_elem = source;
      block.data = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(test.size()),
                                          static_cast<Eigen::Index>(trial.size()));
      accumulate_edge_block(block.data, v0, v1, trial, c_trial, test, c_test, s);
      C.blocks.push_back(std::move(block));
    }
  }
  return C;
}

int rhs_node_count(double kappa, double zeta_max, double eta_max, double length)
{
  const double n = std::ceil(1.5 * (kappa * zeta_max * length + kappa * eta_max * length));
  return std::max(12, static_cast<int>(n));
}

Eigen::VectorXcd assemble_rhs(const Mesh &mesh, const std::vector<ElementBasis> &bases,
                              const ImpedanceData &sigma, const BoundaryDatum &g,
                              const RhsOptions &options)
{
  const DofLayout layout = make_layout(bases);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.n_test()));

  for (auto e : mesh.boundary_edges())
  {
    const Edge &edge = mesh.edge(e);
    const std::size_t k = edge.left_elem;
    const auto &test = bases[k].test;
    if (test.empty())
    {
      continue;
    }
    const Vec2 &v0 = mesh.vertex(edge.endpoint_ids[0]);
    const Vec2 &v1 = mesh.vertex(edge.endpoint_ids[1]);
    const Vec2 n = edge.normal;
    const double s = sigma.sigma_boundary;
    const auto c_plus = trace_factors(test, n, s, +1);

    double zeta_max = 1.0;
    double eta_max = 0.0;
    for (const auto &w : test)
    {
      zeta_max = std::max(zeta_max, w.params.zeta);
      eta_max = std::max(eta_max, w.params.eta);
    }
    const double kappa = test.front().params.kappa;

    auto integrate = [&](int nodes) {
      const LineRule &rule = gauss_legendre(nodes);
      Eigen::VectorXcd local = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(test.size()));
      for (int i = 0; i < nodes; ++i)
      {
        const Vec2 x = v0 + rule.nodes[i] * (v1 - v0);
        const Complex gx = g(x, n) * (rule.weights[i] * edge.length / s);
        if (gx == 0.0)
        {
          continue;
        }
        for (std::size_t r = 0; r < test.size(); ++r)
        {
          local(static_cast<Eigen::Index>(r)) += gx * std::conj(c_plus[r] * test[r].value(x));
        }
      }
      return local;
    };

    int nodes = rhs_node_count(kappa, zeta_max, eta_max, edge.length);
    Eigen::VectorXcd coarse = integrate(nodes);
    for (;;)
    {
      const int finer = 2 * nodes;
      Eigen::VectorXcd fine = integrate(finer);
      const double change = (fine - coarse).norm();
      coarse = std::move(fine);
      nodes = finer;
      if (change <= options.tolerance * coarse.norm() || 2 * nodes > options.max_nodes)
      {
        break;
      }
    }
    b.segment(static_cast<Eigen::Index>(layout.test_offset[k]), coarse.size()) += coarse;
  }
  return b;
}

BoundaryDatum manufacture_g(ReferenceField reference, double sigma, double kappa)
{
  return [reference = std::move(reference), sigma, kappa](const Vec2 &x, const Vec2 &n) {
    const FieldValue u = reference(x);
    return u.gradient[0] * n.x + u.gradient[1] * n.y - Complex(0.0, kappa * sigma) * u.value;
  };
}

}  // namespace trefftz
