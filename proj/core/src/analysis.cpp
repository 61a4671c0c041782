#include "trefftz/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "trefftz/quadrature.hpp"
#include "trefftz/sobol.hpp"
#include "trefftz/specialfn.hpp"
#include "trefftz/svd.hpp"

namespace trefftz
{

DiscreteField::DiscreteField(const Mesh &mesh, const std::vector<ElementBasis> &bases,
                             Eigen::VectorXcd coefficients)
  : mesh_(&mesh), bases_(&bases), coefficients_(std::move(coefficients)),
    layout_(make_layout(bases))
{
  if (bases.size() != mesh.num_elements())
  {
    throw ArgumentError("DiscreteField: one basis per element required");
  }
  if (static_cast<std::size_t>(coefficients_.size()) != layout_.n_trial())
  {
    throw ArgumentError("DiscreteField: coefficient length " +
                        std::to_string(coefficients_.size()) + " does not match " +
                        std::to_string(layout_.n_trial()) + " trial waves");
  }
}

FieldValue DiscreteField::eval_on(std::size_t k, const Vec2 &x) const
{
  FieldValue out{0.0, {0.0, 0.0}};
  const auto &trial = (*bases_)[k].trial;
  const auto offset = static_cast<Eigen::Index>(layout_.trial_offset[k]);
  for (std::size_t p = 0; p < trial.size(); ++p)
  {
    const Complex mu = coefficients_(offset + static_cast<Eigen::Index>(p));
    if (mu == 0.0)
    {
      continue;
    }
    const Complex v = mu * trial[p].value(x);
    const Complex ikv = Complex(0.0, trial[p].params.kappa) * v;
    out.value += v;
    out.gradient[0] += ikv * trial[p].params.d[0];
    out.gradient[1] += ikv * trial[p].params.d[1];
  }
  return out;
}

std::optional<std::size_t> locate_element(const Mesh &mesh, const Vec2 &x)
{
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
  {
    const auto c = mesh.corners(k);
    const double area2 = cross(c[1] - c[0], c[2] - c[0]);
    const double l1 = cross(c[2] - c[1], x - c[1]) / area2;
    const double l2 = cross(c[0] - c[2], x - c[2]) / area2;
    const double l0 = 1.0 - l1 - l2;
    constexpr double tol = -1e-12;
    if (l0 >= tol && l1 >= tol && l2 >= tol)
    {
      return k;
    }
  }
  return std::nullopt;
}

FieldValue eval_field(const DiscreteField &field, const Vec2 &x)
{
  const auto k = locate_element(field.mesh(), x);
  if (!k)
  {
    throw PointLocationError("eval_field: point (" + std::to_string(x.x) + ", " +
                             std::to_string(x.y) + ") lies outside the mesh");
  }
  return field.eval_on(*k, x);
}

int subdivision_level(double diameter, double kappa, double zeta_max, double max_kappa_h)
{
  int level = 0;
  double h = diameter;
  while (kappa * zeta_max * h > max_kappa_h && level < 12)
  {
    h *= 0.5;
    ++level;
  }
  return level;
}

namespace
{

struct Accumulated
{
  std::vector<double> error_sq;
  std::vector<double> reference_sq;
};

Accumulated integrate(const DiscreteField &field, const ReferenceField &reference, double kappa,
                      const H1Options &options, int extra_level, int &max_level)
{
  const Mesh &mesh = field.mesh();
  const TriangleRule &rule = triangle_rule(options.degree);
  const double k2 = kappa * kappa;
  Accumulated acc;
  acc.error_sq.assign(mesh.num_elements(), 0.0);
  acc.reference_sq.assign(mesh.num_elements(), 0.0);
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
  {
    double zeta_max = 1.0;
    for (const auto &w : field.bases()[k].trial)
    {
      zeta_max = std::max(zeta_max, w.params.zeta);
    }
    const int level =
        subdivision_level(mesh.triangle(k).diameter, kappa, zeta_max, options.max_kappa_h) +
        extra_level;
    max_level = std::max(max_level, level);
    const PointRule points = subdivided_triangle_rule(mesh.corners(k), level, rule);
    double err = 0.0;
    double ref = 0.0;
    for (std::size_t q = 0; q < points.points.size(); ++q)
    {
      const FieldValue uh = field.eval_on(k, points.points[q]);
      const FieldValue u = reference(points.points[q]);
      const Complex e = u.value - uh.value;
      const Complex ex = u.gradient[0] - uh.gradient[0];
      const Complex ey = u.gradient[1] - uh.gradient[1];
      const double w = points.weights[q];
      err += w * (std::norm(ex) + std::norm(ey) + k2 * std::norm(e));
      ref += w * (std::norm(u.gradient[0]) + std::norm(u.gradient[1]) + k2 * std::norm(u.value));
    }
    acc.error_sq[k] = err;
    acc.reference_sq[k] = ref;
  }
  return acc;
}

double total(const std::vector<double> &v)
{
  double s = 0.0;
  for (double x : v)
  {
    s += x;
  }
  return s;
}

}  // namespace

ErrorReport h1_error(const DiscreteField &field, const ReferenceField &reference, double kappa,
                     const H1Options &options)
{
  ErrorReport report;
  report.kappa = kappa;
  int max_level = 0;
  const Accumulated base = integrate(field, reference, kappa, options, 0, max_level);
  report.max_level = max_level;
  report.element_contributions = base.error_sq;
  report.absolute = std::sqrt(total(base.error_sq));
  report.reference_norm = std::sqrt(total(base.reference_sq));
  report.relative =
      report.reference_norm > 0.0 ? report.absolute / report.reference_norm : report.absolute;

  if (options.refinement_check)
  {
    int unused = 0;
    const Accumulated fine = integrate(field, reference, kappa, options, 1, unused);
    const double abs_fine = std::sqrt(total(fine.error_sq));
    const double ref_fine = std::sqrt(total(fine.reference_sq));
    const double rel_fine = ref_fine > 0.0 ? abs_fine / ref_fine : abs_fine;
    report.refinement_delta =
        report.relative > 0.0 ? std::abs(rel_fine - report.relative) / report.relative : 0.0;
    report.quadrature_flag = report.refinement_delta > 0.1;
  }
  return report;
}

StabilityProbeReport stability_probe(int m, double kappa, int P, BasisMode mode, double epsilon,
                                     const ProbeOptions &options)
{
  if (m < 0)
  {
    throw ArgumentError("stability_probe: m must be non-negative");
  }
  if (P < 1)
  {
    throw ArgumentError("stability_probe: P must be at least 1");
  }
  const double two_pi = 2.0 * std::numbers::pi;

  std::vector<Vec2> anchor(static_cast<std::size_t>(options.normalization_points));
  for (std::size_t j = 0; j < anchor.size(); ++j)
  {
    const double t = two_pi * static_cast<double>(j) / static_cast<double>(anchor.size());
    anchor[j] = {std::cos(t), std::sin(t)};
  }
  const auto waves = sample_basis(anchor, 2.0, P, kappa, mode, options.stream_offset);

  // boundary points first, then interior low-discrepancy points
  const int n_boundary = std::max(8 * P, 2048);
  std::vector<Vec2> points;
  points.reserve(static_cast<std::size_t>(n_boundary + options.interior_points));
  for (int j = 0; j < n_boundary; ++j)
  {
    const double t = two_pi * j / n_boundary;
    points.push_back({std::cos(t), std::sin(t)});
  }
  for (int j = 0; j < options.interior_points; ++j)
  {
    const auto u = sobol3(static_cast<std::uint32_t>(j));
    const double r = std::sqrt(u[0]);
    const double t = two_pi * u[1];
    points.push_back({r * std::cos(t), r * std::sin(t)});
  }

  const auto n_pts = static_cast<Eigen::Index>(points.size());
  Eigen::VectorXcd target(n_pts);
  Eigen::MatrixXcd A(n_pts, P);
  for (Eigen::Index j = 0; j < n_pts; ++j)
  {
    const Vec2 &x = points[static_cast<std::size_t>(j)];
    const double r = norm(x);
    const double t = std::atan2(x.y, x.x);
    const double phase = m * (t - options.rotation);
    target(j) = bessel_j(m, kappa * r) * Complex(std::cos(phase), std::sin(phase));
    for (int p = 0; p < P; ++p)
    {
      A(j, p) = waves[static_cast<std::size_t>(p)].value(x);
    }
  }
  target *= std::sqrt(static_cast<double>(n_pts)) / target.norm();

  // Reduce to a square problem with a QR step, then truncate the SVD of R.
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
  const Eigen::MatrixXcd R = qr.matrixQR().topRows(P).triangularView<Eigen::Upper>();
  const Eigen::VectorXcd qt = (qr.householderQ().adjoint() * target).head(P);
  const SvdResult svd = complex_svd(R);
  const std::size_t rank = truncation_rank(svd.S, epsilon);
  const auto r = static_cast<Eigen::Index>(rank);
  const Eigen::VectorXcd mu =
      svd.V.leftCols(r) * (svd.S.head(r).cwiseInverse().asDiagonal() *
                           (svd.U.leftCols(r).adjoint() * qt));

  StabilityProbeReport report;
  report.mode = mode;
  report.m = m;
  report.P = P;
  report.kappa = kappa;
  report.delta = (A * mu - target).norm() / target.norm();
  report.mu_norm = mu.norm();
  report.rank = rank;
  return report;
}

}  // namespace trefftz
