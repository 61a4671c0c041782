#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "trefftz/assembly.hpp"
#include "trefftz/mesh.hpp"
#include "trefftz/regsolve.hpp"
#include "trefftz/waves.hpp"

namespace trefftz
{

/// Piecewise Trefftz function: per-element trial bases with coefficients.
class DiscreteField
{
public:
  DiscreteField(const Mesh &mesh, const std::vector<ElementBasis> &bases,
                Eigen::VectorXcd coefficients);

  const Mesh &mesh() const { return *mesh_; }
  const std::vector<ElementBasis> &bases() const { return *bases_; }
  const Eigen::VectorXcd &coefficients() const { return coefficients_; }

  /// Value and gradient of the restriction to element k at x (x need not lie
  /// in k).
  FieldValue eval_on(std::size_t k, const Vec2 &x) const;

private:
  const Mesh *mesh_;
  const std::vector<ElementBasis> *bases_;
  Eigen::VectorXcd coefficients_;
  DofLayout layout_;
};

class PointLocationError : public Error
{
public:
  using Error::Error;
};

/// Lowest-numbered element containing x (barycentric tolerance 1e-12), if any.
std::optional<std::size_t> locate_element(const Mesh &mesh, const Vec2 &x);

/// Throws PointLocationError when x lies outside the mesh.
FieldValue eval_field(const DiscreteField &field, const Vec2 &x);

struct ErrorReport
{
  double kappa = 0.0;
  double absolute = 0.0;      // (int |grad e|^2 + kappa^2 |e|^2)^{1/2}
  double reference_norm = 0.0;
  double relative = 0.0;
  std::vector<double> element_contributions;  // squared, per element
  double refinement_delta = 0.0;  // relative change under one more subdivision
  bool quadrature_flag = false;   // refinement_delta > 10%
  int max_level = 0;
};

struct H1Options
{
  int degree = 10;
  double max_kappa_h = 4.0;  // subdivide until kappa zeta_max h_sub <= this
  bool refinement_check = true;
};

/// kappa-weighted H^1 error of the discrete field against a reference.
ErrorReport h1_error(const DiscreteField &field, const ReferenceField &reference, double kappa,
                     const H1Options &options = {});

/// Subdivision level used for an element of diameter `diameter` when the
/// largest apparent wavenumber in its basis is kappa * zeta_max.
int subdivision_level(double diameter, double kappa, double zeta_max, double max_kappa_h);

struct StabilityProbeReport
{
  BasisMode mode = BasisMode::EPW;
  int m = 0;
  int P = 0;
  double kappa = 0.0;
  double delta = 0.0;    // relative least-squares residual on the sample points
  double mu_norm = 0.0;  // Euclidean norm of the coefficient vector
  std::size_t rank = 0;
};

struct ProbeOptions
{
  double rotation = 0.0;  // target is J_m(kappa r) e^{i m (theta - rotation)}
  int normalization_points = 64;
  int interior_points = 1024;
  std::uint64_t stream_offset = 0;
};

/// Least-squares fit of the circular wave J_m(kappa r) e^{i m theta} on the
/// unit disc by P sampled plane waves, regularised by truncated SVD. The target
/// is scaled to unit root-mean-square over the sample points.
StabilityProbeReport stability_probe(int m, double kappa, int P, BasisMode mode,
                                     double epsilon = kDefaultEpsilon,
                                     const ProbeOptions &options = {});

}  // namespace trefftz
