#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "trefftz/mesh.hpp"
#include "trefftz/types.hpp"

namespace trefftz
{

/// PPW: propagative waves only (L = 0 in the sampling recipe). EPW: the
/// evanescent recipe with L = P/4.
enum class BasisMode
{
  PPW,
  EPW
};

std::string_view to_string(BasisMode mode);
BasisMode parse_basis_mode(std::string_view text);

/// Evanescent plane wave x -> exp(i kappa d.x) with complex direction
///   d = zeta (cos t, sin t) + i eta phi (-sin t, cos t),  zeta = sqrt(1 + eta^2),
/// so that d.d = 1. eta = 0 gives a propagative plane wave.
struct EpwParams
{
  double theta = 0.0;  // propagation angle
  double phi = 1.0;    // +1 / -1, side of the decay direction
  double eta = 0.0;    // evanescence strength |Im d|
  double zeta = 1.0;   // |Re d|
  double kappa = 1.0;
  CVec2 d{};

  Vec2 propagation() const;
  /// Unit decay direction e; the wave decays like exp(-kappa eta e.x).
  Vec2 evanescence() const;
};

EpwParams make_epw(double theta, double phi, double eta, double kappa);

/// Magnitudes are clamped to [1e-300, 1e300]; the phase is kept.
Complex epw_eval(const EpwParams &w, const Vec2 &x);
CVec2 epw_grad(const EpwParams &w, const Vec2 &x);

/// A wave scaled by the reciprocal of its maximum modulus over an element.
/// The scale is kept as a logarithm so strongly evanescent waves never
/// overflow during normalisation.
struct NormalizedWave
{
  EpwParams params;
  double log_norm = 0.0;  // log of max |EW| over the anchor points

  double norm_factor() const;
  Complex value(const Vec2 &x) const;
  CVec2 gradient(const Vec2 &x) const;
  /// value and gradient at once
  FieldValue eval(const Vec2 &x) const;
  /// i kappa d.x - log_norm, the exponent of the normalised wave
  Complex exponent(const Vec2 &x) const;
};

NormalizedWave normalize_on(const EpwParams &w, std::span<const Vec2> anchor);

/// y_p = (theta_p, phi_p, xi_p) in [0, 2 pi) x {-1, +1} x [0, 1].
struct SamplePoint
{
  double theta = 0.0;
  double phi = 1.0;
  double xi = 0.0;
};

SamplePoint sample_point(std::uint64_t index);

/// P waves for a convex cell with the given normalisation anchor points
/// (vertices for a polygon) and diameter. Sobol indices
/// stream_offset .. stream_offset + P - 1 are used.
std::vector<NormalizedWave> sample_basis(std::span<const Vec2> anchor, double diameter, int P,
                                         double kappa, BasisMode mode,
                                         std::uint64_t stream_offset);

std::vector<NormalizedWave> sample_basis(const std::array<Vec2, 3> &triangle, int P,
                                         double kappa, BasisMode mode,
                                         std::uint64_t stream_offset);

struct ElementBasis
{
  std::size_t elem_id = 0;
  std::vector<NormalizedWave> trial;
  std::vector<NormalizedWave> test;
};

/// Number of test waves for a trial budget under the given oversampling
/// ratio, ceil(ratio * n_trial), never below n_trial.
int oversampled_count(int n_trial, double ratio);

struct BasisConfig
{
  int trial_per_element = 8;
  double oversampling = 1.1;
  double kappa = 1.0;
  BasisMode mode = BasisMode::EPW;
  std::uint64_t stream_offset = 0;
};

/// Per-element trial and test bases. Element k draws its trial waves from the
/// Sobol range starting at stream_offset + k * (n_trial + n_test) and its test
/// waves from the range immediately after.
std::vector<ElementBasis> build_bases(const Mesh &mesh, const BasisConfig &config);

/// Same, with the test space equal to the trial space.
std::vector<ElementBasis> build_square_bases(const Mesh &mesh, int P, double kappa,
                                             BasisMode mode, std::uint64_t stream_offset = 0);

}  // namespace trefftz
