#include "trefftz/waves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "trefftz/sobol.hpp"

namespace trefftz
{

namespace
{

constexpr double kLogTiny = -690.7755278982137;  // log(1e-300)
constexpr double kLogHuge = 690.7755278982137;   // log(1e300)

Complex clamped_exp(double re, double im)
{
  const double mag = std::exp(std::clamp(re, kLogTiny, kLogHuge));
  return {mag * std::cos(im), mag * std::sin(im)};
}

// Real and imaginary parts of i kappa d.x.
std::pair<double, double> exponent_parts(const EpwParams &w, const Vec2 &x)
{
  const double re_dx = w.d[0].real() * x.x + w.d[1].real() * x.y;
  const double im_dx = w.d[0].imag() * x.x + w.d[1].imag() * x.y;
  return {-w.kappa * im_dx, w.kappa * re_dx};
}

}  // namespace

std::string_view to_string(BasisMode mode)
{
  return mode == BasisMode::PPW ? "PPW" : "EPW";
}

BasisMode parse_basis_mode(std::string_view text)
{
  if (text == "PPW" || text == "ppw")
  {
    return BasisMode::PPW;
  }
  if (text == "EPW" || text == "epw")
  {
    return BasisMode::EPW;
  }
  throw ArgumentError("unknown basis mode '" + std::string(text) + "'");
}

Vec2 EpwParams::propagation() const
{
  return {std::cos(theta), std::sin(theta)};
}

Vec2 EpwParams::evanescence() const
{
  return {-phi * std::sin(theta), phi * std::cos(theta)};
}

EpwParams make_epw(double theta, double phi, double eta, double kappa)
{
  if (!(eta >= 0.0) || !std::isfinite(eta))
  {
    throw ArgumentError("make_epw: eta must be finite and non-negative");
  }
  if (!(kappa > 0.0) || !std::isfinite(kappa))
  {
    throw ArgumentError("make_epw: kappa must be positive");
  }
  if (phi != 1.0 && phi != -1.0)
  {
    throw ArgumentError("make_epw: phi must be +1 or -1");
  }
  EpwParams w;
  w.theta = theta;
  w.phi = phi;
  w.eta = eta;
  w.zeta = std::hypot(1.0, eta);
  w.kappa = kappa;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  w.d = {Complex(w.zeta * c, -eta * phi * s), Complex(w.zeta * s, eta * phi * c)};
  return w;
}

Complex epw_eval(const EpwParams &w, const Vec2 &x)
{
  const auto [re, im] = exponent_parts(w, x);
  return clamped_exp(re, im);
}

CVec2 epw_grad(const EpwParams &w, const Vec2 &x)
{
  const Complex v = epw_eval(w, x);
  const Complex ik(0.0, w.kappa);
  return {ik * w.d[0] * v, ik * w.d[1] * v};
}

double NormalizedWave::norm_factor() const
{
  return std::exp(log_norm);
}

Complex NormalizedWave::exponent(const Vec2 &x) const
{
  const auto [re, im] = exponent_parts(params, x);
  return {re - log_norm, im};
}

Complex NormalizedWave::value(const Vec2 &x) const
{
  const Complex e = exponent(x);
  return clamped_exp(e.real(), e.imag());
}

CVec2 NormalizedWave::gradient(const Vec2 &x) const
{
  return eval(x).gradient;
}

FieldValue NormalizedWave::eval(const Vec2 &x) const
{
  const Complex v = value(x);
  const Complex ik(0.0, params.kappa);
  return {v, {ik * params.d[0] * v, ik * params.d[1] * v}};
}

NormalizedWave normalize_on(const EpwParams &w, std::span<const Vec2> anchor)
{
  if (anchor.empty())
  {
    throw ArgumentError("normalize_on: empty anchor set");
  }
  double log_max = -std::numeric_limits<double>::infinity();
  for (const auto &p : anchor)
  {
    log_max = std::max(log_max, exponent_parts(w, p).first);
  }
  return {w, log_max};
}

SamplePoint sample_point(std::uint64_t index)
{
  if (index > std::numeric_limits<std::uint32_t>::max())
  {
    throw ArgumentError("sample_point: Sobol index exceeds 2^32 - 1");
  }
  const auto u = sobol3(static_cast<std::uint32_t>(index));
  return {2.0 * std::numbers::pi * u[0], u[1] >= 0.5 ? 1.0 : -1.0, u[2]};
}

std::vector<NormalizedWave> sample_basis(std::span<const Vec2> anchor, double diameter, int P,
                                         double kappa, BasisMode mode,
                                         std::uint64_t stream_offset)
{
  if (P < 1)
  {
    throw ArgumentError("sample_basis: P must be at least 1");
  }
  if (!(diameter > 0.0))
  {
    throw ArgumentError("sample_basis: diameter must be positive");
  }
  const double level = mode == BasisMode::PPW ? 0.0 : P / 4.0;
  const double stretch = 2.0 * level / (kappa * diameter);

  std::vector<NormalizedWave> waves;
  waves.reserve(static_cast<std::size_t>(P));
  for (int p = 0; p < P; ++p)
  {
    const SamplePoint y = sample_point(stream_offset + static_cast<std::uint64_t>(p));
    const double zeta = std::max(1.0, stretch * y.xi);
    const double eta = std::sqrt((zeta - 1.0) * (zeta + 1.0));
    waves.push_back(normalize_on(make_epw(y.theta, y.phi, eta, kappa), anchor));
  }
  return waves;
}

std::vector<NormalizedWave> sample_basis(const std::array<Vec2, 3> &triangle, int P,
                                         double kappa, BasisMode mode,
                                         std::uint64_t stream_offset)
{
  return sample_basis(std::span<const Vec2>(triangle), diameter_of(triangle), P, kappa, mode,
                      stream_offset);
}

int oversampled_count(int n_trial, double ratio)
{
  if (!(ratio >= 1.0))
  {
    throw ArgumentError("oversampling ratio must be >= 1");
  }
  const int n = static_cast<int>(std::ceil(ratio * n_trial - 1e-9));
  return std::max(n, n_trial);
}

std::vector<ElementBasis> build_bases(const Mesh &mesh, const BasisConfig &config)
{
  const int n_trial = config.trial_per_element;
  const int n_test = oversampled_count(n_trial, config.oversampling);
  const std::uint64_t stride = static_cast<std::uint64_t>(n_trial + n_test);
  std::vector<ElementBasis> bases(mesh.num_elements());
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
  {
    const auto corners = mesh.corners(k);
    const std::uint64_t offset = config.stream_offset + k * stride;
    bases[k].elem_id = k;
    bases[k].trial = sample_basis(corners, n_trial, config.kappa, config.mode, offset);
    bases[k].test = sample_basis(corners, n_test, config.kappa, config.mode, offset + n_trial);
  }
  return bases;
}

std::vector<ElementBasis> build_square_bases(const Mesh &mesh, int P, double kappa,
                                             BasisMode mode, std::uint64_t stream_offset)
{
  std::vector<ElementBasis> bases(mesh.num_elements());
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
  {
    const auto corners = mesh.corners(k);
    bases[k].elem_id = k;
    bases[k].trial = sample_basis(corners, P, kappa, mode, stream_offset + k * P);
    bases[k].test = bases[k].trial;
  }
  return bases;
}

}  // namespace trefftz
