#include "trefftz/oracles/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <Eigen/Eigenvalues>

namespace trefftz::oracles
{

namespace
{

using Real = boost::multiprecision::cpp_bin_float_100;
// the phi0 series cancels ~|a|/ln(10) digits when Re a < 0 or a is near the imaginary axis
using WideReal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<250>>;

Real pi() { return boost::math::constants::pi<Real>(); }
Real euler_gamma() { return boost::math::constants::euler<Real>(); }

// sum_k (-1)^k (x/2)^{2k+m} / (k! (k+m)!)
Real j_series(int m, const Real &x)
{
  const Real half = x / 2;
  const Real q = half * half;
  Real term = 1;
  for (int i = 1; i <= m; ++i)
  {
    term *= half / i;
  }
  Real sum = term;
  for (int k = 1; k < 100000; ++k)
  {
    term *= -q / (Real(k) * Real(k + m));
    sum += term;
    if (k > x && abs(term) < 1e-90 * abs(sum))
    {
      break;
    }
  }
  return sum;
}

}  // namespace

Eigen::VectorXd jacobi_singular_values(const Eigen::MatrixXcd &A)
{
  Eigen::MatrixXcd W = A;
  const Eigen::Index n = W.cols();
  for (int sweep = 0; sweep < 100; ++sweep)
  {
    bool rotated = false;
    for (Eigen::Index i = 0; i + 1 < n; ++i)
    {
      for (Eigen::Index j = i + 1; j < n; ++j)
      {
        const double alpha = W.col(i).squaredNorm();
        const double beta = W.col(j).squaredNorm();
        const Complex gamma = W.col(i).dot(W.col(j));  // conj(a_i) . a_j
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= 1e-15 * std::sqrt(alpha * beta))
        {
          continue;
        }
        rotated = true;
        // rotate a_i and e^{-i arg gamma} a_j, whose inner product is real
        const Complex phase = std::conj(gamma) / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        const Eigen::VectorXcd ai = W.col(i);
        const Eigen::VectorXcd aj = W.col(j) * phase;
        W.col(i) = c * ai - s * aj;
        W.col(j) = s * ai + c * aj;
      }
    }
    if (!rotated)
    {
      break;
    }
  }
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    s(i) = W.col(i).norm();
  }
  std::sort(s.data(), s.data() + n, std::greater<>());
  return s;
}

GaussRule golub_welsch(int n)
{
  if (n < 1)
  {
    throw std::invalid_argument("golub_welsch: n must be positive");
  }
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k)
  {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
  {
    rule.nodes[static_cast<std::size_t>(i)] = eig.eigenvalues()(i);
    const double v = eig.eigenvectors()(0, i);
    rule.weights[static_cast<std::size_t>(i)] = 2.0 * v * v;
  }
  return rule;
}

namespace
{

const GaussRule &cached_rule(int n)
{
  static std::map<int, GaussRule> rules;
  auto it = rules.find(n);
  if (it == rules.end())
  {
    it = rules.emplace(n, golub_welsch(n)).first;
  }
  return it->second;
}

Complex raw_wave(const NormalizedWave &w, const Vec2 &x)
{
  const Complex phase = w.params.d[0] * x.x + w.params.d[1] * x.y;
  return std::exp(Complex(0.0, w.params.kappa) * phase - w.log_norm);
}

}  // namespace

Complex edge_integral_quadrature(const Vec2 &v0, const Vec2 &v1, const NormalizedWave &wq,
                                 const NormalizedWave &wr, int n)
{
  const GaussRule &rule = cached_rule(n);
  const double length = std::hypot(v1.x - v0.x, v1.y - v0.y);
  Complex sum = 0.0;
  for (int i = 0; i < n; ++i)
  {
    const double t = 0.5 * (rule.nodes[static_cast<std::size_t>(i)] + 1.0);
    const Vec2 x{v0.x + t * (v1.x - v0.x), v0.y + t * (v1.y - v0.y)};
    sum += rule.weights[static_cast<std::size_t>(i)] * raw_wave(wq, x) * std::conj(raw_wave(wr, x));
  }
  return 0.5 * length * sum;
}

double edge_integral_scale(const Vec2 &v0, const Vec2 &v1, const NormalizedWave &wq,
                           const NormalizedWave &wr, int n)
{
  const GaussRule &rule = cached_rule(n);
  const double length = std::hypot(v1.x - v0.x, v1.y - v0.y);
  double nq = 0.0;
  double nr = 0.0;
  for (int i = 0; i < n; ++i)
  {
    const double t = 0.5 * (rule.nodes[static_cast<std::size_t>(i)] + 1.0);
    const Vec2 x{v0.x + t * (v1.x - v0.x), v0.y + t * (v1.y - v0.y)};
    nq += rule.weights[static_cast<std::size_t>(i)] * std::norm(raw_wave(wq, x));
    nr += rule.weights[static_cast<std::size_t>(i)] * std::norm(raw_wave(wr, x));
  }
  return 0.5 * length * std::sqrt(nq * nr);
}

double bessel_j_series(int m, double x)
{
  if (m < 0 || x < 0.0)
  {
    throw std::invalid_argument("bessel_j_series: need m >= 0, x >= 0");
  }
  return static_cast<double>(j_series(m, Real(x)));
}

double bessel_y_series(int m, double x)
{
  if (!(x > 0.0) || (m != 0 && m != 1))
  {
    throw std::invalid_argument("bessel_y_series: need m in {0, 1}, x > 0");
  }
  const Real X(x);
  const Real half = X / 2;
  const Real q = half * half;
  const Real g = euler_gamma();
  const Real log_half = log(half);
  if (m == 0)
  {
    // (2/pi) [ (ln(x/2) + gamma) J0 + sum_{k>=1} (-1)^{k+1} H_k q^k / (k!)^2 ]
    Real term = 1;
    Real harmonic = 0;
    Real sum = 0;
    for (int k = 1; k < 100000; ++k)
    {
      term *= -q / (Real(k) * Real(k));
      harmonic += Real(1) / k;
      const Real add = -term * harmonic;
      sum += add;
      if (k > x && abs(add) < 1e-90 * abs(sum))
      {
        break;
      }
    }
    return static_cast<double>(2 / pi() * ((log_half + g) * j_series(0, X) + sum));
  }
  // -2/(pi x) + (2/pi) ln(x/2) J1 - (1/pi) sum_k (psi(k+1) + psi(k+2)) (-q)^k (x/2) / (k! (k+1)!)
  Real term = half;  // (x/2) (-q)^k / (k! (k+1)!)
  Real harmonic = 0;  // H_k
  Real sum = 0;
  for (int k = 0; k < 100000; ++k)
  {
    if (k > 0)
    {
      term *= -q / (Real(k) * Real(k + 1));
      harmonic += Real(1) / k;
    }
    const Real psi_sum = (harmonic - g) + (harmonic + Real(1) / (k + 1) - g);
    const Real add = psi_sum * term;
    sum += add;
    if (k > x && abs(add) < 1e-90 * abs(sum))
    {
      break;
    }
  }
  const Real value = -2 / (pi() * X) + 2 / pi() * log_half * j_series(1, X) - sum / pi();
  return static_cast<double>(value);
}

Complex phi0_series(Complex a, int terms)
{
  const WideReal ar(a.real());
  const WideReal ai(a.imag());
  WideReal tr = 1;
  WideReal ti = 0;
  WideReal sr = 1;
  WideReal si = 0;
  const double mag = std::abs(a);
  for (int k = 1; k < terms; ++k)
  {
    // t <- t * a / (k + 1)
    const WideReal nr = (tr * ar - ti * ai) / (k + 1);
    const WideReal ni = (tr * ai + ti * ar) / (k + 1);
    tr = nr;
    ti = ni;
    sr += tr;
    si += ti;
    if (k > mag && abs(tr) + abs(ti) < 1e-60 * (abs(sr) + abs(si)))
    {
      break;
    }
  }
  return {static_cast<double>(sr), static_cast<double>(si)};
}

}  // namespace trefftz::oracles
