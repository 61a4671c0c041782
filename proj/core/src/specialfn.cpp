#include "trefftz/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace trefftz
{

using namespace std::complex_literals;

namespace
{

using Real = long double;

constexpr Real kPiL = 3.141592653589793238462643383279502884L;
constexpr Real kEulerGammaL = 0.577215664901532860606512090082402431L;

// Ascending series for J_m, evaluated in extended precision.
Real series_j(int m, Real x)
{
  const Real q = x * x / 4;
  Real term = std::exp(m * std::log(x / 2) - std::lgamma(static_cast<Real>(m) + 1));
  Real sum = term;
  for (int k = 1; k < 500; ++k)
  {
    term *= -q / (static_cast<Real>(k) * (k + m));
    sum += term;
    if (std::abs(term) <= 1e-22L * std::abs(sum))
    {
      break;
    }
  }
  return sum;
}

Real series_y0(Real x)
{
  const Real q = x * x / 4;
  Real term = 1;
  Real harmonic = 0;
  Real sum = 0;
  for (int k = 1; k < 500; ++k)
  {
    term *= -q / (static_cast<Real>(k) * k);
    harmonic += static_cast<Real>(1) / k;
    const Real contrib = -term * harmonic;
    sum += contrib;
    if (std::abs(contrib) <= 1e-22L * std::abs(sum))
    {
      break;
    }
  }
  return 2 / kPiL * ((std::log(x / 2) + kEulerGammaL) * series_j(0, x) + sum);
}

Real series_y1(Real x)
{
  const Real q = x * x / 4;
  Real term = 1;  // (-q)^k / (k! (k+1)!)
  Real h_k = 0;   // H_k
  Real sum = 0;
  for (int k = 0; k < 500; ++k)
  {
    if (k > 0)
    {
      term *= -q / (static_cast<Real>(k) * (k + 1));
      h_k += static_cast<Real>(1) / k;
    }
    const Real psi_sum = -2 * kEulerGammaL + 2 * h_k + static_cast<Real>(1) / (k + 1);
    const Real contrib = psi_sum * term;
    sum += contrib;
    if (k > 0 && std::abs(contrib) <= 1e-22L * std::abs(sum))
    {
      break;
    }
  }
  return -2 / (kPiL * x) + 2 / kPiL * std::log(x / 2) * series_j(1, x) - x / (2 * kPiL) * sum;
}

struct Asymptotic
{
  double j;
  double y;
};

// Hankel expansion J, Y = sqrt(2/(pi x)) (P cos chi -/+ ...), nu in {0, 1}.
Asymptotic hankel_asymptotic(int nu, double x)
{
  const double mu = 4.0 * nu * nu;
  double a = 1.0;
  double p = 1.0;
  double q = 0.0;
  double prev = 1.0;
  for (int k = 1; k < 200; ++k)
  {
    const double odd = 2.0 * k - 1.0;
    a *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(a) > prev)
    {
      break;
    }
    prev = std::abs(a);
    switch (k % 4)
    {
      case 1: q += a; break;
      case 2: p -= a; break;
      case 3: q -= a; break;
      default: p += a; break;
    }
    if (std::abs(a) < 1e-17)
    {
      break;
    }
  }
  const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
  const double c = std::cos(chi);
  const double s = std::sin(chi);
  const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
  return {amp * (p * c - q * s), amp * (p * s + q * c)};
}

// Miller's downward recurrence normalised by J_0 + 2 sum J_{2k} = 1.
double miller_j(int m, double x)
{
  const int top = std::max(m, static_cast<int>(std::ceil(x)));
  int start = top + 30 + static_cast<int>(std::sqrt(60.0 * top));
  start += start % 2;
  double next = 0.0;  // J_{n+1}
  double cur = 1e-300;
  double result = 0.0;
  double sum = 0.0;
  for (int n = start; n > 0; --n)
  {
    const double prev = 2.0 * n / x * cur - next;  // J_{n-1}
    next = cur;
    cur = prev;
    if (n - 1 == m)
    {
      result = cur;
    }
    if ((n - 1) % 2 == 0 && n - 1 > 0)
    {
      sum += 2.0 * cur;
    }
    if (std::abs(cur) > 1e250)
    {
      cur *= 1e-250;
      next *= 1e-250;
      result *= 1e-250;
      sum *= 1e-250;
    }
  }
  sum += cur;
  return result / sum;
}

}  // namespace

Complex expm1(Complex a)
{
  const double x = a.real();
  const double y = a.imag();
  const double em1 = std::expm1(x);
  const double half_sin = std::sin(0.5 * y);
  const double cosm1 = -2.0 * half_sin * half_sin;
  return {em1 * std::cos(y) + cosm1, (em1 + 1.0) * std::sin(y)};
}

Complex phi0(Complex a)
{
  if (std::abs(a) < 1e-3)
  {
    // sum_{k=0}^{12} a^k / (k+1)!
    Complex acc = 1.0 / 6227020800.0;  // 1/13!
    double fact = 6227020800.0;
    for (int k = 11; k >= 0; --k)
    {
      fact /= (k + 2);
      acc = acc * a + 1.0 / fact;
    }
    return acc;
  }
  return expm1(a) / a;
}

double bessel_j(int m, double x)
{
  if (m < 0)
  {
    throw ArgumentError("bessel_j: negative order " + std::to_string(m));
  }
  if (x < 0.0)
  {
    throw DomainError("bessel_j: negative argument");
  }
  if (x == 0.0)
  {
    return m == 0 ? 1.0 : 0.0;
  }
  if (x >= kBesselAsymptoticCrossover && m <= 1)
  {
    return hankel_asymptotic(m, x).j;
  }
  if (x < kBesselAsymptoticCrossover || x * x <= 4.0 * (m + 1))
  {
    return static_cast<double>(series_j(m, x));
  }
  return miller_j(m, x);
}

double bessel_y(int m, double x)
{
  if (m != 0 && m != 1)
  {
    throw ArgumentError("bessel_y: only orders 0 and 1 are supported");
  }
  if (!(x > 0.0))
  {
    throw DomainError("bessel_y: argument must be positive");
  }
  if (x >= kBesselAsymptoticCrossover)
  {
    return hankel_asymptotic(m, x).y;
  }
  return static_cast<double>(m == 0 ? series_y0(x) : series_y1(x));
}

Complex hankel1(int m, double x)
{
  if (m != 0 && m != 1)
  {
    throw ArgumentError("hankel1: only orders 0 and 1 are supported");
  }
  if (!(x > 0.0))
  {
    throw DomainError("hankel1: argument must be positive");
  }
  if (x >= kBesselAsymptoticCrossover)
  {
    const auto a = hankel_asymptotic(m, x);
    return {a.j, a.y};
  }
  const Real xl = x;
  return {static_cast<double>(series_j(m, xl)),
          static_cast<double>(m == 0 ? series_y0(xl) : series_y1(xl))};
}

FieldValue fundamental_solution(const Vec2 &x, const Vec2 &s, double kappa)
{
  const Vec2 r = x - s;
  const double dist = norm(r);
  if (dist == 0.0)
  {
    throw DomainError("fundamental_solution: evaluation at the source point");
  }
  const double arg = kappa * dist;
  const Complex h0 = hankel1(0, arg);
  const Complex h1 = hankel1(1, arg);
  const Complex radial = -0.25i * kappa * h1 / dist;
  return {0.25i * h0, {radial * r.x, radial * r.y}};
}

}  // namespace trefftz
