#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace trefftz
{

using Complex = std::complex<double>;

/// Point or real vector in the plane.
struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 &operator+=(const Vec2 &o)
  {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2 &operator-=(const Vec2 &o)
  {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, const Vec2 &b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2 &b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2 &a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, const Vec2 &a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(const Vec2 &a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(const Vec2 &, const Vec2 &) = default;
};

constexpr double dot(const Vec2 &a, const Vec2 &b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2 &a, const Vec2 &b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2 &a) { return std::hypot(a.x, a.y); }

/// Complex 2-vector, e.g. an evanescent direction or a field gradient.
using CVec2 = std::array<Complex, 2>;

/// Bilinear (unconjugated) product of a complex vector with a real one.
inline Complex dot(const CVec2 &a, const Vec2 &b) { return a[0] * b.x + a[1] * b.y; }

/// Field value together with its gradient at a point.
struct FieldValue
{
  Complex value;
  CVec2 gradient;
};

/// Helmholtz solution known analytically (value and gradient).
using ReferenceField = std::function<FieldValue(const Vec2 &)>;

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error
{
public:
  using Error::Error;
};

/// Evaluation outside a function's domain (e.g. Y_m at x <= 0).
class DomainError : public Error
{
public:
  using Error::Error;
};

}  // namespace trefftz
