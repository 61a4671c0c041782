#include "trefftz/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

namespace trefftz
{

namespace
{

LineRule make_gauss_legendre(int n)
{
  LineRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i)
  {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter)
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k)
      {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
      {
        break;
      }
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k)
    {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // nodes ascending on [0, 1]
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

TriangleRule make_triangle_rule(int degree)
{
  // Integrand degree in the collapsed direction grows by one (Jacobian).
  const int n = (degree + 2 + 1) / 2;
  const LineRule &g = gauss_legendre(n);
  TriangleRule rule;
  rule.degree = degree;
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      const double s = g.nodes[i];
      const double t = g.nodes[j];
      rule.points.push_back({s * (1.0 - t), t});
      rule.weights.push_back(2.0 * g.weights[i] * g.weights[j] * (1.0 - t));
    }
  }
  return rule;
}

}  // namespace

const LineRule &gauss_legendre(int n)
{
  if (n < 1)
  {
    throw ArgumentError("gauss_legendre: need at least one node");
  }
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<LineRule>> cache;
  std::lock_guard lock(mutex);
  auto &slot = cache[n];
  if (!slot)
  {
    slot = std::make_unique<LineRule>(make_gauss_legendre(n));
  }
  return *slot;
}

const TriangleRule &triangle_rule(int degree)
{
  if (degree < 0)
  {
    throw ArgumentError("triangle_rule: negative degree");
  }
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<TriangleRule>> cache;
  std::lock_guard lock(mutex);
  auto &slot = cache[degree];
  if (!slot)
  {
    slot = std::make_unique<TriangleRule>(make_triangle_rule(degree));
  }
  return *slot;
}

PointRule subdivided_triangle_rule(const std::array<Vec2, 3> &corners, int level,
                                   const TriangleRule &rule)
{
  const int n = 1 << level;
  const Vec2 e1 = (1.0 / n) * (corners[1] - corners[0]);
  const Vec2 e2 = (1.0 / n) * (corners[2] - corners[0]);
  const double sub_area = 0.5 * std::abs(cross(e1, e2));

  PointRule out;
  out.points.reserve(static_cast<std::size_t>(n) * n * rule.points.size());
  out.weights.reserve(out.points.capacity());
  auto emit = [&](const Vec2 &a, const Vec2 &b, const Vec2 &c) {
    for (std::size_t q = 0; q < rule.points.size(); ++q)
    {
      const double xi = rule.points[q][0];
      const double eta = rule.points[q][1];
      out.points.push_back(a + xi * (b - a) + eta * (c - a));
      out.weights.push_back(rule.weights[q] * sub_area);
    }
  };
  for (int j = 0; j < n; ++j)
  {
    for (int i = 0; i + j < n; ++i)
    {
      const Vec2 p00 = corners[0] + static_cast<double>(i) * e1 + static_cast<double>(j) * e2;
      const Vec2 p10 = p00 + e1;
      const Vec2 p01 = p00 + e2;
      emit(p00, p10, p01);
      if (i + j + 1 < n)
      {
        emit(p10, p10 + e2, p01);
      }
    }
  }
  return out;
}

}  // namespace trefftz
