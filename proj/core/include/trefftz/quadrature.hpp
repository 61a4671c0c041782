#pragma once

#include <array>
#include <vector>

#include "trefftz/types.hpp"

namespace trefftz
{

/// Gauss-Legendre rule on [0, 1]; weights sum to 1.
struct LineRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [0, 1]. Rules are cached.
const LineRule &gauss_legendre(int n);

/// Rule on the reference triangle (0,0), (1,0), (0,1) given in barycentric-like
/// (xi, eta) coordinates; weights sum to 1 (multiply by the element area).
struct TriangleRule
{
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Collapsed-coordinate (Duffy) product rule exact for polynomials of total
/// degree `degree`.
const TriangleRule &triangle_rule(int degree);

/// Quadrature points and weights (area-scaled) for triangle `corners` split
/// uniformly into 4^level congruent sub-triangles.
struct PointRule
{
  std::vector<Vec2> points;
  std::vector<double> weights;
};

PointRule subdivided_triangle_rule(const std::array<Vec2, 3> &corners, int level,
                                   const TriangleRule &rule);

}  // namespace trefftz
