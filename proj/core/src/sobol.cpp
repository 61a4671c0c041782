#include "trefftz/sobol.hpp"

namespace trefftz
{

namespace
{

constexpr int kBits = 32;

using DirectionTable = std::array<std::array<std::uint32_t, kBits>, 3>;

// Dimension 1 is van der Corput; dimensions 2 and 3 use the primitive
// polynomials x + 1 (m = 1) and x^2 + x + 1 (m = 1, 3).
constexpr DirectionTable make_directions()
{
  DirectionTable v{};
  for (int k = 0; k < kBits; ++k)
  {
    v[0][k] = 1u << (kBits - 1 - k);
  }

  struct Poly
  {
    int degree;
    std::uint32_t a;  // interior coefficients, most significant first
    std::array<std::uint32_t, 2> m;
  };
  constexpr Poly polys[2] = {{1, 0u, {1u, 0u}}, {2, 1u, {1u, 3u}}};

  for (int d = 0; d < 2; ++d)
  {
    const Poly &p = polys[d];
    std::array<std::uint32_t, kBits> m{};
    for (int k = 0; k < p.degree; ++k)
    {
      m[k] = p.m[k];
    }
    for (int k = p.degree; k < kBits; ++k)
    {
      std::uint32_t mk = m[k - p.degree] ^ (m[k - p.degree] << p.degree);
      for (int j = 1; j < p.degree; ++j)
      {
        if ((p.a >> (p.degree - 1 - j)) & 1u)
        {
          mk ^= m[k - j] << j;
        }
      }
      m[k] = mk;
    }
    for (int k = 0; k < kBits; ++k)
    {
      v[d + 1][k] = m[k] << (kBits - 1 - k);
    }
  }
  return v;
}

constexpr DirectionTable kDirections = make_directions();

}  // namespace

std::array<double, 3> sobol3(std::uint32_t index)
{
  const std::uint32_t gray = index ^ (index >> 1);
  std::array<std::uint32_t, 3> x{};
  for (int k = 0; k < kBits; ++k)
  {
    if ((gray >> k) & 1u)
    {
      for (int d = 0; d < 3; ++d)
      {
        x[d] ^= kDirections[d][k];
      }
    }
  }
  constexpr double scale = 0x1.0p-32;
  return {x[0] * scale, x[1] * scale, x[2] * scale};
}

}  // namespace trefftz
