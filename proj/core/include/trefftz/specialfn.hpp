#pragma once

#include "trefftz/types.hpp"

namespace trefftz
{

/// e^a - 1 without cancellation for small |a|.
Complex expm1(Complex a);

/// (e^a - 1) / a, i.e. the integral of e^{a t} over t in [0, 1]. Entire in a;
/// uses a Taylor polynomial for |a| < 1e-3.
Complex phi0(Complex a);

/// Bessel function of the first kind J_m(x), m >= 0, x >= 0.
double bessel_j(int m, double x);

/// Bessel function of the second kind Y_m(x) for m in {0, 1}, x > 0.
double bessel_y(int m, double x);

/// Hankel function of the first kind H_m^(1) = J_m + i Y_m, m in {0, 1}.
Complex hankel1(int m, double x);

/// Outgoing 2D point source (i/4) H_0^(1)(kappa |x - s|) and its gradient.
FieldValue fundamental_solution(const Vec2 &x, const Vec2 &s, double kappa);

/// Argument beyond which J_0, J_1, Y_0, Y_1 switch from the ascending series
/// to the Hankel asymptotic expansion.
inline constexpr double kBesselAsymptoticCrossover = 16.0;

}  // namespace trefftz
