#include "trefftz/cli/checks.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "trefftz/analysis.hpp"
#include "trefftz/assembly.hpp"
#include "trefftz/oracles/oracles.hpp"
#include "trefftz/regsolve.hpp"
#include "trefftz/sobol.hpp"
#include "trefftz/specialfn.hpp"
#include "trefftz/svd.hpp"

namespace trefftz::cli
{

namespace
{

using Clock = std::chrono::steady_clock;

CheckResult finish(CheckResult r, Clock::time_point t0)
{
  r.passed = r.worst <= r.tolerance;
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

std::string sci(double v)
{
  std::ostringstream os;
  os.precision(2);
  os << std::scientific << v;
  return os.str();
}

Mesh reference_mesh() { return build_rect_mesh({0.0, -0.5}, {1.0, 0.5}, 4, 5, 0.2, 1); }

Eigen::MatrixXcd random_complex(std::mt19937_64 &rng, int rows, int cols)
{
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd A(rows, cols);
  for (int j = 0; j < cols; ++j)
  {
    for (int i = 0; i < rows; ++i)
    {
      A(i, j) = Complex(normal(rng), normal(rng));
    }
  }
  return A;
}

}  // namespace

CheckResult check_edge_integrals(int cases, std::uint64_t seed, double tolerance)
{
  const auto t0 = Clock::now();
  CheckResult r{"edge integrals vs quadrature", false, 0.0, tolerance, {}, 0.0};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit;
  const double kappas[] = {1.0, 16.0, 64.0};
  const double etas[] = {0.0, 1.0, 8.0};
  int worst_case = -1;
  for (int c = 0; c < cases; ++c)
  {
    const double kappa = kappas[rng() % 3];
    const double eq = etas[rng() % 3];
    const double er = etas[rng() % 3];
    // the integrand oscillates at most like exp(i kappa (|d_q| + |d_r|) s); keep
    // the total phase within reach of the 256-point rule
    const double speed = kappa * (std::hypot(1.0, eq) + eq + std::hypot(1.0, er) + er);
    const double h = std::min(0.5, 200.0 / speed) * (0.25 + 0.75 * unit(rng));
    const Vec2 base{unit(rng), unit(rng) - 0.5};
    const double a = 2.0 * std::numbers::pi * unit(rng);
    const double b = std::numbers::pi * (0.25 + 0.4 * unit(rng));
    const std::array<Vec2, 3> tri{base, base + h * Vec2{std::cos(a), std::sin(a)},
                                  base + h * (0.5 + 0.5 * unit(rng)) * Vec2{std::cos(a + b), std::sin(a + b)}};
    const auto wave = [&](double eta) {
      const double theta = 2.0 * std::numbers::pi * unit(rng);
      const double phi = (rng() & 1u) ? 1.0 : -1.0;
      return normalize_on(make_epw(theta, phi, eta, kappa), tri);
    };
    const NormalizedWave wq = wave(eq);
    const NormalizedWave wr = wave(er);
    const int j = static_cast<int>(rng() % 3);
    const Vec2 v0 = tri[static_cast<std::size_t>(j)];
    const Vec2 v1 = tri[static_cast<std::size_t>((j + 1) % 3)];
    const double phase = speed * norm(v1 - v0);
    const int n = phase < 20.0 ? 64 : (phase < 60.0 ? 128 : 256);

    const Complex exact = edge_integral(v0, v1, wq, wr);
    const Complex quad = oracles::edge_integral_quadrature(v0, v1, wq, wr, n);
    const double scale = oracles::edge_integral_scale(v0, v1, wq, wr, n);
    double err = std::abs(exact - quad) / scale;
    if (std::isnan(err))
    {
      err = std::numeric_limits<double>::infinity();
    }
    if (err > r.worst)
    {
      r.worst = err;
      worst_case = c;
    }
  }
  r.detail = std::to_string(cases) + " cases, worst relative " + sci(r.worst) + " (case " +
             std::to_string(worst_case) + ")";
  return finish(r, t0);
}

CheckResult check_matrix_structure(int P, double tolerance)
{
  const auto t0 = Clock::now();
  CheckResult r{"D Hermitian, blocks nonsingular", false, 0.0, tolerance, {}, 0.0};
  const Mesh mesh = reference_mesh();
  double min_sigma = std::numeric_limits<double>::infinity();
  for (const BasisMode mode : {BasisMode::PPW, BasisMode::EPW})
  {
    const auto bases = build_square_bases(mesh, P, 16.0, mode);
    const BlockMatrix D = assemble_D(mesh, bases);
    const Eigen::MatrixXcd dense = D.to_dense();
    r.worst = std::max(r.worst, (dense - dense.adjoint()).norm() / dense.norm());
    for (const auto &block : D.blocks)
    {
      min_sigma = std::min(min_sigma, complex_svd(block.data).S.minCoeff());
    }
  }
  if (!(min_sigma > 0.0))
  {
    r.worst = std::numeric_limits<double>::infinity();
  }
  r.detail = std::to_string(mesh.num_elements()) + " elements, P=" + std::to_string(P) +
             ", ||D-D*||/||D||=" + sci(r.worst) + ", min block sigma=" + sci(min_sigma);
  return finish(r, t0);
}

CheckResult check_manufactured(int P, double tolerance)
{
  const auto t0 = Clock::now();
  CheckResult r{"manufactured plane wave", false, 0.0, tolerance, {}, 0.0};
  const Mesh mesh = reference_mesh();
  const double kappa = 16.0;
  const EpwParams exact = make_epw(0.7, 1.0, 0.0, kappa);
  const ReferenceField reference = [exact](const Vec2 &x) {
    const Complex u = epw_eval(exact, x);
    return FieldValue{u, epw_grad(exact, x)};
  };
  for (const BasisMode mode : {BasisMode::PPW, BasisMode::EPW})
  {
    BasisConfig bc;
    bc.trial_per_element = P;
    bc.kappa = kappa;
    bc.mode = mode;
    auto bases = build_bases(mesh, bc);
    for (std::size_t k = 0; k < bases.size(); ++k)
    {
      bases[k].trial.front() = normalize_on(exact, mesh.corners(k));
    }
    const auto g = manufacture_g(reference, 1.0, kappa);
    const SolveReport report = solve_problem(mesh, bases, {}, g, kDefaultEpsilon);
    const DiscreteField field(mesh, bases, report.coefficients);
    const double err = h1_error(field, reference, kappa).relative;
    r.worst = std::max(r.worst, std::isnan(err) ? std::numeric_limits<double>::infinity() : err);
    r.detail += std::string(r.detail.empty() ? "" : ", ") + std::string(to_string(mode)) + " " + sci(err);
  }
  r.detail = "P=" + std::to_string(P) + ": " + r.detail;
  return finish(r, t0);
}

CheckResult check_svd(int cases, int max_rows, int max_cols, std::uint64_t seed,
                      double reconstruction_tol, double sigma_tol)
{
  const auto t0 = Clock::now();
  CheckResult r{"SVD vs Jacobi", false, 0.0, 1.0, {}, 0.0};
  std::mt19937_64 rng(seed);
  double worst_recon = 0.0;
  double worst_sigma = 0.0;
  for (int c = 0; c < cases; ++c)
  {
    const int cols = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_cols));
    const int rows = cols + static_cast<int>(rng() % static_cast<std::uint64_t>(max_rows - cols + 1));
    Eigen::MatrixXcd A = random_complex(rng, rows, cols);
    if (c % 2 == 1)
    {
      // graded spectrum down to 1e-12
      const SvdResult base = complex_svd(A);
      Eigen::VectorXd S(cols);
      for (int i = 0; i < cols; ++i)
      {
        S(i) = std::pow(10.0, -12.0 * i / std::max(1, cols - 1));
      }
      A = base.U * S.asDiagonal() * base.V.adjoint();
    }
    const SvdResult svd = complex_svd(A);
    const double recon = (A - svd.U * svd.S.asDiagonal() * svd.V.adjoint()).norm() / A.norm();
    const Eigen::VectorXd ref = oracles::jacobi_singular_values(A);
    const double sigma_err = (svd.S - ref).cwiseAbs().maxCoeff();
    worst_recon = std::max(worst_recon, std::isnan(recon) ? 1e300 : recon);
    worst_sigma = std::max(worst_sigma, std::isnan(sigma_err) ? 1e300 : sigma_err);
  }
  r.worst = std::max(worst_recon / reconstruction_tol, worst_sigma / sigma_tol);
  r.detail = std::to_string(cases) + " matrices up to " + std::to_string(max_rows) + "x" +
             std::to_string(max_cols) + ", reconstruction " + sci(worst_recon) + " (tol " +
             sci(reconstruction_tol) + "), sigma " + sci(worst_sigma) + " (tol " + sci(sigma_tol) + ")";
  return finish(r, t0);
}

CheckResult check_bessel(int points, double tolerance)
{
  const auto t0 = Clock::now();
  CheckResult r{"Bessel identities", false, 0.0, tolerance, {}, 0.0};
  double recurrence = 0.0;
  double wronskian = 0.0;
  double series = 0.0;
  for (int i = 0; i < points; ++i)
  {
    const double x = 0.1 + (50.0 - 0.1) * i / std::max(1, points - 1);
    for (int m = 1; m <= 20; ++m)
    {
      const double lhs = bessel_j(m - 1, x) + bessel_j(m + 1, x);
      const double rhs = 2.0 * m / x * bessel_j(m, x);
      recurrence = std::max(recurrence, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    const double w = bessel_j(1, x) * bessel_y(0, x) - bessel_j(0, x) * bessel_y(1, x);
    wronskian = std::max(wronskian, std::abs(w - 2.0 / (std::numbers::pi * x)) * x);
    for (int m = 0; m <= 20; ++m)
    {
      series = std::max(series, std::abs(bessel_j(m, x) - oracles::bessel_j_series(m, x)));
    }
    for (int m = 0; m <= 1; ++m)
    {
      series = std::max(series, std::abs(bessel_y(m, x) - oracles::bessel_y_series(m, x)) /
                                    std::max(1.0, std::abs(oracles::bessel_y_series(m, x))));
    }
  }
  r.worst = std::max({recurrence, wronskian, series});
  r.detail = std::to_string(points) + " points in [0.1, 50]: recurrence " + sci(recurrence) +
             ", Wronskian " + sci(wronskian) + ", series " + sci(series);
  return finish(r, t0);
}

CheckResult check_hankel_gradient(int points, double tolerance)
{
  const auto t0 = Clock::now();
  CheckResult r{"point source gradient vs differences", false, 0.0, tolerance, {}, 0.0};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit;
  for (const double kappa : {1.0, 16.0, 64.0})
  {
    const Vec2 s{-std::numbers::pi / (5.0 * kappa), 0.0};
    const double h = 1e-4 / kappa;
    for (int i = 0; i < points; ++i)
    {
      const Vec2 x{unit(rng), unit(rng) - 0.5};
      const FieldValue f = fundamental_solution(x, s, kappa);
      const Complex dx = (fundamental_solution(x + Vec2{h, 0.0}, s, kappa).value -
                          fundamental_solution(x - Vec2{h, 0.0}, s, kappa).value) / (2.0 * h);
      const Complex dy = (fundamental_solution(x + Vec2{0.0, h}, s, kappa).value -
                          fundamental_solution(x - Vec2{0.0, h}, s, kappa).value) / (2.0 * h);
      const double scale = std::hypot(std::abs(f.gradient[0]), std::abs(f.gradient[1]));
      const double err = std::hypot(std::abs(dx - f.gradient[0]), std::abs(dy - f.gradient[1])) / scale;
      r.worst = std::max(r.worst, std::isnan(err) ? 1e300 : err);
    }
  }
  r.detail = std::to_string(3 * points) + " points, kappa in {1, 16, 64}, worst relative " + sci(r.worst);
  return finish(r, t0);
}

CheckResult check_phi0(double tolerance)
{
  const auto t0 = Clock::now();
  CheckResult r{"phi0 vs series", false, 0.0, tolerance, {}, 0.0};
  const Complex I(0.0, 1.0);
  const Complex args[] = {1e-8,        -1e-5,     9.99e-4,   1.001e-3 * I, 1e-3 * (1.0 + I),
                          0.3 - 0.2 * I, I * std::numbers::pi, 30.0 * I,  -50.0,   5.0 + 5.0 * I,
                          -20.0 + 40.0 * I};
  for (const Complex a : args)
  {
    const Complex ref = oracles::phi0_series(a);
    r.worst = std::max(r.worst, std::abs(phi0(a) - ref) / std::abs(ref));
  }
  r.detail = std::to_string(std::size(args)) + " arguments, worst relative " + sci(r.worst);
  return finish(r, t0);
}

CheckResult check_sobol()
{
  const auto t0 = Clock::now();
  CheckResult r{"Sobol points", false, 0.0, 0.0, {}, 0.0};
  struct Row
  {
    std::uint32_t index;
    std::array<double, 3> point;
  };
  const Row table[] = {
      {0, {0.0, 0.0, 0.0}},
      {1, {0.5, 0.5, 0.5}},
      {2, {0.75, 0.25, 0.25}},
      {3, {0.25, 0.75, 0.75}},
      {8, {0.1875, 0.3125, 0.9375}},
      {123456789u, {0.9758977368474007, 0.792431928217411, 0.006405912339687347}},
  };
  for (const auto &row : table)
  {
    const auto p = sobol3(row.index);
    for (int d = 0; d < 3; ++d)
    {
      r.worst = std::max(r.worst, std::abs(p[static_cast<std::size_t>(d)] - row.point[static_cast<std::size_t>(d)]));
    }
  }
  r.detail = std::to_string(std::size(table)) + " tabulated points";
  return finish(r, t0);
}

}  // namespace trefftz::cli
