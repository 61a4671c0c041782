#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "trefftz/oracles/oracles.hpp"
#include "trefftz/regsolve.hpp"
#include "trefftz/specialfn.hpp"
#include "trefftz/svd.hpp"

using namespace trefftz;

namespace
{

Eigen::MatrixXcd random_matrix(int rows, int cols, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  Eigen::MatrixXcd A(rows, cols);
  for (int j = 0; j < cols; ++j)
  {
    for (int i = 0; i < rows; ++i)
    {
      A(i, j) = Complex(n(rng), n(rng));
    }
  }
  return A;
}

ReferenceField plane_wave(const EpwParams &w)
{
  return [w](const Vec2 &x) { return FieldValue{epw_eval(w, x), epw_grad(w, x)}; };
}

BlockMatrix empty_like(const BlockMatrix &D)
{
  BlockMatrix C;
  C.layout = D.layout;
  return C;
}

}  // namespace

TEST(ComplexSvd, Identity)
{
  const SvdResult svd = complex_svd(Eigen::MatrixXcd::Identity(3, 3));
  EXPECT_LE((svd.S - Eigen::Vector3d::Ones()).norm(), 1e-15);
  EXPECT_LE((svd.U * svd.V.adjoint() - Eigen::MatrixXcd::Identity(3, 3)).norm(), 1e-15);
  EXPECT_LE((svd.U.adjoint() * svd.U - Eigen::MatrixXcd::Identity(3, 3)).norm(), 1e-15);
}

TEST(ComplexSvd, PermutedDiagonal)
{
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(3, 3);
  A(2, 0) = 3.0;
  A(0, 1) = 2.0;
  A(1, 2) = 1.0;
  const SvdResult svd = complex_svd(A);
  EXPECT_NEAR(svd.S(0), 3.0, 1e-15);
  EXPECT_NEAR(svd.S(1), 2.0, 1e-15);
  EXPECT_NEAR(svd.S(2), 1.0, 1e-15);
}

TEST(ComplexSvd, RandomTallAgainstJacobi)
{
  const Eigen::MatrixXcd A = random_matrix(40, 32, 42);
  const SvdResult svd = complex_svd(A);
  const auto n = svd.S.size();
  EXPECT_LE((A - svd.U * svd.S.asDiagonal() * svd.V.adjoint()).norm(), 1e-12 * A.norm());
  EXPECT_LE((svd.U.adjoint() * svd.U - Eigen::MatrixXcd::Identity(n, n)).norm(), 1e-12);
  EXPECT_LE((svd.V.adjoint() * svd.V - Eigen::MatrixXcd::Identity(n, n)).norm(), 1e-12);
  for (Eigen::Index i = 1; i < n; ++i)
  {
    EXPECT_GE(svd.S(i - 1), svd.S(i));
  }
  EXPECT_LE((svd.S - oracles::jacobi_singular_values(A)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ComplexSvd, RankDeficientAndSingleColumn)
{
  Eigen::MatrixXcd A = random_matrix(12, 6, 3);
  A.col(4) = A.col(1) * Complex(0.5, -2.0);
  const SvdResult svd = complex_svd(A);
  EXPECT_LE(svd.S(5), 1e-14 * svd.S(0));
  EXPECT_LE((A - svd.U * svd.S.asDiagonal() * svd.V.adjoint()).norm(), 1e-13 * A.norm());

  const Eigen::MatrixXcd v = random_matrix(5, 1, 8);
  EXPECT_NEAR(complex_svd(v).S(0), v.norm(), 1e-14);
}

TEST(ComplexSvd, Deterministic)
{
  const Eigen::MatrixXcd A = random_matrix(30, 20, 5);
  const SvdResult a = complex_svd(A);
  const SvdResult b = complex_svd(A);
  EXPECT_EQ(a.S, b.S);
  EXPECT_EQ(a.U, b.U);
  EXPECT_EQ(a.V, b.V);
}

TEST(ComplexSvd, RejectsInvalidInput)
{
  EXPECT_THROW(complex_svd(Eigen::MatrixXcd::Zero(2, 3)), ArgumentError);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(3, 3);
  A(1, 2) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(complex_svd(A), ArgumentError);
}

TEST(TruncatedPinv, SquareWellConditionedIsInverse)
{
  const Eigen::MatrixXcd A = random_matrix(20, 20, 9);
  const PinvBlock p = truncated_pinv(complex_svd(A), 1e-14);
  EXPECT_EQ(p.rank, 20u);
  EXPECT_LE((A * p.inverse - Eigen::MatrixXcd::Identity(20, 20)).norm(), 1e-10);
}

TEST(TruncatedPinv, ThresholdArithmetic)
{
  Eigen::VectorXd S(2);
  S << 1.0, 1e-15;
  EXPECT_EQ(truncation_rank(S, 1e-14), 1u);
  S << 1.0, 1e-14;
  EXPECT_EQ(truncation_rank(S, 1e-14), 2u);

  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2, 2);
  A(0, 0) = 1.0;
  A(1, 1) = 1e-15;
  const PinvBlock p = truncated_pinv(complex_svd(A), 1e-14);
  EXPECT_EQ(p.rank, 1u);
  EXPECT_EQ(p.inverse(1, 1), Complex(0.0));
  EXPECT_THROW(truncated_pinv(complex_svd(A), 0.0), ArgumentError);
  EXPECT_THROW(truncated_pinv(complex_svd(A), 1.0), ArgumentError);
}

TEST(TruncatedPinv, ScaleEquivariant)
{
  Eigen::MatrixXcd A = random_matrix(15, 10, 4);
  A.col(9) = A.col(0) + 1e-9 * A.col(3);
  const double c = 37.5;
  const PinvBlock p = truncated_pinv(complex_svd(A), 1e-8);
  const PinvBlock q = truncated_pinv(complex_svd(c * A), 1e-8);
  EXPECT_EQ(p.rank, q.rank);
  EXPECT_LE((q.inverse - p.inverse / c).norm(), 1e-12 * p.inverse.norm() / c);
}

TEST(TruncatedPinv, IdentityOnRetainedSubspace)
{
  const Mesh mesh = build_rect_mesh({0.0, -0.5}, {1.0, 0.5}, 2, 2, 0.2, 1);
  const auto bases = build_square_bases(mesh, 40, 16.0, BasisMode::EPW);
  const BlockMatrix D = assemble_D(mesh, bases);
  for (const auto &block : D.blocks)
  {
    const SvdResult svd = complex_svd(block.data);
    // retained directions carry roundoff amplified by 1/epsilon
    const PinvBlock p = truncated_pinv(svd, 1e-6);
    const Eigen::MatrixXcd Vr = svd.V.leftCols(static_cast<Eigen::Index>(p.rank));
    const Eigen::MatrixXcd G = Vr.adjoint() * (p.inverse * block.data) * Vr;
    EXPECT_LE((G - Eigen::MatrixXcd::Identity(G.rows(), G.cols())).norm(), 1e-8);
  }
}

TEST(SolveUwvf, DecoupledElements)
{
  const Mesh mesh = build_rect_mesh({0.0, 0.0}, {1.0, 1.0}, 2, 1, 0.0);
  const auto bases = build_square_bases(mesh, 5, 4.0, BasisMode::PPW);
  const BlockMatrix D = assemble_D(mesh, bases);
  Eigen::VectorXcd b = random_matrix(static_cast<int>(D.rows()), 1, 2).col(0);
  const SolveReport report = solve_uwvf(D, empty_like(D), b, 1e-14);
  for (const auto &block : D.blocks)
  {
    const auto k = static_cast<Eigen::Index>(D.layout.trial_offset[block.row_elem]);
    const auto n = block.data.cols();
    const Eigen::VectorXcd expected = truncated_pinv(complex_svd(block.data), 1e-14).inverse * b.segment(k, n);
    EXPECT_LE((report.coefficients.segment(k, n) - expected).norm(), 1e-12 * expected.norm());
  }
}

TEST(SolveUwvf, SingleElementReproducesBasisWave)
{
  const Mesh mesh({{0.0, 0.0}, {1.0, 0.0}, {0.3, 0.8}}, {{0, 1, 2}});
  const double kappa = 5.0;
  const auto bases = build_square_bases(mesh, 6, kappa, BasisMode::PPW);
  const std::size_t j = 2;
  const EpwParams w = bases[0].trial[j].params;
  const auto g = manufacture_g(plane_wave(w), 1.0, kappa);
  const BlockMatrix D = assemble_D(mesh, bases);
  const BlockMatrix C = assemble_C(mesh, bases);
  const SolveReport report = solve_uwvf(D, C, assemble_rhs(mesh, bases, {}, g), 1e-14);
  Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(6);
  expected(static_cast<Eigen::Index>(j)) = 1.0;
  EXPECT_LE((report.coefficients - expected).norm(), 1e-8);

  const SolveReport traced = solve_uwvf_traces(mesh, bases, {}, g);
  EXPECT_LE((traced.coefficients - expected).norm(), 1e-8);
}

TEST(SolveUwvf, Linear)
{
  const Mesh mesh = build_rect_mesh({0.0, 0.0}, {1.0, 1.0}, 2, 2, 0.1, 1);
  const auto bases = build_square_bases(mesh, 8, 6.0, BasisMode::EPW);
  const BlockMatrix D = assemble_D(mesh, bases);
  const BlockMatrix C = assemble_C(mesh, bases);
  const auto g = manufacture_g(plane_wave(make_epw(0.2, 1.0, 0.0, 6.0)), 1.0, 6.0);
  const Eigen::VectorXcd b = assemble_rhs(mesh, bases, {}, g);
  const SolveReport one = solve_uwvf(D, C, b);
  const SolveReport ten = solve_uwvf(D, C, 10.0 * b);
  EXPECT_LE((ten.coefficients - 10.0 * one.coefficients).norm(), 1e-12 * ten.coefficients.norm());
}

TEST(SolveUwvf, MatchesUnregularisedSolveWhenWellConditioned)
{
  const Mesh mesh = build_rect_mesh({0.0, -0.5}, {1.0, 0.5}, 4, 5, 0.2, 1);
  const double kappa = 8.0;
  const auto bases = build_square_bases(mesh, 5, kappa, BasisMode::EPW);
  const BlockMatrix D = assemble_D(mesh, bases);
  const BlockMatrix C = assemble_C(mesh, bases);
  const Vec2 s{-std::numbers::pi / 40.0, 0.0};
  const auto g = manufacture_g([&](const Vec2 &x) { return fundamental_solution(x, s, kappa); }, 1.0, kappa);
  const Eigen::VectorXcd b = assemble_rhs(mesh, bases, {}, g);
  const SolveReport report = solve_uwvf(D, C, b);
  for (const auto &block : report.blocks)
  {
    ASSERT_EQ(block.rank, block.n_trial);
  }
  const Eigen::VectorXcd direct = (D.to_dense() - C.to_dense()).partialPivLu().solve(b);
  EXPECT_LE((report.coefficients - direct).norm(), 1e-8 * direct.norm());
}

TEST(SolveUwvf, ReportInvariants)
{
  const Mesh mesh = build_rect_mesh({0.0, -0.5}, {1.0, 0.5}, 4, 5, 0.2, 1);
  const double kappa = 16.0;
  BasisConfig config;
  config.trial_per_element = 24;
  config.kappa = kappa;
  const auto bases = build_bases(mesh, config);
  const Vec2 s{-std::numbers::pi / 80.0, 0.0};
  const auto g = manufacture_g([&](const Vec2 &x) { return fundamental_solution(x, s, kappa); }, 1.0, kappa);
  for (const SolverMethod method : {SolverMethod::Gram, SolverMethod::Trace})
  {
    const SolveReport r = solve_problem(mesh, bases, {}, g, 1e-14, method);
    EXPECT_EQ(r.blocks.size(), mesh.num_elements());
    EXPECT_NEAR(r.coeff_norm, r.coefficients.norm(), 1e-14 * r.coeff_norm);
    double sum = 0.0;
    for (const double n : r.element_coeff_norms)
    {
      sum += n * n;
    }
    EXPECT_NEAR(std::sqrt(sum), r.coeff_norm, 1e-12 * r.coeff_norm);
    EXPECT_LE(r.residual, 1e-8 * r.rhs_norm);
    EXPECT_FALSE(r.residual_warning);
    for (const auto &block : r.blocks)
    {
      EXPECT_GE(block.rank, 1u);
      EXPECT_LE(block.rank, block.n_trial);
      EXPECT_GE(block.sigma_max, block.sigma_min);
    }
    EXPECT_GT(r.min_rank_ratio(), 0.0);
    EXPECT_LE(r.min_rank_ratio(), 1.0);
  }
}

TEST(SolveUwvfTraces, AgreesWithGramPathForSquareBases)
{
  const Mesh mesh = build_rect_mesh({0.0, -0.5}, {1.0, 0.5}, 4, 5, 0.2, 1);
  const double kappa = 8.0;
  const auto bases = build_square_bases(mesh, 6, kappa, BasisMode::EPW);
  const Vec2 s{-std::numbers::pi / 40.0, 0.0};
  const auto g = manufacture_g([&](const Vec2 &x) { return fundamental_solution(x, s, kappa); }, 1.0, kappa);
  const SolveReport gram = solve_problem(mesh, bases, {}, g, 1e-14, SolverMethod::Gram);
  const SolveReport trace = solve_problem(mesh, bases, {}, g, 1e-14, SolverMethod::Trace);
  EXPECT_LE((gram.coefficients - trace.coefficients).norm(), 1e-8 * gram.coeff_norm);
  for (std::size_t k = 0; k < gram.blocks.size(); ++k)
  {
    EXPECT_EQ(gram.blocks[k].rank, trace.blocks[k].rank);
    EXPECT_NEAR(trace.blocks[k].sigma_max, gram.blocks[k].sigma_max, 1e-10 * gram.blocks[k].sigma_max);
  }
}

TEST(SolverMethod, Parsing)
{
  EXPECT_EQ(parse_solver_method("trace"), SolverMethod::Trace);
  EXPECT_EQ(parse_solver_method("gram"), SolverMethod::Gram);
  EXPECT_EQ(to_string(SolverMethod::Gram), "gram");
  EXPECT_THROW(parse_solver_method("lu"), ArgumentError);
}
