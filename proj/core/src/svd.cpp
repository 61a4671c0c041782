#include "trefftz/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace trefftz
{

namespace
{

using Index = Eigen::Index;

// Elementary reflector H = I - tau v v^* with v(0) = 1 and H^* x = beta e_1,
// beta real (LAPACK zlarfg convention).
struct Reflector
{
  Eigen::VectorXcd v;
  Complex tau = 0.0;
  double beta = 0.0;
};

Reflector make_reflector(const Eigen::VectorXcd &x)
{
  Reflector h;
  h.v = Eigen::VectorXcd::Zero(x.size());
  h.v(0) = 1.0;
  const Complex alpha = x(0);
  const double tail = x.size() > 1 ? x.tail(x.size() - 1).norm() : 0.0;
  if (tail == 0.0 && alpha.imag() == 0.0)
  {
    h.beta = alpha.real();
    return h;
  }
  const double beta = -std::copysign(std::hypot(std::abs(alpha), tail), alpha.real());
  h.tau = (beta - alpha) / beta;
  if (x.size() > 1)
  {
    h.v.tail(x.size() - 1) = x.tail(x.size() - 1) / (alpha - beta);
  }
  h.beta = beta;
  return h;
}

template <typename Block>
void apply_left_adjoint(const Reflector &h, Block &&M)
{
  // M <- H^* M = M - conj(tau) v (v^* M)
  if (h.tau == 0.0 || M.cols() == 0)
  {
    return;
  }
  const Eigen::RowVectorXcd w = h.v.adjoint() * M;
  M.noalias() -= (std::conj(h.tau) * h.v) * w;
}

template <typename Block>
void apply_left(const Reflector &h, Block &&M)
{
  // M <- H M = M - tau v (v^* M)
  if (h.tau == 0.0 || M.cols() == 0)
  {
    return;
  }
  const Eigen::RowVectorXcd w = h.v.adjoint() * M;
  M.noalias() -= (h.tau * h.v) * w;
}

template <typename Block>
void apply_right(const Reflector &h, Block &&M)
{
  // M <- M H = M - tau (M v) v^*
  if (h.tau == 0.0 || M.rows() == 0)
  {
    return;
  }
  const Eigen::VectorXcd w = M * h.v;
  M.noalias() -= (h.tau * w) * h.v.adjoint();
}

void rotate_columns(Eigen::MatrixXcd &M, Index i, Index j, double c, double s)
{
  // col_i <- c col_i + s col_j,  col_j <- -s col_i + c col_j
  for (Index r = 0; r < M.rows(); ++r)
  {
    const Complex a = M(r, i);
    const Complex b = M(r, j);
    M(r, i) = c * a + s * b;
    M(r, j) = -s * a + c * b;
  }
}

struct Givens
{
  double c = 1.0;
  double s = 0.0;
  double r = 0.0;
};

Givens givens(double y, double z)
{
  const double r = std::hypot(y, z);
  if (r == 0.0)
  {
    return {1.0, 0.0, 0.0};
  }
  return {y / r, z / r, r};
}

// Implicit-shift QR on the real upper bidiagonal (d, e); rotations are
// accumulated into the columns of U (left) and V (right).
void bidiagonal_qr(std::vector<double> &d, std::vector<double> &e, Eigen::MatrixXcd &U,
                   Eigen::MatrixXcd &V)
{
  const int n = static_cast<int>(d.size());
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double bnorm = 0.0;
  for (int i = 0; i < n; ++i)
  {
    bnorm = std::max(bnorm, std::abs(d[i]) + (i + 1 < n ? std::abs(e[i]) : 0.0));
  }
  if (bnorm == 0.0)
  {
    return;
  }

  const long max_iter = 10L * n * n + 100;
  long iter = 0;
  int hi = n - 1;
  while (hi > 0)
  {
    if (++iter > max_iter)
    {
      throw Error("complex_svd: bidiagonal QR failed to converge");
    }
    for (int i = 0; i < hi; ++i)
    {
      if (std::abs(e[i]) <= eps * (std::abs(d[i]) + std::abs(d[i + 1])))
      {
        e[i] = 0.0;
      }
    }
    for (int i = 0; i <= hi; ++i)
    {
      if (std::abs(d[i]) <= eps * bnorm)
      {
        d[i] = 0.0;
      }
    }
    if (e[hi - 1] == 0.0)
    {
      --hi;
      continue;
    }
    int lo = hi - 1;
    while (lo > 0 && e[lo - 1] != 0.0)
    {
      --lo;
    }

    // A zero on the diagonal lets the block split after chasing its row.
    bool chased = false;
    for (int i = lo; i < hi; ++i)
    {
      if (d[i] != 0.0)
      {
        continue;
      }
      double f = e[i];
      e[i] = 0.0;
      for (int j = i + 1; j <= hi; ++j)
      {
        const Givens g = givens(d[j], f);
        d[j] = g.r;
        if (j < hi)
        {
          f = -g.s * e[j];
          e[j] = g.c * e[j];
        }
        rotate_columns(U, j, i, g.c, g.s);
      }
      chased = true;
      break;
    }
    if (chased)
    {
      continue;
    }
    if (d[hi] == 0.0)
    {
      double f = e[hi - 1];
      e[hi - 1] = 0.0;
      for (int j = hi - 1; j >= lo; --j)
      {
        const Givens g = givens(d[j], f);
        d[j] = g.r;
        if (j > lo)
        {
          f = -g.s * e[j - 1];
          e[j - 1] = g.c * e[j - 1];
        }
        rotate_columns(V, j, hi, g.c, g.s);
      }
      continue;
    }

    // Wilkinson shift from the trailing 2x2 block of B^T B.
    const double dm = d[hi - 1];
    const double dn = d[hi];
    const double em = e[hi - 1];
    const double el = hi - 1 > lo ? e[hi - 2] : 0.0;
    const double t11 = dm * dm + el * el;
    const double t12 = dm * em;
    const double t22 = dn * dn + em * em;
    double mu = t22;
    if (t12 != 0.0)
    {
      const double delta = 0.5 * (t11 - t22);
      const double denom = delta + std::copysign(std::hypot(delta, t12), delta);
      mu = t22 - t12 * t12 / denom;
    }

    double y = d[lo] * d[lo] - mu;
    double z = d[lo] * e[lo];
    for (int k = lo; k < hi; ++k)
    {
      Givens g = givens(y, z);
      if (k > lo)
      {
        e[k - 1] = g.r;
      }
      const double dk = d[k];
      const double ek = e[k];
      const double dk1 = d[k + 1];
      d[k] = g.c * dk + g.s * ek;
      e[k] = -g.s * dk + g.c * ek;
      const double bulge = g.s * dk1;
      d[k + 1] = g.c * dk1;
      rotate_columns(V, k, k + 1, g.c, g.s);

      g = givens(d[k], bulge);
      d[k] = g.r;
      const double ek2 = e[k];
      const double dk2 = d[k + 1];
      e[k] = g.c * ek2 + g.s * dk2;
      d[k + 1] = -g.s * ek2 + g.c * dk2;
      rotate_columns(U, k, k + 1, g.c, g.s);
      if (k < hi - 1)
      {
        y = e[k];
        z = g.s * e[k + 1];
        e[k + 1] = g.c * e[k + 1];
      }
    }
  }
}

}  // namespace

SvdResult complex_svd(const Eigen::MatrixXcd &A)
{
  const Index m = A.rows();
  const Index n = A.cols();
  if (n < 1 || m < n)
  {
    throw ArgumentError("complex_svd: need rows >= cols >= 1");
  }
  if (!A.allFinite())
  {
    throw ArgumentError("complex_svd: non-finite matrix entries");
  }

  Eigen::MatrixXcd B = A;
  std::vector<Reflector> left(static_cast<std::size_t>(n));
  std::vector<Reflector> right(static_cast<std::size_t>(std::max<Index>(n - 1, 0)));
  std::vector<double> d(static_cast<std::size_t>(n), 0.0);
  std::vector<double> e(static_cast<std::size_t>(std::max<Index>(n - 1, 0)), 0.0);

  for (Index k = 0; k < n; ++k)
  {
    auto &hl = left[static_cast<std::size_t>(k)];
    hl = make_reflector(B.col(k).tail(m - k));
    apply_left_adjoint(hl, B.bottomRightCorner(m - k, n - k - 1));
    d[static_cast<std::size_t>(k)] = hl.beta;
    if (k + 1 < n)
    {
      auto &hr = right[static_cast<std::size_t>(k)];
      hr = make_reflector(B.row(k).tail(n - k - 1).adjoint());
      apply_right(hr, B.bottomRightCorner(m - k - 1, n - k - 1));
      e[static_cast<std::size_t>(k)] = hr.beta;
    }
  }

  Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(m, n);
  for (Index k = n - 1; k >= 0; --k)
  {
    apply_left(left[static_cast<std::size_t>(k)], U.bottomRows(m - k));
  }
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Identity(n, n);
  for (Index k = n - 2; k >= 0; --k)
  {
    apply_left(right[static_cast<std::size_t>(k)], V.bottomRows(n - k - 1));
  }

  bidiagonal_qr(d, e, U, V);

  for (Index i = 0; i < n; ++i)
  {
    if (d[static_cast<std::size_t>(i)] < 0.0)
    {
      d[static_cast<std::size_t>(i)] = -d[static_cast<std::size_t>(i)];
      V.col(i) = -V.col(i);
    }
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return d[static_cast<std::size_t>(a)] > d[static_cast<std::size_t>(b)];
  });

  SvdResult out;
  out.U.resize(m, n);
  out.V.resize(n, n);
  out.S.resize(n);
  for (Index i = 0; i < n; ++i)
  {
    const Index src = order[static_cast<std::size_t>(i)];
    out.S(i) = d[static_cast<std::size_t>(src)];
    out.U.col(i) = U.col(src);
    out.V.col(i) = V.col(src);
  }
  return out;
}

}  // namespace trefftz
