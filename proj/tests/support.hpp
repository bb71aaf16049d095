#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "epx/model.hpp"

namespace epx::test
{

inline constexpr double kPi = std::numbers::pi;

// Reference two-level parameters used across the suite.
inline TwoLevelParams reference()
{
  return {1.0, 2.0, 2.0, -1.0, kPi / 25.0};
}

// Quadratic-formula eigenvalues of a 2x2 matrix from its trace and determinant.
inline std::array<Complex, 2> eig2(const CMatrix &m)
{
  const Complex half_tr = 0.5 * (m(0, 0) + m(1, 1));
  const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const Complex root = std::sqrt(half_tr * half_tr - det);
  return {half_tr + root, half_tr - root};
}

// Roots in lambda of (a - d)^2 + 4 b c for the pencil a0 + lambda a1.
inline std::array<Complex, 2> eps2(const MatrixFamily &f)
{
  const CMatrix &x = f.h0();
  const CMatrix &y = f.h1();
  const Complex p0 = x(0, 0) - x(1, 1);
  const Complex p1 = y(0, 0) - y(1, 1);
  const Complex qa = p1 * p1 + 4.0 * y(0, 1) * y(1, 0);
  const Complex qb = 2.0 * p0 * p1 + 4.0 * (x(0, 1) * y(1, 0) + y(0, 1) * x(1, 0));
  const Complex qc = p0 * p0 + 4.0 * x(0, 1) * x(1, 0);
  const Complex s = std::sqrt(qb * qb - 4.0 * qa * qc);
  return {(-qb + s) / (2.0 * qa), (-qb - s) / (2.0 * qa)};
}

inline double rel_err(Complex got, Complex want)
{
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline TwoLevelParams random_params(std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> angle(0.05, kPi / 2.0 - 0.05);
  TwoLevelParams p;
  do
  {
    p = {u(rng), u(rng), u(rng), u(rng), angle(rng)};
  } while (std::abs(p.delta_eps()) < 0.1 || std::abs(p.delta_om()) < 0.1);
  return p;
}

inline MatrixFamily random_symmetric(int n, std::mt19937_64 &rng)
{
  std::normal_distribution<double> d;
  CMatrix a(n, n), b(n, n);
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j <= i; ++j)
    {
      a(i, j) = a(j, i) = d(rng);
      b(i, j) = b(j, i) = d(rng);
    }
  }
  return {a, b};
}

inline CMatrix random_complex(int n, std::mt19937_64 &rng)
{
  std::normal_distribution<double> d;
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = Complex(d(rng), d(rng));
  return a;
}

// Sorted by nearest match to `want`; returns max distance.
inline double match_distance(std::vector<Complex> got, std::vector<Complex> want)
{
  double worst = 0.0;
  for (Complex w : want)
  {
    auto it = std::min_element(got.begin(), got.end(), [&](Complex a, Complex b)
                               { return std::abs(a - w) < std::abs(b - w); });
    if (it == got.end())
      return INFINITY;
    worst = std::max(worst, std::abs(*it - w));
    got.erase(it);
  }
  return got.empty() ? worst : INFINITY;
}

}  // namespace epx::test
