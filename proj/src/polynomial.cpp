#include "epx/polynomial.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace epx::poly
{

Complex evaluate(std::span<const Complex> coeffs, Complex z)
{
  Complex acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
  {
    acc = acc * z + *it;
  }
  return acc;
}

std::pair<Complex, Complex> evaluate_with_derivative(std::span<const Complex> coeffs, Complex z)
{
  Complex p = 0.0;
  Complex dp = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
  {
    dp = dp * z + p;
    p = p * z + *it;
  }
  return {p, dp};
}

double magnitude(std::span<const Complex> coeffs, Complex z)
{
  const double r = std::abs(z);
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
  {
    acc = acc * r + std::abs(*it);
  }
  return acc;
}

RootSet aberth_roots(std::span<const Complex> coeffs, int max_iterations)
{
  if (coeffs.empty() || coeffs.back() == 0.0)
  {
    throw std::invalid_argument("aberth_roots: leading coefficient must be nonzero");
  }
  RootSet out;

  // Exact zero roots first.
  std::size_t lead_zeros = 0;
  while (lead_zeros < coeffs.size() - 1 && coeffs[lead_zeros] == 0.0)
  {
    ++lead_zeros;
  }
  out.roots.assign(lead_zeros, Complex(0.0, 0.0));
  const std::span<const Complex> c = coeffs.subspan(lead_zeros);
  const int n = static_cast<int>(c.size()) - 1;
  if (n == 0)
  {
    out.converged = true;
    return out;
  }

  // Starting points on the circle whose radius is the geometric mean of root moduli.
  const double radius = std::pow(std::abs(c.front() / c.back()), 1.0 / n);
  std::vector<Complex> z(n);
  for (int k = 0; k < n; ++k)
  {
    z[k] = std::polar(radius, 2.0 * std::numbers::pi * k / n + 0.4);
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<bool> done(n, false);
  int remaining = n;
  int it = 0;
  for (; it < max_iterations && remaining > 0; ++it)
  {
    for (int k = 0; k < n; ++k)
    {
      if (done[k])
      {
        continue;
      }
      const auto [p, dp] = evaluate_with_derivative(c, z[k]);
      if (std::abs(p) <= 4.0 * eps * magnitude(c, z[k]))
      {
        done[k] = true;
        --remaining;
        continue;
      }
      Complex sum = 0.0;
      for (int j = 0; j < n; ++j)
      {
        if (j != k)
        {
          const Complex d = z[k] - z[j];
          if (d != 0.0)
          {
            sum += 1.0 / d;
          }
        }
      }
      if (dp == 0.0)
      {
        z[k] += std::polar(radius * 1e-3 + eps, 0.7 * (k + 1));
        continue;
      }
      const Complex w = p / dp;
      z[k] -= w / (1.0 - w * sum);
    }
  }
  out.iterations = it;
  out.converged = remaining == 0;
  out.roots.insert(out.roots.end(), z.begin(), z.end());
  return out;
}

}  // namespace epx::poly
