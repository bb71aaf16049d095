#include <doctest.h>

#include "epx/polynomial.hpp"
#include "support.hpp"

using namespace epx;

namespace
{

std::vector<Complex> from_roots(const std::vector<Complex> &roots, Complex lead = 1.0)
{
  std::vector<Complex> c{lead};
  for (Complex r : roots)
  {
    std::vector<Complex> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k)
    {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return c;
}

}  // namespace

TEST_CASE("Horner evaluation")
{
  const std::vector<Complex> c{1.0, -2.0, Complex(0.0, 3.0)};
  const Complex z(0.5, -0.25);
  const auto [v, d] = poly::evaluate_with_derivative(c, z);
  CHECK(std::abs(v - (1.0 - 2.0 * z + Complex(0, 3) * z * z)) < 1e-15);
  CHECK(std::abs(d - (-2.0 + Complex(0, 6) * z)) < 1e-15);
  CHECK(std::abs(poly::evaluate(c, z) - v) == 0.0);
  CHECK(poly::magnitude(c, 2.0) == doctest::Approx(1.0 + 4.0 + 12.0));
}

TEST_CASE("Aberth recovers simple roots")
{
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  for (int n : {1, 2, 5, 12})
  {
    std::vector<Complex> roots;
    for (int k = 0; k < n; ++k)
      roots.emplace_back(d(rng), d(rng));
    const auto found = poly::aberth_roots(from_roots(roots, Complex(0.3, 1.1)));
    CHECK(found.converged);
    CHECK(test::match_distance(found.roots, roots) < 1e-10);
  }
}

TEST_CASE("Aberth handles zero and repeated roots")
{
  const auto zeros = poly::aberth_roots(from_roots({0.0, 0.0, 2.0}));
  CHECK(test::match_distance(zeros.roots, {0.0, 0.0, 2.0}) < 1e-12);

  const auto dbl = poly::aberth_roots(from_roots({1.0, 1.0, Complex(0.0, 2.0)}));
  // A double root is only resolved to about sqrt(eps).
  CHECK(test::match_distance(dbl.roots, {1.0, 1.0, Complex(0.0, 2.0)}) < 1e-6);
}

TEST_CASE("degree zero and invalid input")
{
  CHECK(poly::aberth_roots(std::vector<Complex>{3.0}).roots.empty());
  CHECK_THROWS_AS(poly::aberth_roots(std::vector<Complex>{1.0, 0.0}), std::invalid_argument);
}
