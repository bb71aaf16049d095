#include <doctest.h>

#include "epx/analytic2.hpp"
#include "epx/errors.hpp"
#include "epx/locator.hpp"
#include "support.hpp"

using namespace epx;

namespace
{

std::vector<Complex> points(const std::vector<ExceptionalPoint> &eps)
{
  std::vector<Complex> out;
  for (const auto &e : eps)
    for (int k = 0; k < e.multiplicity; ++k)
      out.push_back(e.lambda_c);
  return out;
}

}  // namespace

TEST_CASE("reference EP pair")
{
  const auto eps = locate_eps(two_level_family(test::reference()));
  REQUIRE(eps.size() == 2);
  const Complex want = std::polar(1.0 / 3.0, 2.0 * test::kPi / 25.0);
  CHECK(test::match_distance(points(eps), {want, std::conj(want)}) < 1e-8 * std::abs(want));
  for (const auto &e : eps)
  {
    CHECK(e.refined);
    CHECK(e.multiplicity == 1);
    CHECK(e.level_pair == std::pair<int, int>{0, 1});
    CHECK_FALSE(e.ambiguous);
    CHECK(e.gap_at_offset > 0.0);
    CHECK(e.residual < 1e-10);
  }
  // Sorted by real then imaginary part.
  CHECK(eps[0].lambda_c.imag() < eps[1].lambda_c.imag());
}

TEST_CASE("zero mixing angle gives a double root")
{
  const TwoLevelParams p{1.0, 2.0, 2.0, -1.0, 0.0};
  const auto eps = locate_eps(two_level_family(p));
  CHECK(count_with_multiplicity(eps) == 2);
  const Complex want = -p.delta_eps() / p.delta_om();
  for (Complex z : points(eps))
    CHECK(std::abs(z - want) < 1e-6);
}

TEST_CASE("families without exceptional points")
{
  CMatrix h0 = CMatrix::Zero(2, 2);
  h0(0, 0) = 1.0;
  h0(1, 1) = 2.0;
  CMatrix h1 = CMatrix::Zero(2, 2);
  // Commuting pencil: the discriminant is a nonzero constant.
  CHECK(locate_eps(MatrixFamily(h0, CMatrix::Identity(2, 2))).empty());
  CHECK(locate_eps(MatrixFamily(h0, h1)).empty());
  CHECK_THROWS_AS(locate_eps(MatrixFamily(CMatrix::Identity(2, 2), h1)), DegenerateFamily);
}

TEST_CASE("interpolated discriminant matches direct evaluation")
{
  std::mt19937_64 rng(8);
  for (int n : {2, 3, 4})
  {
    const MatrixFamily f = test::random_symmetric(n, rng);
    const DiscriminantPoly dp = discriminant_poly(f);
    CHECK(dp.nominal_degree == n * (n - 1));
    CHECK(dp.generic());
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 50; ++k)
    {
      const Complex z = dp.radius * Complex(u(rng), u(rng)) * 0.7;
      CHECK(std::abs(dp(z) - discriminant_at(f, z)) <= 1e-8 * dp.scale);
    }
  }
}

TEST_CASE("random 3x3 symmetric family")
{
  std::mt19937_64 rng(1234);
  const MatrixFamily f = test::random_symmetric(3, rng);
  const auto eps = locate_eps(f);
  CHECK(count_with_multiplicity(eps) == 6);
  const auto pts = points(eps);
  std::vector<Complex> conj;
  for (Complex z : pts)
    conj.push_back(std::conj(z));
  CHECK(test::match_distance(pts, conj) < 1e-9);
  for (const auto &e : eps)
    CHECK(std::abs(discriminant_at(f, e.lambda_c)) < 1e-8);
}

TEST_CASE("two-level oracle sweep")
{
  std::mt19937_64 rng(99);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial)
  {
    const TwoLevelParams p = test::random_params(rng);
    const MatrixFamily f = two_level_family(p);
    const auto want = test::eps2(f);
    const auto eps = locate_eps(f);
    REQUIRE(count_with_multiplicity(eps) == 2);
    worst = std::max(worst, test::match_distance(points(eps), {want[0], want[1]}) /
                                std::abs(want[0]));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("serial and parallel locators agree")
{
  std::mt19937_64 rng(21);
  const MatrixFamily f = test::random_symmetric(3, rng);
  LocatorOptions serial;
  serial.exec = kernels::Exec::serial;
  const auto a = locate_eps(f, serial);
  const auto b = locate_eps(f);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k)
    CHECK(a[k].lambda_c == b[k].lambda_c);
}
