#include <doctest.h>

#include <cmath>

#include "epx/analytic2.hpp"
#include "epx/errors.hpp"
#include "epx/model.hpp"
#include "support.hpp"

using namespace epx;
using namespace epx::analytic2;
using epx::test::kPi;

TEST_CASE("closed-form EPs for the reference parameters")
{
  const EpPair ep = exceptional_points_closed(test::reference());
  const Complex want = std::polar(1.0 / 3.0, 2.0 * kPi / 25.0);
  CHECK(test::rel_err(ep.plus, want) < 1e-14);
  CHECK(test::rel_err(ep.minus, std::conj(want)) < 1e-14);
  CHECK(std::abs(radicand(test::reference(), ep.plus)) < 1e-15);
}

TEST_CASE("eigenvalues and EPs against the 2x2 oracle")
{
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst_e = 0.0;
  double worst_ep = 0.0;
  for (int trial = 0; trial < 10000; ++trial)
  {
    const TwoLevelParams p = test::random_params(rng);
    const MatrixFamily f = two_level_family(p);
    const Complex lambda(u(rng), u(rng));
    const auto [e1, e2] = eigenvalues_closed(p, lambda);
    const auto ref = test::eig2(evaluate(f, lambda));
    const double scale = std::max({1.0, std::abs(ref[0]), std::abs(ref[1])});
    const double d = std::min(std::max(std::abs(e1 - ref[0]), std::abs(e2 - ref[1])),
                              std::max(std::abs(e1 - ref[1]), std::abs(e2 - ref[0])));
    worst_e = std::max(worst_e, d / scale);

    const EpPair ep = exceptional_points_closed(p);
    const auto want = test::eps2(f);
    worst_ep = std::max(worst_ep, test::match_distance({ep.plus, ep.minus}, {want[0], want[1]}) /
                                      std::abs(want[0]));
  }
  CHECK(worst_e < 1e-12);
  CHECK(worst_ep < 1e-12);
}

TEST_CASE("trace identity and conjugate symmetry")
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 500; ++trial)
  {
    const TwoLevelParams p = test::random_params(rng);
    const Complex lambda(u(rng), u(rng));
    const auto [e1, e2] = eigenvalues_closed(p, lambda);
    const Complex tr = p.eps1 + p.eps2 + lambda * (p.om1 + p.om2);
    CHECK(std::abs(e1 + e2 - tr) < 1e-13 * std::max(1.0, std::abs(tr)));

    const auto [c1, c2] = eigenvalues_closed(p, std::conj(lambda));
    CHECK(test::match_distance({c1, c2}, {std::conj(e1), std::conj(e2)}) <
          1e-12 * std::max(1.0, std::abs(e1)));

    const EpPair ep = exceptional_points_closed(p);
    CHECK(std::abs(ep.minus - std::conj(ep.plus)) < 1e-15 * std::abs(ep.plus));
  }
}

TEST_CASE("minimum real-axis gap")
{
  const RealAxisGap g = min_real_gap(test::reference());
  CHECK(g.gap == doctest::Approx(std::sin(2.0 * kPi / 25.0)).epsilon(1e-14));
  // Brute-force scan of the closed-form gap.
  double best = INFINITY;
  double at = 0.0;
  for (int k = 0; k <= 200000; ++k)
  {
    const double x = -1.0 + 2.0 * k / 200000.0;
    const auto [e1, e2] = eigenvalues_closed(test::reference(), x);
    if (std::abs(e1 - e2) < best)
    {
      best = std::abs(e1 - e2);
      at = x;
    }
  }
  CHECK(best == doctest::Approx(g.gap).epsilon(1e-8));
  CHECK(at == doctest::Approx(g.lambda).epsilon(1e-4));
}

TEST_CASE("theta at the origin and on both sheets")
{
  const TwoLevelParams p = test::reference();
  const ThetaValue up = theta(p, 0.0, Sheet::upper);
  CHECK(std::abs(up.tan_theta) < 1e-15);
  CHECK_FALSE(up.divergent);
  const ThetaValue lo = theta(p, 0.0, Sheet::lower);
  CHECK(std::isinf(std::abs(lo.tan_theta)));
  CHECK(lo.theta.real() == doctest::Approx(kPi / 2.0));

  const ThetaValue at_ep = theta(p, exceptional_points_closed(p).plus, Sheet::upper);
  CHECK(at_ep.divergent);
}

TEST_CASE("tan^2 theta consistency on both sheets")
{
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const TwoLevelParams p = test::reference();
  for (Sheet sh : {Sheet::upper, Sheet::lower})
  {
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial)
    {
      const Complex lambda(u(rng), u(rng));
      const ThetaValue t = theta(p, lambda, sh);
      if (t.divergent || !is_finite(t.tan_theta))
        continue;
      const Complex t2 = tan2_theta(p, lambda, sh);
      CHECK(std::abs(t.tan_theta * t.tan_theta - t2) < 1e-9 * std::max(1.0, std::abs(t2)));
      CHECK(std::abs(std::tan(t.theta) - t.tan_theta) <
            1e-9 * std::max(1.0, std::abs(t.tan_theta)));
      ++checked;
    }
    CHECK(checked > 900);
  }
}

TEST_CASE("theta vectors are eigenvectors")
{
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const TwoLevelParams p = test::reference();
  const MatrixFamily f = two_level_family(p);
  for (int trial = 0; trial < 200; ++trial)
  {
    const Complex lambda(u(rng), u(rng));
    const ThetaValue t = theta(p, lambda, Sheet::upper);
    if (t.divergent)
      continue;
    const auto [v1, v2] = wavefunctions_from_theta(t.theta);
    const CMatrix h = evaluate(f, lambda);
    for (const auto &v : {v1, v2})
    {
      CVector x(2);
      x << v[0], v[1];
      const CVector hx = h * x;
      // Rayleigh-type eigenvalue estimate via the complex-symmetric form.
      const Complex e = x.transpose() * hx;
      const Complex norm = x.transpose() * x;
      CHECK((hx - (e / norm) * x).norm() < 1e-9 * std::max(1.0, h.norm()));
    }
  }
}

TEST_CASE("vanishing mixing angle keeps theta at zero")
{
  const TwoLevelParams p{1.0, 2.0, 2.0, -1.0, 0.0};
  for (double x : {-3.0, -0.5, 0.1, 0.7, 5.0})
  {
    const ThetaValue t = theta(p, Complex(x, 0.3 * x), Sheet::upper);
    CHECK(std::abs(t.tan_theta) < 1e-15);
  }
}

TEST_CASE("absorption map")
{
  const TwoLevelParams p{1.0, 2.0, 2.0, -1.0, kPi / 4.0};
  const EpPair g = absorption_ep(p);
  const double want = std::abs(p.delta_eps() / p.delta_om());
  CHECK(std::abs(g.plus.imag()) < 1e-15);
  CHECK(std::abs(g.minus.imag()) < 1e-15);
  CHECK(test::match_distance({g.plus, g.minus}, {want, -want}) < 1e-15);

  // Imaginary part changes sign across pi/4.
  for (double dphi : {0.01, 0.1, 0.3})
  {
    TwoLevelParams lo = p, hi = p;
    lo.phi -= dphi;
    hi.phi += dphi;
    const EpPair a = absorption_ep(lo);
    const EpPair b = absorption_ep(hi);
    CHECK(a.plus.imag() * b.plus.imag() < 0.0);
    CHECK(a.plus.imag() * a.minus.imag() > 0.0);
  }
}
