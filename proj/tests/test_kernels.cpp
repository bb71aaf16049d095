#include <doctest.h>

#include <atomic>

#include "epx/kernels.hpp"
#include "support.hpp"

using namespace epx;
using kernels::Exec;

namespace
{

std::vector<Complex> ring(int m, double r)
{
  std::vector<Complex> out;
  for (int k = 0; k < m; ++k)
    out.push_back(std::polar(r, 2.0 * test::kPi * k / m));
  return out;
}

}  // namespace

TEST_CASE("discriminant of a spectrum")
{
  const std::vector<Complex> v{1.0, 3.0, Complex(0.0, 1.0)};
  const Complex want = 4.0 * std::pow(Complex(1.0, -1.0), 2) * std::pow(Complex(3.0, -1.0), 2);
  CHECK(std::abs(kernels::discriminant_of(v) - want) < 1e-13);
  CHECK(kernels::min_gap_of(v) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("serial and parallel kernels agree exactly")
{
  std::mt19937_64 rng(41);
  const MatrixFamily f = test::random_symmetric(4, rng);
  const auto lambdas = ring(97, 1.7);
  const auto a = kernels::sample_discriminant(f, lambdas, Exec::serial);
  const auto b = kernels::sample_discriminant(f, lambdas, Exec::parallel);
  CHECK(a.values == b.values);
  CHECK(a.min_gaps == b.min_gaps);
  CHECK(a.spectral_scale == b.spectral_scale);
  CHECK(kernels::sample_spectra(f, lambdas, Exec::serial) ==
        kernels::sample_spectra(f, lambdas, Exec::parallel));
}

TEST_CASE("for_each_index visits each index once and rethrows")
{
  std::vector<std::atomic<int>> hits(200);
  kernels::for_each_index(hits.size(), Exec::parallel, [&](std::size_t i) { hits[i]++; });
  for (const auto &h : hits)
    CHECK(h.load() == 1);

  CHECK_THROWS_AS(kernels::for_each_index(50, Exec::parallel,
                                          [](std::size_t i)
                                          {
                                            if (i == 17)
                                              throw std::runtime_error("boom");
                                          }),
                  std::runtime_error);
}
