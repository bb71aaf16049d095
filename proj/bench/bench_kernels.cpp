#include <benchmark/benchmark.h>

#include <random>

#include "epx/kernels.hpp"
#include "epx/model.hpp"

namespace
{

epx::MatrixFamily random_family(int n)
{
  std::mt19937_64 rng(7);
  std::normal_distribution<double> d;
  epx::CMatrix a(n, n), b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      a(i, j) = a(j, i) = d(rng);
      b(i, j) = b(j, i) = d(rng);
    }
  return {a, b};
}

std::vector<epx::Complex> circle(int m)
{
  std::vector<epx::Complex> out;
  for (int k = 0; k < m; ++k)
    out.push_back(std::polar(2.0, 2.0 * 3.141592653589793 * k / m));
  return out;
}

template <epx::kernels::Exec E>
void BM_sample_discriminant(benchmark::State &state)
{
  auto f = random_family(static_cast<int>(state.range(0)));
  auto lambdas = circle(512);
  for (auto _ : state)
    benchmark::DoNotOptimize(epx::kernels::sample_discriminant(f, lambdas, E));
}

template <epx::kernels::Exec E>
void BM_sample_spectra(benchmark::State &state)
{
  auto f = random_family(static_cast<int>(state.range(0)));
  auto lambdas = circle(512);
  for (auto _ : state)
    benchmark::DoNotOptimize(epx::kernels::sample_spectra(f, lambdas, E));
}

}  // namespace

BENCHMARK(BM_sample_discriminant<epx::kernels::Exec::serial>)->Arg(4)->Arg(8);
BENCHMARK(BM_sample_discriminant<epx::kernels::Exec::parallel>)->Arg(4)->Arg(8);
BENCHMARK(BM_sample_spectra<epx::kernels::Exec::serial>)->Arg(4)->Arg(8);
BENCHMARK(BM_sample_spectra<epx::kernels::Exec::parallel>)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
