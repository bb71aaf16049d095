#include "epx/kernels.hpp"

#include <algorithm>
#include <limits>
#include <mutex>

#include "epx/spectral.hpp"

namespace epx::kernels
{

void for_each_index(std::size_t n, Exec exec, const std::function<void(std::size_t)> &fn)
{
  if (exec == Exec::serial)
  {
    for (std::size_t i = 0; i < n; ++i)
    {
      fn(i);
    }
    return;
  }

  std::exception_ptr first;
  std::mutex guard;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i)
  {
    try
    {
      fn(static_cast<std::size_t>(i));
    }
    catch (...)
    {
      std::lock_guard lock(guard);
      if (!first)
      {
        first = std::current_exception();
      }
    }
  }
  if (first)
  {
    std::rethrow_exception(first);
  }
}

Complex discriminant_of(std::span<const Complex> values)
{
  Complex d = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i)
  {
    for (std::size_t j = i + 1; j < values.size(); ++j)
    {
      const Complex diff = values[i] - values[j];
      d *= diff * diff;
    }
  }
  return d;
}

double min_gap_of(std::span<const Complex> values)
{
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i)
  {
    for (std::size_t j = i + 1; j < values.size(); ++j)
    {
      g = std::min(g, std::abs(values[i] - values[j]));
    }
  }
  return g;
}

DiscriminantSamples sample_discriminant(const MatrixFamily &f, std::span<const Complex> lambdas,
                                        Exec exec)
{
  DiscriminantSamples out;
  out.values.resize(lambdas.size());
  out.min_gaps.resize(lambdas.size());
  std::vector<double> scales(lambdas.size());
  for_each_index(lambdas.size(), exec,
                 [&](std::size_t m)
                 {
                   const std::vector<Complex> ev = eigenvalues(evaluate(f, lambdas[m]));
                   out.values[m] = discriminant_of(ev);
                   out.min_gaps[m] = min_gap_of(ev);
                   double s = 0.0;
                   for (const auto &e : ev)
                   {
                     s = std::max(s, std::abs(e));
                   }
                   scales[m] = s;
                 });
  out.spectral_scale = scales.empty() ? 0.0 : *std::max_element(scales.begin(), scales.end());
  return out;
}

std::vector<std::vector<Complex>> sample_spectra(const MatrixFamily &f,
                                                 std::span<const Complex> lambdas, Exec exec)
{
  std::vector<std::vector<Complex>> out(lambdas.size());
  for_each_index(lambdas.size(), exec,
                 [&](std::size_t m)
                 {
                   std::vector<Complex> ev = eigenvalues(evaluate(f, lambdas[m]));
                   std::sort(ev.begin(), ev.end(),
                             [](Complex a, Complex b)
                             {
                               if (a.real() != b.real())
                               {
                                 return a.real() < b.real();
                               }
                               return a.imag() < b.imag();
                             });
                   out[m] = std::move(ev);
                 });
  return out;
}

}  // namespace epx::kernels
